#pragma once

// Randomized construction of codes with (r+1)-group locality, checked
// against the distance bound by exhaustive search.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "locrep/gf.hpp"

namespace locrep::construct {

struct Shape {
  std::size_t k = 0;
  std::size_t n = 0;
  std::size_t r = 0;
};

// Consecutive column groups {0..r}, {r+1..2r+1}, ...
std::vector<std::vector<std::size_t>> groups(const Shape& s);

// k x n generator: per group, r columns with independent uniform nonzero
// entries and one column equal to a nonzero-weighted sum of them.
// Requires (r+1) | n, 1 <= r <= k < n <= q.
gf::Matrix random_lrc(const gf::Field& f, const Shape& s, std::mt19937_64& rng);

struct Systematic {
  gf::Matrix generator;
  // Columns that carry the identity, in row order.
  std::vector<std::size_t> info_set;
};

// Row-reduces G onto its first information set (greedy, left to right).
// nullopt if rank(G) < k.
std::optional<Systematic> systematize(const gf::Field& f, const gf::Matrix& g);

// Every column lies in the span of its group-mates.
bool has_group_locality(const gf::Field& f, const gf::Matrix& g, const Shape& s);

// splitmix64 of master + trial; each trial seeds its own mt19937_64.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial);

struct ConstructionAttempt {
  Shape shape;
  unsigned field_bits = 0;
  std::uint64_t seed = 0;
  std::int64_t bound = 0;
  bool success = false;
  std::size_t trials = 0;
  // Seed of the returned trial (the successful one, or the best on failure).
  std::uint64_t trial_seed = 0;
  std::size_t achieved_d = 0;
  // Some trial produced d above the bound; never expected.
  bool bound_violated = false;
  std::optional<Systematic> code;
};

// Draws codes until one reaches distance_bound or max_trials run out.
ConstructionAttempt construct_with_retry(const gf::Field& f, const Shape& s,
                                         std::size_t max_trials, std::uint64_t seed);

struct SuccessRate {
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t max_d = 0;
  bool bound_violated = false;
  double rate() const { return trials ? static_cast<double>(successes) / trials : 0.0; }
};

// Runs every trial (no early exit) and counts those meeting the bound.
SuccessRate success_rate(const gf::Field& f, const Shape& s, std::size_t trials,
                         std::uint64_t seed);

// (1 - T/q)^eta, clamped at zero.
double rlnc_success_lower_bound(std::uint64_t collectors, std::uint64_t q, std::size_t eta);

}  // namespace locrep::construct
