#include "locrep/construct.hpp"

#include <cmath>
#include <string>

#include "locrep/bounds.hpp"
#include "locrep/error.hpp"
#include "locrep/lrc.hpp"

namespace locrep::construct {

namespace {

void check_shape(const gf::Field& f, const Shape& s) {
  if (!(1 <= s.r && s.r <= s.k && s.k < s.n)) {
    throw Error(ErrorKind::kInvalidArgument, "need 1 <= r <= k < n");
  }
  if (s.n % (s.r + 1) != 0) throw Error(ErrorKind::kInvalidArgument, "r+1 must divide n");
  if (s.n > f.order()) {
    throw Error(ErrorKind::kInvalidArgument,
                "field of size " + std::to_string(f.order()) + " too small for n=" +
                    std::to_string(s.n));
  }
}

struct TrialResult {
  std::optional<Systematic> code;
  std::size_t d = 0;
};

TrialResult run_trial(const gf::Field& f, const Shape& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TrialResult out;
  out.code = systematize(f, random_lrc(f, s, rng));
  if (out.code) out.d = lrc::brute_distance(f, out.code->generator);
  return out;
}

}  // namespace

std::vector<std::vector<std::size_t>> groups(const Shape& s) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t start = 0; start + s.r + 1 <= s.n; start += s.r + 1) {
    std::vector<std::size_t> g;
    for (std::size_t c = start; c < start + s.r + 1; ++c) g.push_back(c);
    out.push_back(std::move(g));
  }
  return out;
}

gf::Matrix random_lrc(const gf::Field& f, const Shape& s, std::mt19937_64& rng) {
  check_shape(f, s);
  std::uniform_int_distribution<gf::Element> nonzero(1, f.order() - 1);
  gf::Matrix g(s.k, s.n);
  for (const auto& grp : groups(s)) {
    const std::size_t last = grp.back();
    for (std::size_t c : grp) {
      if (c == last) break;
      for (std::size_t row = 0; row < s.k; ++row) g(row, c) = nonzero(rng);
      const gf::Element w = nonzero(rng);
      for (std::size_t row = 0; row < s.k; ++row) g(row, last) ^= f.mul(w, g(row, c));
    }
  }
  return g;
}

std::optional<Systematic> systematize(const gf::Field& f, const gf::Matrix& g) {
  std::vector<std::size_t> order(g.cols());
  for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
  auto info = gf::independent_columns(f, g, order, g.rows());
  if (info.size() < g.rows()) return std::nullopt;
  const auto t = gf::inverse(f, g.select_columns(info));
  return Systematic{gf::multiply(f, t, g), std::move(info)};
}

bool has_group_locality(const gf::Field& f, const gf::Matrix& g, const Shape& s) {
  for (const auto& grp : groups(s)) {
    for (std::size_t c : grp) {
      std::vector<std::size_t> mates;
      for (std::size_t o : grp)
        if (o != c) mates.push_back(o);
      if (!gf::in_column_span(f, g, mates, c)) return false;
    }
  }
  return true;
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  std::uint64_t z = master + trial + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

ConstructionAttempt construct_with_retry(const gf::Field& f, const Shape& s,
                                         std::size_t max_trials, std::uint64_t seed) {
  check_shape(f, s);
  ConstructionAttempt a;
  a.shape = s;
  a.field_bits = f.degree();
  a.seed = seed;
  a.bound = bounds::distance_bound(s.n, s.k, s.r);
  for (std::size_t t = 0; t < max_trials; ++t) {
    const auto ts = trial_seed(seed, t);
    auto res = run_trial(f, s, ts);
    ++a.trials;
    if (!res.code) continue;
    if (static_cast<std::int64_t>(res.d) > a.bound) a.bound_violated = true;
    if (!a.code || res.d > a.achieved_d) {
      a.achieved_d = res.d;
      a.trial_seed = ts;
      a.code = std::move(res.code);
    }
    if (static_cast<std::int64_t>(a.achieved_d) == a.bound) {
      a.success = true;
      break;
    }
  }
  return a;
}

SuccessRate success_rate(const gf::Field& f, const Shape& s, std::size_t trials,
                         std::uint64_t seed) {
  check_shape(f, s);
  const auto bound = bounds::distance_bound(s.n, s.k, s.r);
  SuccessRate out;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto res = run_trial(f, s, trial_seed(seed, t));
    ++out.trials;
    if (!res.code) continue;
    out.max_d = std::max(out.max_d, res.d);
    if (static_cast<std::int64_t>(res.d) > bound) out.bound_violated = true;
    if (static_cast<std::int64_t>(res.d) == bound) ++out.successes;
  }
  return out;
}

double rlnc_success_lower_bound(std::uint64_t collectors, std::uint64_t q, std::size_t eta) {
  if (collectors >= q) return 0.0;
  return std::pow(1.0 - static_cast<double>(collectors) / static_cast<double>(q),
                  static_cast<double>(eta));
}

}  // namespace locrep::construct
