#pragma once

// Locally repairable code layered on a systematic RS precode: one XOR local
// parity per data group of r blocks, and an implied local parity over the RS
// parities when the precode's columns sum to zero.
//
// Stored layout: data [0, k), RS parities [k, k+p), data-group local
// parities [k+p, k+p+k/r), then (only if alignment fails) one stored local
// parity over the RS parities.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "locrep/gf.hpp"
#include "locrep/rs.hpp"

namespace locrep {

// The blocks of one stripe; absent blocks have present[i] == false and their
// payload is ignored.
struct Stripe {
  std::vector<Block> blocks;
  std::vector<bool> present;

  std::size_t size() const noexcept { return blocks.size(); }
  std::vector<std::size_t> missing() const;
};

namespace lrc {

enum class BlockRole { kData, kRsParity, kLocalParity };

enum class Decoder { kLight, kHeavy };

const char* to_string(Decoder d);

struct RepairStep {
  std::size_t target = 0;
  Decoder decoder = Decoder::kLight;
  // Light repair of an RS parity through the implied local parity.
  bool via_implied_parity = false;
  std::vector<std::size_t> sources;
};

struct RepairPlan {
  std::vector<std::size_t> lost;
  std::vector<RepairStep> steps;
  // Sum of per-step source counts: each lost block is rebuilt by its own
  // read of its sources.
  std::size_t blocks_read = 0;
};

class LrcCode {
 public:
  // RS(k, p) precode over `field` plus local parities on groups of r data
  // blocks. Requires r | k.
  static LrcCode build(gf::FieldPtr field, std::size_t k, std::size_t p, std::size_t r);

  // Same layering over an arbitrary systematic k x (k+p) base generator. If
  // its columns do not sum to zero the parity-group local parity is stored.
  static LrcCode from_generator(gf::FieldPtr field, gf::Matrix base_generator,
                                std::size_t r);

  const gf::Field& field() const noexcept { return *field_; }
  const gf::FieldPtr& field_ptr() const noexcept { return field_; }
  std::size_t k() const noexcept { return k_; }
  std::size_t rs_parities() const noexcept { return p_; }
  std::size_t group_size() const noexcept { return r_; }
  std::size_t rs_length() const noexcept { return k_ + p_; }
  std::size_t data_groups() const noexcept { return k_ / r_; }
  std::size_t stored_blocks() const noexcept { return generator_.cols(); }
  bool parity_implied() const noexcept { return implied_; }

  // k x (k+p) precode generator and k x stored_blocks() LRC generator.
  const gf::Matrix& base_generator() const noexcept { return base_; }
  const gf::Matrix& generator() const noexcept { return generator_; }

  BlockRole role(std::size_t pos) const;
  // The blocks a light repair of `pos` reads.
  const std::vector<std::size_t>& repair_sources(std::size_t pos) const {
    return sources_.at(pos);
  }
  // {pos} together with its repair sources.
  std::vector<std::size_t> repair_group(std::size_t pos) const;
  std::vector<std::vector<std::size_t>> repair_groups() const;

  double storage_overhead() const noexcept {
    return static_cast<double>(stored_blocks()) / static_cast<double>(k_);
  }

  std::vector<gf::Element> encode(std::span<const gf::Element> data) const;
  // data.size() == k; returns all stored blocks.
  std::vector<Block> encode_blocks(std::span<const Block> data) const;
  Stripe encode_stripe(std::span<const Block> data) const;

 private:
  LrcCode() = default;

  gf::FieldPtr field_;
  std::size_t k_ = 0;
  std::size_t p_ = 0;
  std::size_t r_ = 0;
  bool implied_ = false;
  gf::Matrix base_;
  gf::Matrix generator_;
  std::vector<std::vector<std::size_t>> sources_;
};

// True iff the columns of G sum to zero.
bool columns_sum_to_zero(const gf::Matrix& g);
// True iff the precode columns sum to zero, which lets the parity-group
// local parity stay implied.
bool verify_alignment(const LrcCode& code);

// Light step for every lost block whose repair sources all survive, heavy
// otherwise. Throws UnrecoverableError if the survivors span < k dimensions.
RepairPlan plan_repair(const LrcCode& code, std::span<const std::size_t> erased);

// Applies the plan; every step's sources must be present. Throws
// Error(kPlanStale) otherwise.
Stripe execute_repair(const LrcCode& code, const Stripe& stripe, const RepairPlan& plan);

// Plans from the stripe's missing blocks and executes.
Stripe repair(const LrcCode& code, const Stripe& stripe, RepairPlan* plan_out = nullptr);

// Confirms each stored block is a function of its repair sources and returns
// the largest source count. A block that fails the check contributes its
// exhaustive locality instead.
std::size_t verify_locality(const LrcCode& code);

// Smallest number of other columns whose span contains column `col`
// (exhaustive search over subsets). Returns cols() if G has no such set.
std::size_t brute_column_locality(const gf::Field& f, const gf::Matrix& g, std::size_t col);
std::size_t brute_locality(const gf::Field& f, const gf::Matrix& g);

// Minimum number of column erasures that drop the rank below G.rows().
std::size_t brute_distance(const gf::Field& f, const gf::Matrix& g);

}  // namespace lrc
}  // namespace locrep
