#include "locrep/lrc.hpp"

#include <algorithm>
#include <string>

#include "locrep/error.hpp"

namespace locrep {

std::vector<std::size_t> Stripe::missing() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < present.size(); ++i)
    if (!present[i]) out.push_back(i);
  return out;
}

namespace lrc {

namespace {

// Visits every size-s subset of [0, n) in lexicographic order until fn
// returns true. Returns whether fn ever returned true.
template <typename Fn>
bool for_each_subset(std::size_t n, std::size_t s, Fn&& fn) {
  if (s > n) return false;
  std::vector<std::size_t> idx(s);
  for (std::size_t i = 0; i < s; ++i) idx[i] = i;
  while (true) {
    if (fn(std::span<const std::size_t>(idx))) return true;
    std::size_t i = s;
    while (i > 0 && idx[i - 1] == n - s + i - 1) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

const char* to_string(Decoder d) { return d == Decoder::kLight ? "light" : "heavy"; }

LrcCode LrcCode::build(gf::FieldPtr field, std::size_t k, std::size_t p, std::size_t r) {
  if (!field) throw Error(ErrorKind::kInvalidArgument, "null field");
  auto base = rs::RsCode::build(field, k, k + p);
  return from_generator(std::move(field), base.generator(), r);
}

LrcCode LrcCode::from_generator(gf::FieldPtr field, gf::Matrix base_generator,
                                std::size_t r) {
  if (!field) throw Error(ErrorKind::kInvalidArgument, "null field");
  const std::size_t k = base_generator.rows();
  if (k == 0 || base_generator.cols() <= k) {
    throw Error(ErrorKind::kInvalidArgument, "base generator must be k x n with n > k");
  }
  if (r == 0 || k % r != 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "group size r=" + std::to_string(r) + " must divide k=" + std::to_string(k));
  }
  if (!(base_generator.column_block(0, k) == gf::Matrix::identity(k))) {
    throw Error(ErrorKind::kInvalidArgument, "base generator must be systematic");
  }

  LrcCode code;
  code.field_ = std::move(field);
  code.k_ = k;
  code.p_ = base_generator.cols() - k;
  code.r_ = r;
  code.implied_ = columns_sum_to_zero(base_generator);
  code.base_ = std::move(base_generator);

  const std::size_t groups = k / r;
  const std::size_t n_rs = code.k_ + code.p_;
  const std::size_t n_stored = n_rs + groups + (code.implied_ ? 0 : 1);

  gf::Matrix local(k, n_stored - n_rs);
  for (std::size_t g = 0; g < groups; ++g)
    for (std::size_t i = g * r; i < (g + 1) * r; ++i)
      for (std::size_t row = 0; row < k; ++row) local(row, g) ^= code.base_(row, i);
  if (!code.implied_) {
    for (std::size_t j = k; j < n_rs; ++j)
      for (std::size_t row = 0; row < k; ++row) local(row, groups) ^= code.base_(row, j);
  }
  code.generator_ = code.base_.hconcat(local);

  code.sources_.assign(n_stored, {});
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t parity = n_rs + g;
    for (std::size_t i = g * r; i < (g + 1) * r; ++i) {
      for (std::size_t j = g * r; j < (g + 1) * r; ++j)
        if (j != i) code.sources_[i].push_back(j);
      code.sources_[i].push_back(parity);
      code.sources_[parity].push_back(i);
    }
  }
  for (std::size_t j = k; j < n_rs; ++j) {
    auto& src = code.sources_[j];
    for (std::size_t o = k; o < n_rs; ++o)
      if (o != j) src.push_back(o);
    if (code.implied_) {
      for (std::size_t g = 0; g < groups; ++g) src.push_back(n_rs + g);
    } else {
      src.push_back(n_stored - 1);
    }
  }
  if (!code.implied_) {
    for (std::size_t j = k; j < n_rs; ++j) code.sources_[n_stored - 1].push_back(j);
  }
  return code;
}

BlockRole LrcCode::role(std::size_t pos) const {
  if (pos >= stored_blocks()) throw Error(ErrorKind::kInvalidArgument, "position out of range");
  if (pos < k_) return BlockRole::kData;
  if (pos < k_ + p_) return BlockRole::kRsParity;
  return BlockRole::kLocalParity;
}

std::vector<std::size_t> LrcCode::repair_group(std::size_t pos) const {
  std::vector<std::size_t> g = sources_.at(pos);
  g.push_back(pos);
  std::sort(g.begin(), g.end());
  return g;
}

std::vector<std::vector<std::size_t>> LrcCode::repair_groups() const {
  std::vector<std::vector<std::size_t>> out;
  out.reserve(stored_blocks());
  for (std::size_t i = 0; i < stored_blocks(); ++i) out.push_back(repair_group(i));
  return out;
}

std::vector<gf::Element> LrcCode::encode(std::span<const gf::Element> data) const {
  if (data.size() != k_) {
    throw Error(ErrorKind::kDimensionMismatch, "encode expects " + std::to_string(k_) +
                                                   " symbols, got " +
                                                   std::to_string(data.size()));
  }
  return gf::multiply(*field_, data, generator_);
}

std::vector<Block> LrcCode::encode_blocks(std::span<const Block> data) const {
  std::vector<std::size_t> cols;
  for (std::size_t j = k_; j < stored_blocks(); ++j) cols.push_back(j);
  auto parities = code::encode_columns(*field_, generator_, data, cols);
  std::vector<Block> out(data.begin(), data.end());
  for (auto& b : parities) out.push_back(std::move(b));
  return out;
}

Stripe LrcCode::encode_stripe(std::span<const Block> data) const {
  Stripe s;
  s.blocks = encode_blocks(data);
  s.present.assign(s.blocks.size(), true);
  return s;
}

bool columns_sum_to_zero(const gf::Matrix& g) {
  for (std::size_t r = 0; r < g.rows(); ++r) {
    gf::Element acc = 0;
    for (gf::Element e : g.row(r)) acc ^= e;
    if (acc != 0) return false;
  }
  return true;
}

bool verify_alignment(const LrcCode& code) { return columns_sum_to_zero(code.base_generator()); }

RepairPlan plan_repair(const LrcCode& code, std::span<const std::size_t> erased) {
  if (erased.empty()) throw Error(ErrorKind::kInvalidArgument, "nothing to repair");
  const std::size_t n = code.stored_blocks();
  std::vector<bool> lost(n, false);
  RepairPlan plan;
  for (std::size_t e : erased) {
    if (e >= n) {
      throw Error(ErrorKind::kInvalidArgument, "erased position " + std::to_string(e) +
                                                   " out of range");
    }
    if (!lost[e]) plan.lost.push_back(e);
    lost[e] = true;
  }
  std::sort(plan.lost.begin(), plan.lost.end());

  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < n; ++i)
    if (!lost[i]) survivors.push_back(i);
  // Survivors in index order, so heavy decodes prefer data and RS blocks.
  const auto info_set =
      gf::independent_columns(code.field(), code.generator(), survivors, code.k());
  if (info_set.size() < code.k()) {
    throw UnrecoverableError(plan.lost, "stripe unrecoverable");
  }

  for (std::size_t target : plan.lost) {
    RepairStep step;
    step.target = target;
    const auto& src = code.repair_sources(target);
    const bool intact = std::none_of(src.begin(), src.end(), [&](std::size_t s) { return lost[s]; });
    if (intact) {
      step.decoder = Decoder::kLight;
      step.sources = src;
      step.via_implied_parity =
          code.parity_implied() && code.role(target) == BlockRole::kRsParity;
    } else {
      step.decoder = Decoder::kHeavy;
      step.sources = info_set;
    }
    plan.blocks_read += step.sources.size();
    plan.steps.push_back(std::move(step));
  }

  return plan;
}

Stripe execute_repair(const LrcCode& code, const Stripe& stripe, const RepairPlan& plan) {
  const std::size_t n = code.stored_blocks();
  if (stripe.blocks.size() != n || stripe.present.size() != n) {
    throw Error(ErrorKind::kDimensionMismatch, "stripe has " +
                                                   std::to_string(stripe.blocks.size()) +
                                                   " blocks, code stores " + std::to_string(n));
  }
  const gf::Field& f = code.field();
  const gf::Matrix& g = code.generator();
  Stripe out = stripe;

  std::size_t len = 0;
  bool have_len = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (stripe.present[i]) {
      len = stripe.blocks[i].size();
      have_len = true;
      break;
    }
  }
  if (!have_len) throw UnrecoverableError(stripe.missing(), "stripe has no blocks");

  std::vector<bool> lost(n, false);
  for (std::size_t p : plan.lost) lost.at(p) = true;

  for (const auto& step : plan.steps) {
    for (std::size_t s : step.sources) {
      if (s >= n || !stripe.present[s] || lost[s]) {
        throw Error(ErrorKind::kPlanStale, "source block " + std::to_string(s) +
                                               " unavailable for target " +
                                               std::to_string(step.target));
      }
      if (stripe.blocks[s].size() != len) {
        throw Error(ErrorKind::kDimensionMismatch, "block sizes differ within stripe");
      }
    }
    Block rebuilt(len, 0);
    if (step.decoder == Decoder::kLight) {
      const auto coeffs =
          gf::solve_any(f, g.select_columns(step.sources), g.column(step.target));
      if (!coeffs) {
        throw Error(ErrorKind::kInternal, "target not in span of its repair group");
      }
      for (std::size_t i = 0; i < step.sources.size(); ++i) {
        f.mul_acc_region((*coeffs)[i], stripe.blocks[step.sources[i]], rebuilt);
      }
    } else {
      std::vector<BlockShare> shares;
      shares.reserve(step.sources.size());
      for (std::size_t s : step.sources) shares.push_back({s, stripe.blocks[s]});
      const auto data = code::decode_blocks(f, g, shares);
      const std::size_t col[] = {step.target};
      rebuilt = std::move(code::encode_columns(f, g, data, col).front());
    }
    out.blocks[step.target] = std::move(rebuilt);
    out.present[step.target] = true;
  }
  return out;
}

Stripe repair(const LrcCode& code, const Stripe& stripe, RepairPlan* plan_out) {
  const auto missing = stripe.missing();
  if (missing.empty()) {
    if (plan_out) *plan_out = {};
    return stripe;
  }
  auto plan = plan_repair(code, missing);
  Stripe out = execute_repair(code, stripe, plan);
  if (plan_out) *plan_out = std::move(plan);
  return out;
}

std::size_t verify_locality(const LrcCode& code) {
  const gf::Matrix& g = code.generator();
  std::size_t worst = 0;
  for (std::size_t c = 0; c < g.cols(); ++c) {
    const auto& src = code.repair_sources(c);
    const std::size_t loc = gf::in_column_span(code.field(), g, src, c)
                                ? src.size()
                                : brute_column_locality(code.field(), g, c);
    worst = std::max(worst, loc);
  }
  return worst;
}

std::size_t brute_column_locality(const gf::Field& f, const gf::Matrix& g, std::size_t col) {
  const std::size_t n = g.cols();
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < n; ++i)
    if (i != col) others.push_back(i);
  const auto target = g.column(col);
  if (std::all_of(target.begin(), target.end(), [](gf::Element e) { return e == 0; })) return 0;
  for (std::size_t s = 1; s <= others.size(); ++s) {
    const bool found = for_each_subset(others.size(), s, [&](std::span<const std::size_t> idx) {
      gf::SpanBasis basis(f, g.rows());
      for (std::size_t i : idx) basis.add(g.column(others[i]));
      return basis.contains(target);
    });
    if (found) return s;
  }
  return n;
}

std::size_t brute_locality(const gf::Field& f, const gf::Matrix& g) {
  std::size_t worst = 0;
  for (std::size_t c = 0; c < g.cols(); ++c)
    worst = std::max(worst, brute_column_locality(f, g, c));
  return worst;
}

std::size_t brute_distance(const gf::Field& f, const gf::Matrix& g) {
  const std::size_t n = g.cols();
  const std::size_t k = g.rows();
  std::vector<std::vector<gf::Element>> cols;
  cols.reserve(n);
  for (std::size_t c = 0; c < n; ++c) cols.push_back(g.column(c));

  std::vector<bool> erased(n);
  for (std::size_t e = 0; e <= n; ++e) {
    const bool fails = for_each_subset(n, e, [&](std::span<const std::size_t> idx) {
      std::fill(erased.begin(), erased.end(), false);
      for (std::size_t i : idx) erased[i] = true;
      gf::SpanBasis basis(f, k);
      for (std::size_t c = 0; c < n && basis.rank() < k; ++c)
        if (!erased[c]) basis.add(cols[c]);
      return basis.rank() < k;
    });
    if (fails) return e;
  }
  return n + 1;
}

}  // namespace lrc
}  // namespace locrep
