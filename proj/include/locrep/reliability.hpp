#pragma once

// Birth-death Markov model of one stripe under independent node failures
// and one-block-at-a-time repair; MTTDL normalized by the stripe count.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace locrep::reliability {

enum class Scheme { kRep3, kRs, kLrc };

const char* to_string(Scheme s);
// Accepts rep3, rs, rs_10_4, lrc, lrc_10_6_5.
Scheme parse_scheme(std::string_view name);
std::size_t stripe_width(Scheme s);

constexpr double kSecondsPerDay = 86400.0;
constexpr double kSecondsPerYear = 365.0 * kSecondsPerDay;

// Decimal units throughout.
struct ClusterParams {
  double nodes = 3000;
  double total_bytes = 30e15;
  double block_bytes = 256e6;
  double failure_rate = 1.0 / (4 * kSecondsPerYear);  // per node, 1/s
  double repair_bps = 1e9;                              // cross-rack bits/s
};

// States 0..f, f absorbing. fail_rate[j] leaves j upward, repair_rate[j]
// leaves j downward (repair_rate[0] = 0).
struct MarkovModel {
  Scheme scheme = Scheme::kRep3;
  std::size_t width = 0;
  std::vector<double> fail_rate;
  std::vector<double> repair_rate;
  // Expected blocks downloaded to repair one block in state j.
  std::vector<double> blocks_per_repair;

  std::size_t absorbing() const noexcept { return fail_rate.size(); }
};

// Mean over every pattern of j lost blocks, and over the lost blocks, of the
// planner's source count for that block (5 light, 10 heavy), for
// j = 0..max_lost (entry 0 is 0).
std::vector<double> lrc_expected_blocks(std::size_t max_lost);

MarkovModel build_chain(Scheme s, const ClusterParams& p);

// Expected seconds from state 0 to absorption. +inf once past 1e300.
// Throws Error(kInvalidArgument) if some fail_rate is not positive.
double mttdl_stripe(const MarkovModel& m);

double stripe_count(Scheme s, const ClusterParams& p);
double mttdl_system_days(Scheme s, const ClusterParams& p);

struct SummaryRow {
  Scheme scheme = Scheme::kRep3;
  std::string overhead;
  std::string traffic;
  double mttdl_days = 0;
  std::vector<double> blocks_per_repair;
};

std::vector<SummaryRow> summary_table(const ClusterParams& p);
// Aligned table followed by the per-state download assumptions.
std::string format_text(const std::vector<SummaryRow>& rows);
// Header: scheme,overhead,traffic,mttdl_days
std::string format_csv(const std::vector<SummaryRow>& rows);

}  // namespace locrep::reliability
