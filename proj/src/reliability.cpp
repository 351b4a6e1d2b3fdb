#include "locrep/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <sstream>

#include "locrep/error.hpp"
#include "locrep/lrc.hpp"

namespace locrep::reliability {

namespace {

// Lost blocks that end the stripe.
std::size_t loss_state(Scheme s) { return s == Scheme::kRep3 ? 3 : 5; }

std::string sci(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4E", v);
  return buf;
}

}  // namespace

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::kRep3: return "rep3";
    case Scheme::kRs: return "rs_10_4";
    case Scheme::kLrc: return "lrc_10_6_5";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "rep3") return Scheme::kRep3;
  if (name == "rs" || name == "rs_10_4") return Scheme::kRs;
  if (name == "lrc" || name == "lrc_10_6_5") return Scheme::kLrc;
  throw Error(ErrorKind::kInvalidArgument, "unknown scheme '" + std::string(name) + "'");
}

std::size_t stripe_width(Scheme s) {
  switch (s) {
    case Scheme::kRep3: return 3;
    case Scheme::kRs: return 14;
    case Scheme::kLrc: return 16;
  }
  return 0;
}

std::vector<double> lrc_expected_blocks(std::size_t max_lost) {
  static std::mutex mu;
  static std::vector<double> cache;
  std::lock_guard lock(mu);
  if (cache.size() > max_lost) return {cache.begin(), cache.begin() + max_lost + 1};

  const auto code = lrc::LrcCode::build(gf::Field::make(8), 10, 4, 5);
  const std::size_t n = code.stored_blocks();
  std::vector<double> out(max_lost + 1, 0.0);
  for (std::size_t j = 1; j <= max_lost; ++j) {
    std::vector<bool> mask(n, false);
    std::fill(mask.begin(), mask.begin() + static_cast<long>(j), true);
    double sum = 0;
    std::size_t patterns = 0;
    do {
      std::vector<std::size_t> lost;
      for (std::size_t i = 0; i < n; ++i)
        if (mask[i]) lost.push_back(i);
      // The chain repairs one block per transition, so each lost block is
      // charged its own step's sources.
      const auto plan = lrc::plan_repair(code, lost);
      double reads = 0;
      for (const auto& step : plan.steps) reads += static_cast<double>(step.sources.size());
      sum += reads / static_cast<double>(j);
      ++patterns;
    } while (std::prev_permutation(mask.begin(), mask.end()));
    out[j] = sum / static_cast<double>(patterns);
  }
  cache = out;
  return out;
}

MarkovModel build_chain(Scheme s, const ClusterParams& p) {
  if (!(p.total_bytes > 0 && p.block_bytes > 0 && p.failure_rate >= 0 && p.repair_bps > 0 &&
        p.nodes > 0)) {
    throw Error(ErrorKind::kInvalidArgument, "cluster parameters must be positive");
  }
  MarkovModel m;
  m.scheme = s;
  m.width = stripe_width(s);
  const std::size_t f = loss_state(s);
  std::vector<double> blocks(f, 0.0);
  if (s == Scheme::kLrc) {
    blocks = lrc_expected_blocks(f - 1);
  } else {
    const double per = s == Scheme::kRep3 ? 1.0 : 10.0;
    for (std::size_t j = 1; j < f; ++j) blocks[j] = per;
  }
  for (std::size_t j = 0; j < f; ++j) {
    m.fail_rate.push_back(static_cast<double>(m.width - j) * p.failure_rate);
    m.repair_rate.push_back(j == 0 ? 0.0 : p.repair_bps / (8.0 * p.block_bytes * blocks[j]));
  }
  m.blocks_per_repair = std::move(blocks);
  return m;
}

double mttdl_stripe(const MarkovModel& m) {
  if (m.fail_rate.empty() || m.repair_rate.size() != m.fail_rate.size()) {
    throw Error(ErrorKind::kInvalidArgument, "malformed chain");
  }
  // tau_j: expected time to first reach j+1 from j.
  double tau = 0, total = 0;
  for (std::size_t j = 0; j < m.fail_rate.size(); ++j) {
    const double lam = m.fail_rate[j];
    const double rho = j == 0 ? 0.0 : m.repair_rate[j];
    if (!(lam > 0)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "state " + std::to_string(j) + " cannot reach data loss");
    }
    if (rho < 0) throw Error(ErrorKind::kInvalidArgument, "negative repair rate");
    tau = std::isinf(rho) ? std::numeric_limits<double>::infinity() : (1.0 + rho * tau) / lam;
    total += tau;
    if (!(total <= 1e300)) return std::numeric_limits<double>::infinity();
  }
  return total;
}

double stripe_count(Scheme s, const ClusterParams& p) {
  return p.total_bytes / (static_cast<double>(stripe_width(s)) * p.block_bytes);
}

double mttdl_system_days(Scheme s, const ClusterParams& p) {
  const double stripe = mttdl_stripe(build_chain(s, p));
  if (std::isinf(stripe)) return stripe;
  return stripe / stripe_count(s, p) / kSecondsPerDay;
}

std::vector<SummaryRow> summary_table(const ClusterParams& p) {
  struct Fixed {
    Scheme s;
    const char* overhead;
    const char* traffic;
  };
  const Fixed fixed[] = {{Scheme::kRep3, "2x", "1x"},
                         {Scheme::kRs, "0.4x", "10x"},
                         {Scheme::kLrc, "0.6x", "5x"}};
  std::vector<SummaryRow> rows;
  for (const auto& fx : fixed) {
    SummaryRow row;
    row.scheme = fx.s;
    row.overhead = fx.overhead;
    row.traffic = fx.traffic;
    row.mttdl_days = mttdl_system_days(fx.s, p);
    row.blocks_per_repair = build_chain(fx.s, p).blocks_per_repair;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_text(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %-9s %-8s %s\n", "scheme", "overhead", "traffic",
                "mttdl_days");
  os << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-12s %-9s %-8s %s\n", to_string(r.scheme),
                  r.overhead.c_str(), r.traffic.c_str(), sci(r.mttdl_days).c_str());
    os << line;
  }
  os << "\nexpected blocks read per repaired block, by lost-block state:\n";
  for (const auto& r : rows) {
    os << "  " << to_string(r.scheme) << ":";
    for (std::size_t j = 1; j < r.blocks_per_repair.size(); ++j) {
      std::snprintf(line, sizeof line, " s%zu=%.4f", j, r.blocks_per_repair[j]);
      os << line;
    }
    os << '\n';
  }
  return os.str();
}

std::string format_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  os << "scheme,overhead,traffic,mttdl_days\n";
  for (const auto& r : rows) {
    os << to_string(r.scheme) << ',' << r.overhead << ',' << r.traffic << ','
       << sci(r.mttdl_days) << '\n';
  }
  return os.str();
}

}  // namespace locrep::reliability
