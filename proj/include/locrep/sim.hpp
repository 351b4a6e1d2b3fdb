#pragma once

// Counter-level simulation of node failures and block repair on a cluster
// holding rep3, RS(10,4) or (10,6,5) LRC stripes.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "locrep/lrc.hpp"
#include "locrep/reliability.hpp"

namespace locrep::sim {

using reliability::Scheme;

enum class RsReadMode {
  kDeployed,   // every surviving block of the stripe
  kEfficient,  // exactly k
};

struct SimConfig {
  std::size_t nodes = 50;
  std::size_t files = 200;
  // Data blocks per file; rs and lrc group them into stripes of 10.
  std::size_t blocks_per_file = 10;
  Scheme scheme = Scheme::kLrc;
  std::uint64_t block_size_bytes = 64'000'000;
  double gamma_bps = 1e9;
  std::uint64_t seed = 1;
  std::vector<std::size_t> schedule;
  RsReadMode rs_read_mode = RsReadMode::kDeployed;
  // Carry real payloads through the codecs and compare after each repair.
  bool verify = false;
  std::size_t verify_payload_bytes = 64;
};

// key=value lines, '#' comments. schedule is a comma list of kill counts.
SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::string& path);

struct EventMetrics {
  std::size_t event_id = 0;
  std::size_t nodes_killed = 0;
  std::size_t blocks_lost = 0;
  std::size_t blocks_read = 0;
  std::uint64_t bytes_read = 0;
  std::uint64_t network_bytes = 0;
  double repair_duration_s = 0;
  std::size_t data_loss_stripes = 0;

  bool operator==(const EventMetrics&) const = default;
};

struct StripeState {
  std::size_t file = 0;
  // Node hosting each block, or -1 while the block is missing.
  std::vector<long> node_of;
  bool data_lost = false;
  std::vector<Block> payload;  // verify mode only
};

struct Node {
  bool alive = true;
};

class ClusterState {
 public:
  const SimConfig& config() const noexcept { return cfg_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<StripeState>& stripes() const noexcept { return stripes_; }
  std::size_t width() const noexcept { return width_; }
  const std::vector<std::vector<std::size_t>>& killed() const noexcept { return killed_; }
  std::size_t verified_blocks() const noexcept { return verified_; }
  std::size_t verify_mismatches() const noexcept { return mismatches_; }

  // Blocks of live stripes currently hosted on `node`.
  std::size_t blocks_on(std::size_t node) const;
  // No node hosts two blocks of one stripe.
  bool placement_valid() const;

 private:
  friend ClusterState build_cluster(const SimConfig& cfg);
  friend std::vector<EventMetrics> run_schedule(ClusterState& c,
                                                const std::vector<std::size_t>& kills);

  SimConfig cfg_;
  std::size_t width_ = 0;
  std::vector<Node> nodes_;
  std::vector<StripeState> stripes_;
  std::mt19937_64 place_rng_;
  std::mt19937_64 kill_rng_;
  std::vector<std::vector<std::size_t>> killed_;
  std::size_t verified_ = 0;
  std::size_t mismatches_ = 0;
};

// Throws Error(kInvalidArgument) if nodes < stripe width.
ClusterState build_cluster(const SimConfig& cfg);

// Each entry kills that many random live nodes, then repairs every affected
// stripe and re-places rebuilt blocks.
std::vector<EventMetrics> run_schedule(ClusterState& c, const std::vector<std::size_t>& kills);

// Builds the cluster and runs cfg.schedule.
std::vector<EventMetrics> simulate(const SimConfig& cfg);

// Least-squares slope of blocks_read against blocks_lost (with intercept).
// Throws Error(kInvalidArgument) for fewer than two events or constant x.
double fit_slope(const std::vector<EventMetrics>& events);

struct Totals {
  std::size_t blocks_lost = 0;
  std::size_t blocks_read = 0;
  std::uint64_t bytes_read = 0;
  double repair_duration_s = 0;
  std::size_t data_loss_stripes = 0;
  double reads_per_lost_block() const {
    return blocks_lost ? static_cast<double>(blocks_read) / blocks_lost : 0.0;
  }
};
Totals totals(const std::vector<EventMetrics>& events);

std::string trace_csv(const std::vector<EventMetrics>& events);
std::vector<EventMetrics> parse_trace(std::string_view csv);
// Throws Error(kIo) on failure.
void export_trace(const std::vector<EventMetrics>& events, const std::string& path);

}  // namespace locrep::sim
