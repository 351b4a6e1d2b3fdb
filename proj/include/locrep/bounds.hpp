#pragma once

// Locality-distance bound, the greedy non-decoding set certificate, and the
// information flow graph whose source-DC cuts mirror the bound.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "locrep/gf.hpp"

namespace locrep::bounds {

// n - ceil(k/r) - k + 2. May be < 1, meaning no code with these parameters
// and locality r exists. Requires 1 <= r <= k < n.
std::int64_t distance_bound(std::size_t n, std::size_t k, std::size_t r);

// Largest column set with rank < k built by accreting whole repair groups
// while the rank stays below k, then single columns. n - |S| bounds the
// distance from above.
std::vector<std::size_t> build_nondecoding_set(const gf::Field& f, const gf::Matrix& g,
                                               const std::vector<std::vector<std::size_t>>& groups);

enum class VertexKind { kSource, kFileBlock, kGroupIn, kGroupOut, kBlockIn, kBlockOut, kCollector };

struct FlowEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  std::int64_t capacity = 0;
};

// Capacities are scaled by k: a file of size M carries k units, a coded
// block carries 1, a group bottleneck carries r.
struct FlowGraph {
  std::size_t k = 0, n = 0, r = 0, d = 0;
  std::int64_t infinity = 0;
  std::vector<VertexKind> vertices;
  // Edges excluding the super-source, which feeds every file block with 1.
  std::vector<FlowEdge> edges;
  std::vector<std::size_t> file_blocks;
  std::vector<std::size_t> collectors;
  // Coded blocks each collector reads, in increasing order.
  std::vector<std::vector<std::size_t>> collector_blocks;
  // C(n, n-d+1); equals collectors.size() when enumeration is exhaustive.
  std::uint64_t total_collectors = 0;
  // Vertex 0 is the super-source; Y_j^in is block_base + 2j and Y_j^out the next vertex.
  std::size_t block_base = 0;
};

struct CollectorSelection {
  // 0 enumerates every collector; otherwise this many distinct ones are drawn.
  std::size_t samples = 0;
  std::uint64_t seed = 1;
};

// Closed-form edge count n(k+2r+3)/(r+1) + T(n-d+1) with T = C(n, n-d+1).
std::uint64_t expected_edge_count(std::size_t k, std::size_t n, std::size_t r, std::size_t d);

// Requires (r+1) | n, 1 <= r <= k < n and 1 <= d <= n.
FlowGraph build_flow_graph(std::size_t k, std::size_t n, std::size_t r, std::size_t d,
                           CollectorSelection selection = {});

struct CutReport {
  std::vector<std::int64_t> collector_flow;
  std::int64_t min_flow = 0;
  std::size_t worst_collector = 0;
  bool pass = false;
  // Every solved flow respected capacities and conservation.
  bool flows_feasible = true;
};

// Max-flow from the super-source to each collector; pass iff all reach
// `file_size` (in scaled units, normally k).
CutReport min_cut_check(const FlowGraph& fg, std::int64_t file_size);

}  // namespace locrep::bounds
