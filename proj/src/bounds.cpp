#include "locrep/bounds.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <set>
#include <string>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/edmonds_karp_max_flow.hpp>

#include "locrep/error.hpp"

namespace locrep::bounds {

namespace {

void check_params(std::size_t n, std::size_t k, std::size_t r) {
  if (!(1 <= r && r <= k && k < n)) {
    throw Error(ErrorKind::kInvalidArgument,
                "need 1 <= r <= k < n, got n=" + std::to_string(n) + " k=" + std::to_string(k) +
                    " r=" + std::to_string(r));
  }
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t s) {
  if (s > n) return 0;
  s = std::min(s, n - s);
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= s; ++i) out = out * (n - s + i) / i;
  return out;
}

using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
using Graph = boost::adjacency_list<
    boost::vecS, boost::vecS, boost::directedS, boost::no_property,
    boost::property<boost::edge_capacity_t, std::int64_t,
                    boost::property<boost::edge_residual_capacity_t, std::int64_t,
                                    boost::property<boost::edge_reverse_t,
                                                    Traits::edge_descriptor>>>>;

struct FlowNetwork {
  Graph g;
  std::vector<Traits::edge_descriptor> forward;

  explicit FlowNetwork(std::size_t vertices) : g(vertices) {}

  void add(std::size_t from, std::size_t to, std::int64_t cap) {
    auto capacity = boost::get(boost::edge_capacity, g);
    auto reverse = boost::get(boost::edge_reverse, g);
    const auto e = boost::add_edge(from, to, g).first;
    const auto back = boost::add_edge(to, from, g).first;
    capacity[e] = cap;
    capacity[back] = 0;
    reverse[e] = back;
    reverse[back] = e;
    forward.push_back(e);
  }

  // Capacity bounds on forward edges and conservation away from s and t.
  bool feasible(std::size_t s, std::size_t t) const {
    auto capacity = boost::get(boost::edge_capacity, g);
    auto residual = boost::get(boost::edge_residual_capacity, g);
    std::vector<std::int64_t> net(boost::num_vertices(g), 0);
    for (const auto& e : forward) {
      const std::int64_t flow = capacity[e] - residual[e];
      if (flow < 0 || flow > capacity[e]) return false;
      net[boost::source(e, g)] -= flow;
      net[boost::target(e, g)] += flow;
    }
    for (std::size_t v = 0; v < net.size(); ++v)
      if (v != s && v != t && net[v] != 0) return false;
    return net[s] == -net[t];
  }
};

}  // namespace

std::int64_t distance_bound(std::size_t n, std::size_t k, std::size_t r) {
  check_params(n, k, r);
  const auto groups = static_cast<std::int64_t>((k + r - 1) / r);
  return static_cast<std::int64_t>(n) - groups - static_cast<std::int64_t>(k) + 2;
}

std::vector<std::size_t> build_nondecoding_set(
    const gf::Field& f, const gf::Matrix& g, const std::vector<std::vector<std::size_t>>& groups) {
  const std::size_t k = g.rows();
  const std::size_t n = g.cols();
  for (const auto& grp : groups)
    for (std::size_t c : grp)
      if (c >= n) throw Error(ErrorKind::kInvalidArgument, "group column out of range");

  std::vector<bool> in_set(n, false);
  std::vector<std::size_t> chosen;
  gf::SpanBasis span(f, k);

  // Whole groups first, preferring the one that adds the most columns per
  // unit of rank (i.e. the most dependencies).
  while (true) {
    std::size_t best = groups.size();
    std::int64_t best_surplus = -1;
    std::size_t best_new = 0;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      gf::SpanBasis trial = span;
      std::size_t fresh = 0;
      for (std::size_t c : groups[gi]) {
        if (in_set[c]) continue;
        ++fresh;
        trial.add(g.column(c));
      }
      if (fresh == 0 || trial.rank() >= k) continue;
      const auto surplus = static_cast<std::int64_t>(fresh) -
                           static_cast<std::int64_t>(trial.rank() - span.rank());
      if (surplus > best_surplus || (surplus == best_surplus && fresh > best_new)) {
        best = gi;
        best_surplus = surplus;
        best_new = fresh;
      }
    }
    if (best == groups.size()) break;
    for (std::size_t c : groups[best]) {
      if (in_set[c]) continue;
      in_set[c] = true;
      chosen.push_back(c);
      span.add(g.column(c));
    }
  }

  // Partial step: any column that keeps the rank below k. Free columns (already
  // in the span) go first so they are never crowded out.
  auto take = [&](std::size_t c) {
    in_set[c] = true;
    chosen.push_back(c);
    span.add(g.column(c));
  };
  while (true) {
    for (std::size_t c = 0; c < n; ++c)
      if (!in_set[c] && span.contains(g.column(c))) take(c);
    if (span.rank() + 1 >= k) break;
    std::size_t next = n;
    for (std::size_t c = 0; c < n && next == n; ++c)
      if (!in_set[c]) next = c;
    if (next == n) break;
    take(next);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::uint64_t expected_edge_count(std::size_t k, std::size_t n, std::size_t r, std::size_t d) {
  const std::uint64_t reads = n - d + 1;
  return n * (k + 2 * r + 3) / (r + 1) + reads * binomial(n, reads);
}

FlowGraph build_flow_graph(std::size_t k, std::size_t n, std::size_t r, std::size_t d,
                           CollectorSelection selection) {
  check_params(n, k, r);
  if (n % (r + 1) != 0) {
    throw Error(ErrorKind::kInvalidArgument, "group size r+1 must divide n");
  }
  if (d < 1 || d > n) throw Error(ErrorKind::kInvalidArgument, "need 1 <= d <= n");

  FlowGraph fg;
  fg.k = k;
  fg.n = n;
  fg.r = r;
  fg.d = d;
  fg.infinity = static_cast<std::int64_t>(n * k + 1);
  const std::size_t groups = n / (r + 1);
  const std::size_t reads = n - d + 1;
  fg.total_collectors = binomial(n, reads);

  fg.vertices.push_back(VertexKind::kSource);
  for (std::size_t i = 0; i < k; ++i) {
    fg.file_blocks.push_back(fg.vertices.size());
    fg.vertices.push_back(VertexKind::kFileBlock);
  }
  const std::size_t group_base = fg.vertices.size();
  for (std::size_t j = 0; j < groups; ++j) {
    fg.vertices.push_back(VertexKind::kGroupIn);
    fg.vertices.push_back(VertexKind::kGroupOut);
  }
  fg.block_base = fg.vertices.size();
  for (std::size_t j = 0; j < n; ++j) {
    fg.vertices.push_back(VertexKind::kBlockIn);
    fg.vertices.push_back(VertexKind::kBlockOut);
  }

  for (std::size_t x : fg.file_blocks)
    for (std::size_t j = 0; j < groups; ++j) fg.edges.push_back({x, group_base + 2 * j, fg.infinity});
  for (std::size_t j = 0; j < groups; ++j) {
    fg.edges.push_back({group_base + 2 * j, group_base + 2 * j + 1, static_cast<std::int64_t>(r)});
  }
  for (std::size_t j = 0; j < groups; ++j)
    for (std::size_t b = j * (r + 1); b < (j + 1) * (r + 1); ++b)
      fg.edges.push_back({group_base + 2 * j + 1, fg.block_base + 2 * b, fg.infinity});
  for (std::size_t b = 0; b < n; ++b) fg.edges.push_back({fg.block_base + 2 * b, fg.block_base + 2 * b + 1, 1});

  if (selection.samples == 0 || selection.samples >= fg.total_collectors) {
    std::vector<bool> mask(n, false);
    std::fill(mask.begin(), mask.begin() + static_cast<long>(reads), true);
    do {
      std::vector<std::size_t> pick;
      for (std::size_t i = 0; i < n; ++i)
        if (mask[i]) pick.push_back(i);
      fg.collector_blocks.push_back(std::move(pick));
    } while (std::prev_permutation(mask.begin(), mask.end()));
  } else {
    std::mt19937_64 rng(selection.seed);
    std::set<std::vector<std::size_t>> seen;
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    while (seen.size() < selection.samples) {
      std::shuffle(all.begin(), all.end(), rng);
      std::vector<std::size_t> pick(all.begin(), all.begin() + static_cast<long>(reads));
      std::sort(pick.begin(), pick.end());
      if (seen.insert(pick).second) fg.collector_blocks.push_back(std::move(pick));
    }
  }

  for (const auto& blocks : fg.collector_blocks) {
    const std::size_t dc = fg.vertices.size();
    fg.collectors.push_back(dc);
    fg.vertices.push_back(VertexKind::kCollector);
    for (std::size_t b : blocks) fg.edges.push_back({fg.block_base + 2 * b + 1, dc, fg.infinity});
  }
  return fg;
}

CutReport min_cut_check(const FlowGraph& fg, std::int64_t file_size) {
  CutReport report;
  report.min_flow = std::numeric_limits<std::int64_t>::max();
  // Everything up to the coded blocks is shared by all collectors.
  std::vector<FlowEdge> core;
  for (const auto& e : fg.edges)
    if (fg.vertices[e.to] != VertexKind::kCollector) core.push_back(e);
  const std::size_t sink = fg.block_base + 2 * fg.n;

  for (std::size_t l = 0; l < fg.collectors.size(); ++l) {
    FlowNetwork net(sink + 1);
    for (std::size_t x : fg.file_blocks) net.add(0, x, 1);
    for (const auto& e : core) net.add(e.from, e.to, e.capacity);
    for (std::size_t b : fg.collector_blocks[l]) net.add(fg.block_base + 2 * b + 1, sink, fg.infinity);
    const std::int64_t flow = boost::edmonds_karp_max_flow(net.g, 0, sink);
    if (!net.feasible(0, sink)) report.flows_feasible = false;
    report.collector_flow.push_back(flow);
    if (flow < report.min_flow) {
      report.min_flow = flow;
      report.worst_collector = l;
    }
  }
  if (fg.collectors.empty()) report.min_flow = 0;
  report.pass = !fg.collectors.empty() && report.min_flow >= file_size;
  return report;
}

}  // namespace locrep::bounds
