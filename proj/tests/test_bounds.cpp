#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "locrep/bounds.hpp"
#include "locrep/error.hpp"
#include "locrep/lrc.hpp"

using namespace locrep;

namespace {

std::vector<std::vector<std::size_t>> distinct_groups(const lrc::LrcCode& code) {
  auto groups = code.repair_groups();
  std::sort(groups.begin(), groups.end());
  groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
  return groups;
}

// Max flow into a collector reading `blocks` equals min(k, sum over groups of
// min(r, blocks read in that group)): every group is fed by all file blocks.
std::int64_t flow_oracle(std::size_t k, std::size_t r, const std::vector<std::size_t>& blocks) {
  std::vector<std::size_t> per_group;
  for (std::size_t b : blocks) {
    const std::size_t g = b / (r + 1);
    if (per_group.size() <= g) per_group.resize(g + 1, 0);
    ++per_group[g];
  }
  std::size_t total = 0;
  for (std::size_t c : per_group) total += std::min(c, r);
  return static_cast<std::int64_t>(std::min(total, k));
}

}  // namespace

TEST_CASE("distance bound arithmetic") {
  CHECK(bounds::distance_bound(16, 10, 5) == 6);
  for (std::size_t n = 3; n <= 20; ++n)
    for (std::size_t k = 1; k < n; ++k)
      CHECK(bounds::distance_bound(n, k, k) == static_cast<std::int64_t>(n - k + 1));
  CHECK_THROWS_AS(bounds::distance_bound(10, 10, 2), Error);
  CHECK_THROWS_AS(bounds::distance_bound(10, 4, 0), Error);
  CHECK_THROWS_AS(bounds::distance_bound(10, 4, 5), Error);
}

TEST_CASE("logarithmic locality form agrees with the bound") {
  // r = log2 k, delta_k = 1/r - 1/k, so (1 + delta_k) k = k + k/r - 1 when r | k.
  const std::size_t k = 16, r = 4;
  for (std::size_t n = 17; n <= 40; ++n) {
    const auto scaled = static_cast<std::int64_t>(k + k / r - 1);
    CHECK(bounds::distance_bound(n, k, r) == static_cast<std::int64_t>(n) - scaled + 1);
  }
}

TEST_CASE("rate-2/3 distance ratio to MDS grows with k") {
  double previous = 0;
  const std::pair<std::size_t, double> expected[] = {{16, 6.0 / 9}, {64, 23.0 / 33}, {256, 98.0 / 129}};
  for (auto [k, ratio] : expected) {
    const std::size_t r = static_cast<std::size_t>(std::log2(k));
    const std::size_t n = 3 * k / 2;
    const double lrc = static_cast<double>(bounds::distance_bound(n, k, r));
    const double mds = static_cast<double>(n - k + 1);
    CHECK(lrc / mds == doctest::Approx(ratio));
    CHECK(lrc / mds >= previous);
    CHECK(lrc / mds <= 1.0);
    previous = lrc / mds;
  }
}

TEST_CASE("non-decoding set on the (10,6,5) code") {
  auto f = gf::Field::make(8);
  const auto code = lrc::LrcCode::build(f, 10, 4, 5);
  const auto groups = distinct_groups(code);
  CHECK(groups.size() == 3);
  const auto s = bounds::build_nondecoding_set(code.field(), code.generator(), groups);
  CHECK(s.size() == 11);
  CHECK(gf::rank(*f, code.generator().select_columns(s)) == 9);
  CHECK(16 - s.size() >= lrc::brute_distance(*f, code.generator()));
}

TEST_CASE("non-decoding set on plain RS") {
  auto f = gf::Field::make(8);
  const auto rs = rs::RsCode::build(f, 10, 14);
  std::vector<std::size_t> first(11);
  for (std::size_t i = 0; i < 11; ++i) first[i] = i;
  const auto s = bounds::build_nondecoding_set(*f, rs.generator(), {first});
  CHECK(s.size() == 9);
}

TEST_CASE("non-decoding set on the (4,2,2) code") {
  auto f = gf::Field::make(4);
  const auto code = lrc::LrcCode::build(f, 4, 2, 2);
  const auto s = bounds::build_nondecoding_set(*f, code.generator(), distinct_groups(code));
  CHECK(gf::rank(*f, code.generator().select_columns(s)) < 4);
  CHECK(code.stored_blocks() - s.size() >= lrc::brute_distance(*f, code.generator()));
  CHECK(code.stored_blocks() - s.size() == 4);
}

TEST_CASE("non-decoding set is always rank deficient and certifies an upper bound") {
  auto f = gf::Field::make(4);
  std::mt19937 rng(5);
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 2 + rng() % 3, n = k + 2 + rng() % 4;
    gf::Matrix g(k, n);
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < n; ++c) g(r, c) = rng() % 16;
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t c = 0; c < n; c += 3) {
      std::vector<std::size_t> grp;
      for (std::size_t j = c; j < std::min(n, c + 3); ++j) grp.push_back(j);
      groups.push_back(grp);
    }
    const auto s = bounds::build_nondecoding_set(*f, g, groups);
    if (gf::rank(*f, g) < k) continue;
    REQUIRE(gf::rank(*f, g.select_columns(s)) < k);
    REQUIRE(n - s.size() >= lrc::brute_distance(*f, g));
  }
}

TEST_CASE("flow graph shape") {
  const auto small = bounds::build_flow_graph(2, 4, 1, 2);
  CHECK(small.total_collectors == 4);
  CHECK(small.collectors.size() == 4);

  const auto g462 = bounds::build_flow_graph(4, 6, 2, 2);
  CHECK(g462.edges.size() == bounds::expected_edge_count(4, 6, 2, 2));
  // Closed form with T written as C(n, k + ceil(k/r) - 1).
  CHECK(g462.edges.size() == 6 * (4 + 4 + 3) / 3 + 5 * 6);

  const auto d = static_cast<std::size_t>(bounds::distance_bound(15, 10, 4));
  CHECK(d == 4);
  const auto big = bounds::build_flow_graph(10, 15, 4, d);
  CHECK(big.total_collectors == 455);
  for (const auto& blocks : big.collector_blocks) REQUIRE(blocks.size() == 12);
  CHECK(big.edges.size() == bounds::expected_edge_count(10, 15, 4, d));

  std::size_t bottlenecks = 0;
  for (const auto& e : big.edges) {
    const auto from = big.vertices[e.from];
    const auto to = big.vertices[e.to];
    if (from == bounds::VertexKind::kGroupIn) {
      CHECK(e.capacity == 4);
      ++bottlenecks;
    } else if (from == bounds::VertexKind::kBlockIn) {
      CHECK(e.capacity == 1);
    } else {
      CHECK(e.capacity == big.infinity);
    }
    CHECK(to != bounds::VertexKind::kSource);
  }
  CHECK(bottlenecks == 3);
  CHECK(big.infinity == 15 * 10 + 1);

  CHECK_THROWS_AS(bounds::build_flow_graph(4, 7, 2, 2), Error);
  CHECK_THROWS_AS(bounds::build_flow_graph(4, 6, 2, 0), Error);
}

TEST_CASE("min cut reaches the file size exactly up to the bound") {
  for (std::size_t n = 2; n <= 12; ++n) {
    for (std::size_t r = 1; r + 1 <= n; ++r) {
      if (n % (r + 1) != 0) continue;
      for (std::size_t k = r; k < n; ++k) {
        const auto bound = bounds::distance_bound(n, k, r);
        if (bound < 1) continue;
        INFO("n=" << n << " k=" << k << " r=" << r);
        for (std::size_t d = 1; d <= std::min<std::size_t>(n, bound + 1); ++d) {
          const auto fg = bounds::build_flow_graph(k, n, r, d);
          const auto rep = bounds::min_cut_check(fg, static_cast<std::int64_t>(k));
          REQUIRE(rep.flows_feasible);
          for (std::size_t l = 0; l < fg.collectors.size(); ++l)
            REQUIRE(rep.collector_flow[l] == flow_oracle(k, r, fg.collector_blocks[l]));
          REQUIRE(rep.pass == (static_cast<std::int64_t>(d) <= bound));
        }
      }
    }
  }
}

TEST_CASE("violating collector reads a whole group") {
  const std::size_t k = 4, n = 9, r = 2;
  const auto bound = static_cast<std::size_t>(bounds::distance_bound(n, k, r));
  const auto fg = bounds::build_flow_graph(k, n, r, bound + 1);
  const auto rep = bounds::min_cut_check(fg, k);
  CHECK_FALSE(rep.pass);
  CHECK(rep.min_flow == static_cast<std::int64_t>(k) - 1);
  const auto& worst = fg.collector_blocks[rep.worst_collector];
  bool full_group = false;
  for (std::size_t g = 0; g < n / (r + 1); ++g) {
    const auto in_group = std::count_if(worst.begin(), worst.end(),
                                        [&](std::size_t b) { return b / (r + 1) == g; });
    if (in_group == static_cast<long>(r + 1)) full_group = true;
  }
  CHECK(full_group);
}

TEST_CASE("single group of k+1 reduces to the MDS cut condition") {
  for (std::size_t k = 1; k <= 6; ++k) {
    const std::size_t n = k + 1;
    CHECK(bounds::distance_bound(n, k, k) == 2);
    CHECK(bounds::min_cut_check(bounds::build_flow_graph(k, n, k, 2), k).pass);
    if (n >= 3) CHECK_FALSE(bounds::min_cut_check(bounds::build_flow_graph(k, n, k, 3), k).pass);
  }
}

TEST_CASE("collector sampling is deterministic and distinct") {
  bounds::CollectorSelection sel{10, 77};
  const auto a = bounds::build_flow_graph(10, 15, 4, 4, sel);
  const auto b = bounds::build_flow_graph(10, 15, 4, 4, sel);
  CHECK(a.collector_blocks.size() == 10);
  CHECK(a.collector_blocks == b.collector_blocks);
  auto sorted = a.collector_blocks;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  CHECK(bounds::min_cut_check(a, 10).pass);
}
