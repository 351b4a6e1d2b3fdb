#include "doctest.h"
#include "locrep/bounds.hpp"
#include "locrep/construct.hpp"
#include "locrep/error.hpp"
#include "locrep/lrc.hpp"

using namespace locrep;
using construct::Shape;

namespace {

std::uint64_t binomial(std::uint64_t n, std::uint64_t s) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= s; ++i) out = out * (n - s + i) / i;
  return out;
}

}  // namespace

TEST_CASE("random groups carry a rank-r local dependency") {
  gf::Field f(8);
  std::mt19937_64 rng(3);
  const Shape s{4, 9, 2};
  for (int t = 0; t < 20; ++t) {
    const auto g = construct::random_lrc(f, s, rng);
    for (const auto& grp : construct::groups(s)) {
      REQUIRE(grp.size() == 3);
      REQUIRE(gf::rank(f, g.select_columns(grp)) <= 2);
    }
    REQUIRE(construct::has_group_locality(f, g, s));
    for (std::size_t c : {0u, 1u, 3u, 4u, 6u, 7u})
      for (std::size_t row = 0; row < 4; ++row) REQUIRE(g(row, c) != 0);
  }
}

TEST_CASE("single group of three is a parity check code") {
  gf::Field f(8);
  std::mt19937_64 rng(1);
  const auto g = construct::random_lrc(f, Shape{2, 3, 2}, rng);
  CHECK(gf::rank(f, g) == 2);
  CHECK(lrc::brute_distance(f, g) == 2);
  CHECK(bounds::distance_bound(3, 2, 2) == 2);
}

TEST_CASE("(10,18,5) candidate over GF(2^16) respects the bound") {
  gf::Field f(16);
  std::mt19937_64 rng(construct::trial_seed(2024, 0));
  const Shape s{10, 18, 5};
  const auto sys = construct::systematize(f, construct::random_lrc(f, s, rng));
  REQUIRE(sys.has_value());
  const auto d = lrc::brute_distance(f, sys->generator);
  CHECK(bounds::distance_bound(18, 10, 5) == 8);
  CHECK(d <= 8);
  CHECK(construct::has_group_locality(f, sys->generator, s));
}

TEST_CASE("systematize puts the identity on an information set") {
  gf::Field f(8);
  std::mt19937_64 rng(9);
  const Shape s{4, 6, 2};
  const auto sys = construct::systematize(f, construct::random_lrc(f, s, rng));
  REQUIRE(sys.has_value());
  // The first group of three has rank 2, so the first four columns never work.
  CHECK(sys->info_set == std::vector<std::size_t>{0, 1, 3, 4});
  CHECK(sys->generator.select_columns(sys->info_set) == gf::Matrix::identity(4));
  CHECK(construct::has_group_locality(f, sys->generator, s));

  CHECK_FALSE(construct::systematize(f, gf::Matrix(2, 4)).has_value());
}

TEST_CASE("easy shapes reach the bound") {
  gf::Field f16(4);
  const auto a = construct::construct_with_retry(f16, Shape{2, 4, 1}, 10, 5);
  CHECK(a.success);
  CHECK(a.achieved_d == 2);
  gf::Field f256(8);
  const auto b = construct::construct_with_retry(f256, Shape{10, 12, 5}, 10, 5);
  CHECK(b.success);
  CHECK(b.achieved_d == 2);
}

TEST_CASE("construction is reproducible from the seed") {
  gf::Field f(8);
  const auto a = construct::construct_with_retry(f, Shape{4, 9, 2}, 50, 77);
  const auto b = construct::construct_with_retry(f, Shape{4, 9, 2}, 50, 77);
  REQUIRE(a.code);
  CHECK(a.trial_seed == b.trial_seed);
  CHECK(a.code->generator == b.code->generator);
  std::mt19937_64 rng(a.trial_seed);
  const auto replay = construct::systematize(f, construct::random_lrc(f, Shape{4, 9, 2}, rng));
  CHECK(replay->generator == a.code->generator);
}

TEST_CASE("success rate meets the network coding lower bound") {
  gf::Field f(16);
  const Shape s{4, 9, 2};
  const auto d = static_cast<std::size_t>(bounds::distance_bound(9, 4, 2));
  const auto t = binomial(9, 9 - d + 1);
  CHECK(t == 126);
  const double lower = construct::rlnc_success_lower_bound(t, f.order(), 9 - 4);
  const auto rate = construct::success_rate(f, s, 200, 11);
  CHECK_FALSE(rate.bound_violated);
  CHECK(rate.rate() >= lower);
  CHECK(construct::rlnc_success_lower_bound(200, 16, 3) == 0.0);
}

TEST_CASE("success rate grows with the field size") {
  const Shape s{4, 9, 2};
  double previous = -1;
  for (unsigned m : {4u, 8u, 16u}) {
    gf::Field f(m);
    const auto rate = construct::success_rate(f, s, 200, 123);
    INFO("m=" << m << " rate=" << rate.rate());
    CHECK_FALSE(rate.bound_violated);
    CHECK(rate.rate() >= previous);
    previous = rate.rate();
  }
}

TEST_CASE("every small shape reaches the bound at q = 2^16") {
  gf::Field f(16);
  for (std::size_t n = 2; n <= 12; ++n) {
    for (std::size_t r = 1; r + 1 <= n; ++r) {
      if (n % (r + 1) != 0) continue;
      for (std::size_t k = r; k < n; ++k) {
        const auto bound = bounds::distance_bound(n, k, r);
        if (bound < 1) continue;
        INFO("n=" << n << " k=" << k << " r=" << r);
        const auto a = construct::construct_with_retry(f, Shape{k, n, r}, 500, n * 100 + k * 10 + r);
        REQUIRE_FALSE(a.bound_violated);
        REQUIRE(a.success);
        REQUIRE(static_cast<std::int64_t>(a.achieved_d) == bound);
        REQUIRE(construct::has_group_locality(f, a.code->generator, Shape{k, n, r}));
      }
    }
  }
}

TEST_CASE("invalid shapes are rejected") {
  gf::Field f(4);
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(construct::random_lrc(f, Shape{4, 7, 2}, rng), Error);
  CHECK_THROWS_AS(construct::random_lrc(f, Shape{4, 6, 5}, rng), Error);
  CHECK_THROWS_AS(construct::random_lrc(f, Shape{10, 18, 5}, rng), Error);
}
