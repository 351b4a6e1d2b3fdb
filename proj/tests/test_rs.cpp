#include <algorithm>
#include <random>

#include "doctest.h"
#include "locrep/error.hpp"
#include "locrep/lrc.hpp"
#include "locrep/rs.hpp"

using namespace locrep;
using gf::Element;

namespace {

// All size-s subsets of [0, n).
std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t s) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<long>(s), true);
  do {
    std::vector<std::size_t> pick;
    for (std::size_t i = 0; i < n; ++i)
      if (mask[i]) pick.push_back(i);
    out.push_back(pick);
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return out;
}

std::vector<Share> survivors(const std::vector<Element>& codeword,
                             const std::vector<std::size_t>& erased) {
  std::vector<Share> out;
  for (std::size_t i = 0; i < codeword.size(); ++i)
    if (std::find(erased.begin(), erased.end(), i) == erased.end())
      out.push_back({i, codeword[i]});
  return out;
}

}  // namespace

TEST_CASE("parity check is Vandermonde and generator is systematic") {
  auto f = gf::Field::make(8);
  const auto code = rs::RsCode::build(f, 10, 14);
  const auto& h = code.parity_check();
  REQUIRE(h.rows() == 4);
  REQUIRE(h.cols() == 14);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 14; ++j)
      CHECK(h(i, j) == f->exp(static_cast<std::int64_t>(i * j)));
  const auto& g = code.generator();
  CHECK(g.column_block(0, 10) == gf::Matrix::identity(10));
  CHECK(gf::is_zero(gf::multiply(*f, g, h.transpose())));
  // The all-ones row of H forces the generator columns to sum to zero.
  CHECK(lrc::columns_sum_to_zero(g));
}

TEST_CASE("RS(10,4) has distance 5") {
  auto f = gf::Field::make(8);
  const auto code = rs::RsCode::build(f, 10, 14);
  CHECK(lrc::brute_distance(*f, code.generator()) == 5);
}

TEST_CASE("k=1 gives a repetition code") {
  auto f = gf::Field::make(8);
  const auto code = rs::RsCode::build(f, 1, 2);
  CHECK(code.generator().column(0) == code.generator().column(1));
  const Element data[] = {0xAB};
  CHECK(code.encode(data) == std::vector<Element>{0xAB, 0xAB});
}

TEST_CASE("RS(4,2) over GF(16): every 4-column subset has rank 4") {
  auto f = gf::Field::make(4);
  const auto code = rs::RsCode::build(f, 4, 6);
  const auto all = subsets(6, 4);
  CHECK(all.size() == 15);
  for (const auto& cols : all) CHECK(gf::rank(*f, code.generator().select_columns(cols)) == 4);
}

TEST_CASE("MDS distance for every small instance") {
  auto f = gf::Field::make(4);
  for (std::size_t n = 2; n <= 12; ++n) {
    for (std::size_t k = 1; k < n; ++k) {
      const auto code = rs::RsCode::build(f, k, n);
      INFO("n=" << n << " k=" << k);
      REQUIRE(lrc::brute_distance(*f, code.generator()) == n - k + 1);
    }
  }
}

TEST_CASE("MDS codes cannot have locality below k") {
  auto f = gf::Field::make(4);
  const auto code = rs::RsCode::build(f, 4, 6);
  for (std::size_t c = 0; c < 6; ++c)
    CHECK(lrc::brute_column_locality(*f, code.generator(), c) == 4);
}

TEST_CASE("length beyond q-1 is rejected") {
  auto f = gf::Field::make(4);
  CHECK_NOTHROW(rs::RsCode::build(f, 10, 15));
  CHECK_THROWS_AS(rs::RsCode::build(f, 10, 16), Error);
  CHECK_THROWS_AS(rs::RsCode::build(f, 5, 5), Error);
  CHECK_THROWS_AS(rs::RsCode::build(f, 0, 5), Error);
}

TEST_CASE("encoding is linear and systematic") {
  auto f = gf::Field::make(8);
  const auto code = rs::RsCode::build(f, 10, 14);
  const std::vector<Element> zero(10, 0);
  CHECK(code.encode(zero) == std::vector<Element>(14, 0));
  for (std::size_t i = 0; i < 10; ++i) {
    std::vector<Element> unit(10, 0);
    unit[i] = 1;
    const auto cw = code.encode(unit);
    for (std::size_t j = 0; j < 14; ++j) CHECK(cw[j] == code.generator()(i, j));
  }
  const std::vector<Element> short_data(9, 1);
  CHECK_THROWS_AS((void)code.encode(short_data), Error);
}

TEST_CASE("decode recovers data under every erasure pattern up to n-k") {
  auto f = gf::Field::make(8);
  std::mt19937 rng(42);
  std::uniform_int_distribution<Element> sym(0, 255);
  for (auto [k, n] : {std::pair<std::size_t, std::size_t>{10, 14}, {4, 6}, {6, 9}, {1, 3}}) {
    const auto code = rs::RsCode::build(f, k, n);
    std::vector<Element> data(k);
    for (auto& d : data) d = sym(rng);
    const auto cw = code.encode(data);
    REQUIRE(std::equal(data.begin(), data.end(), cw.begin()));
    for (std::size_t e = 0; e <= n - k; ++e) {
      for (const auto& erased : subsets(n, e)) {
        const auto shares = survivors(cw, erased);
        REQUIRE(code.decode(shares) == data);
      }
    }
  }
}

TEST_CASE("more than n-k erasures is unrecoverable") {
  auto f = gf::Field::make(8);
  const auto code = rs::RsCode::build(f, 10, 14);
  std::vector<Element> data(10, 7);
  const auto cw = code.encode(data);
  const std::vector<std::size_t> erased = {0, 3, 5, 11, 13};
  const auto shares = survivors(cw, erased);
  try {
    (void)code.decode(shares);
    FAIL("expected unrecoverable");
  } catch (const UnrecoverableError& e) {
    CHECK(e.kind() == ErrorKind::kUnrecoverable);
    CHECK(e.erased() == erased);
  }
}

TEST_CASE("block-wise encode and decode") {
  auto f = gf::Field::make(8);
  const auto code = rs::RsCode::build(f, 10, 14);
  std::mt19937 rng(8);
  std::vector<Block> data(10, Block(333));
  for (auto& b : data)
    for (auto& x : b) x = static_cast<std::uint8_t>(rng());
  const auto parities = code.encode_parities(data);
  REQUIRE(parities.size() == 4);
  // Symbol-wise agreement at every offset.
  for (std::size_t off : {0u, 100u, 332u}) {
    std::vector<Element> col;
    for (const auto& b : data) col.push_back(b[off]);
    const auto cw = code.encode(col);
    for (std::size_t j = 0; j < 4; ++j) CHECK(parities[j][off] == cw[10 + j]);
  }
  std::vector<Block> all = data;
  all.insert(all.end(), parities.begin(), parities.end());
  std::vector<BlockShare> shares;
  for (std::size_t i : {2u, 3u, 4u, 5u, 6u, 7u, 9u, 10u, 12u, 13u}) shares.push_back({i, all[i]});
  CHECK(code.decode_blocks(shares) == data);
}

TEST_CASE("GF(2^16) code with two-byte symbols") {
  auto f = gf::Field::make(16);
  const auto code = rs::RsCode::build(f, 5, 8);
  std::vector<Block> data(5, Block(64));
  std::mt19937 rng(1);
  for (auto& b : data)
    for (auto& x : b) x = static_cast<std::uint8_t>(rng());
  const auto parities = code.encode_parities(data);
  std::vector<BlockShare> shares;
  shares.push_back({1, data[1]});
  shares.push_back({3, data[3]});
  shares.push_back({5, parities[0]});
  shares.push_back({6, parities[1]});
  shares.push_back({7, parities[2]});
  CHECK(code.decode_blocks(shares) == data);
}
