#pragma once

// Systematic Vandermonde Reed-Solomon (k, n-k) erasure code.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "locrep/gf.hpp"

namespace locrep {

using Block = std::vector<std::uint8_t>;

// One surviving coded symbol: its position in the codeword and value.
struct Share {
  std::size_t position;
  gf::Element value;
};

// A surviving coded block.
struct BlockShare {
  std::size_t position;
  std::span<const std::uint8_t> data;
};

namespace code {

// Recovers the k message symbols from shares of a codeword generated by G
// (k x n). Uses the first independent set of k shares in the given order.
// Throws UnrecoverableError if the shares span fewer than k dimensions.
std::vector<gf::Element> decode_symbols(const gf::Field& f, const gf::Matrix& generator,
                                        std::span<const Share> shares);

// Block-wise version of decode_symbols; returns k data blocks.
std::vector<Block> decode_blocks(const gf::Field& f, const gf::Matrix& generator,
                                 std::span<const BlockShare> shares);

// out_j = sum_i data_i * G[i][j] for each requested column j.
std::vector<Block> encode_columns(const gf::Field& f, const gf::Matrix& generator,
                                  std::span<const Block> data,
                                  std::span<const std::size_t> columns);

}  // namespace code

namespace rs {

class RsCode {
 public:
  // Parity check H[i][j] = alpha^(i*j), i < n-k, j < n, and systematic
  // generator G = [I_k | P] with G H^T = 0. Requires 1 <= k < n <= q-1.
  static RsCode build(gf::FieldPtr field, std::size_t k, std::size_t n);

  std::size_t k() const noexcept { return k_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t parity_count() const noexcept { return n_ - k_; }
  const gf::Field& field() const noexcept { return *field_; }
  const gf::FieldPtr& field_ptr() const noexcept { return field_; }
  const gf::Matrix& parity_check() const noexcept { return h_; }
  const gf::Matrix& generator() const noexcept { return g_; }

  // data.size() must equal k; returns n symbols, the first k equal to data.
  std::vector<gf::Element> encode(std::span<const gf::Element> data) const;
  // Throws UnrecoverableError with fewer than k shares.
  std::vector<gf::Element> decode(std::span<const Share> available) const;

  // data.size() == k, all blocks of equal length; returns the n-k parities.
  std::vector<Block> encode_parities(std::span<const Block> data) const;
  std::vector<Block> decode_blocks(std::span<const BlockShare> available) const;

 private:
  RsCode(gf::FieldPtr field, std::size_t k, std::size_t n, gf::Matrix h, gf::Matrix g)
      : field_(std::move(field)), k_(k), n_(n), h_(std::move(h)), g_(std::move(g)) {}

  gf::FieldPtr field_;
  std::size_t k_;
  std::size_t n_;
  gf::Matrix h_;
  gf::Matrix g_;
};

}  // namespace rs
}  // namespace locrep
