#include "locrep/rs.hpp"

#include <string>

#include "locrep/error.hpp"

namespace locrep {

namespace code {

namespace {

template <typename ShareT>
std::vector<std::size_t> pick_information_set(const gf::Field& f, const gf::Matrix& g,
                                              std::span<const ShareT> shares,
                                              std::vector<std::size_t>& share_index) {
  const std::size_t k = g.rows();
  gf::SpanBasis basis(f, k);
  std::vector<std::size_t> positions;
  std::vector<std::size_t> seen;
  for (std::size_t i = 0; i < shares.size() && positions.size() < k; ++i) {
    const std::size_t pos = shares[i].position;
    if (pos >= g.cols()) {
      throw Error(ErrorKind::kInvalidArgument, "share position " + std::to_string(pos) +
                                                   " out of range");
    }
    seen.push_back(pos);
    if (basis.add(g.column(pos))) {
      positions.push_back(pos);
      share_index.push_back(i);
    }
  }
  if (positions.size() < k) {
    std::vector<std::size_t> erased;
    std::vector<bool> present(g.cols(), false);
    for (const auto& s : shares) present[s.position] = true;
    for (std::size_t p = 0; p < g.cols(); ++p)
      if (!present[p]) erased.push_back(p);
    throw UnrecoverableError(std::move(erased),
                             "surviving blocks span " + std::to_string(positions.size()) +
                                 " of " + std::to_string(k) + " dimensions");
  }
  return positions;
}

}  // namespace

std::vector<gf::Element> decode_symbols(const gf::Field& f, const gf::Matrix& generator,
                                        std::span<const Share> shares) {
  std::vector<std::size_t> idx;
  const auto positions = pick_information_set(f, generator, shares, idx);
  const gf::Matrix sub = generator.select_columns(positions).transpose();
  std::vector<gf::Element> rhs;
  rhs.reserve(idx.size());
  for (std::size_t i : idx) rhs.push_back(shares[i].value);
  return gf::solve(f, sub, rhs);
}

std::vector<Block> decode_blocks(const gf::Field& f, const gf::Matrix& generator,
                                 std::span<const BlockShare> shares) {
  std::vector<std::size_t> idx;
  const auto positions = pick_information_set(f, generator, shares, idx);
  const std::size_t k = generator.rows();
  const std::size_t len = shares[idx.front()].data.size();
  // data = shares_S * inv(G_S)
  const gf::Matrix inv = gf::inverse(f, generator.select_columns(positions));
  std::vector<Block> out(k, Block(len, 0));
  for (std::size_t s = 0; s < k; ++s) {
    const auto src = shares[idx[s]].data;
    if (src.size() != len) throw Error(ErrorKind::kDimensionMismatch, "block sizes differ");
    for (std::size_t i = 0; i < k; ++i) f.mul_acc_region(inv(s, i), src, out[i]);
  }
  return out;
}

std::vector<Block> encode_columns(const gf::Field& f, const gf::Matrix& generator,
                                  std::span<const Block> data,
                                  std::span<const std::size_t> columns) {
  if (data.size() != generator.rows()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "expected " + std::to_string(generator.rows()) + " data blocks, got " +
                    std::to_string(data.size()));
  }
  const std::size_t len = data.empty() ? 0 : data.front().size();
  std::vector<Block> out(columns.size(), Block(len, 0));
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i].size() != len) throw Error(ErrorKind::kDimensionMismatch, "block sizes differ");
    for (std::size_t c = 0; c < columns.size(); ++c) {
      f.mul_acc_region(generator(i, columns[c]), data[i], out[c]);
    }
  }
  return out;
}

}  // namespace code

namespace rs {

RsCode RsCode::build(gf::FieldPtr field, std::size_t k, std::size_t n) {
  if (!field) throw Error(ErrorKind::kInvalidArgument, "null field");
  if (k < 1 || k >= n) {
    throw Error(ErrorKind::kInvalidArgument, "RS code requires 1 <= k < n");
  }
  if (n > field->order() - 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "RS length " + std::to_string(n) + " exceeds q-1 = " +
                    std::to_string(field->order() - 1));
  }
  const gf::Field& f = *field;
  const std::size_t p = n - k;

  gf::Matrix h(p, n);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < n; ++j)
      h(i, j) = f.exp(static_cast<std::int64_t>(i * j));

  // G = [I | H1^T (H2^T)^-1]; sign is irrelevant in characteristic 2.
  const gf::Matrix h1t = h.column_block(0, k).transpose();
  const gf::Matrix h2t_inv = gf::inverse(f, h.column_block(k, p).transpose());
  const gf::Matrix parity = gf::multiply(f, h1t, h2t_inv);
  gf::Matrix g = gf::Matrix::identity(k).hconcat(parity);

  if (!gf::is_zero(gf::multiply(f, g, h.transpose()))) {
    throw Error(ErrorKind::kInternal, "generator is not orthogonal to parity check");
  }
  return RsCode(std::move(field), k, n, std::move(h), std::move(g));
}

std::vector<gf::Element> RsCode::encode(std::span<const gf::Element> data) const {
  if (data.size() != k_) {
    throw Error(ErrorKind::kDimensionMismatch, "encode expects " + std::to_string(k_) +
                                                   " symbols, got " +
                                                   std::to_string(data.size()));
  }
  return gf::multiply(*field_, data, g_);
}

std::vector<gf::Element> RsCode::decode(std::span<const Share> available) const {
  try {
    return code::decode_symbols(*field_, g_, available);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kSingularMatrix) {
      throw Error(ErrorKind::kInternal, "RS submatrix singular; MDS property violated");
    }
    throw;
  }
}

std::vector<Block> RsCode::encode_parities(std::span<const Block> data) const {
  std::vector<std::size_t> cols;
  for (std::size_t j = k_; j < n_; ++j) cols.push_back(j);
  return code::encode_columns(*field_, g_, data, cols);
}

std::vector<Block> RsCode::decode_blocks(std::span<const BlockShare> available) const {
  return code::decode_blocks(*field_, g_, available);
}

}  // namespace rs
}  // namespace locrep
