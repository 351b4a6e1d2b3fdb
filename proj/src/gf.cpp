#include "locrep/gf.hpp"

#include <array>
#include <string>

#include "locrep/error.hpp"

namespace locrep::gf {

namespace {

// Primitive polynomials for m = 2..16 (bit i is the coefficient of x^i).
constexpr std::array<std::uint32_t, 17> kPrimitivePolys = {
    0,      0,      0x7,    0xB,    0x13,   0x25,   0x43,   0x89,  0x11D,
    0x211,  0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003, 0x1100B};

void require_dims(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::kDimensionMismatch, what);
}

}  // namespace

std::uint32_t default_polynomial(unsigned m) {
  if (m < 2 || m > 16) {
    throw Error(ErrorKind::kInvalidArgument,
                "field degree must be in [2,16], got " + std::to_string(m));
  }
  return kPrimitivePolys[m];
}

Element clmul_reduce(Element a, Element b, std::uint32_t poly, unsigned m) {
  std::uint32_t acc = 0;
  std::uint32_t x = a;
  const std::uint32_t top = 1u << m;
  while (b) {
    if (b & 1u) acc ^= x;
    b >>= 1;
    x <<= 1;
    if (x & top) x ^= poly;
  }
  return acc;
}

Field::Field(unsigned m, std::uint32_t poly, Element generator)
    : m_(m), q_(0), poly_(poly), generator_(generator) {
  if (m < 2 || m > 16) {
    throw Error(ErrorKind::kInvalidArgument,
                "field degree must be in [2,16], got " + std::to_string(m));
  }
  q_ = 1u << m;
  if (poly_ == 0) poly_ = default_polynomial(m);
  if ((poly_ >> m) != 1u) {
    throw Error(ErrorKind::kInvalidArgument, "reduction polynomial must have degree m");
  }
  if (generator_ == 0 || generator_ >= q_) {
    throw Error(ErrorKind::kInvalidArgument, "generator must be a nonzero field element");
  }

  log_.assign(q_, 0);
  antilog_.assign(q_, 0);
  Element x = 1;
  for (std::uint32_t i = 0; i < q_ - 1; ++i) {
    if (i > 0 && x == 1) {
      throw Error(ErrorKind::kInvalidArgument,
                  "generator " + std::to_string(generator_) + " has order " +
                      std::to_string(i) + ", expected " + std::to_string(q_ - 1));
    }
    antilog_[i] = x;
    log_[x] = i;
    x = clmul_reduce(x, generator_, poly_, m_);
  }
  if (x != 1) {
    throw Error(ErrorKind::kInvalidArgument, "generator does not have order q-1");
  }
  antilog_[q_ - 1] = 1;

  if (m_ <= 8) {
    mul_table_.assign(256u * 256u, 0);
    for (std::uint32_t a = 1; a < q_; ++a) {
      for (std::uint32_t b = 1; b < q_; ++b) {
        mul_table_[(a << 8) | b] =
            static_cast<std::uint8_t>(antilog_[(log_[a] + log_[b]) % (q_ - 1)]);
      }
    }
  }
}

std::shared_ptr<const Field> Field::make(unsigned m, std::uint32_t poly, Element generator) {
  return std::make_shared<const Field>(m, poly, generator);
}

Element Field::inv(Element a) const {
  if (a == 0) throw Error(ErrorKind::kDivisionByZero, "inverse of zero");
  return antilog_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

Element Field::pow(Element a, std::uint64_t e) const noexcept {
  Element result = 1;
  Element base = a;
  while (e) {
    if (e & 1u) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

Element Field::exp(std::int64_t i) const noexcept {
  const std::int64_t period = q_ - 1;
  std::int64_t r = i % period;
  if (r < 0) r += period;
  return antilog_[static_cast<std::size_t>(r)];
}

std::uint32_t Field::log(Element a) const {
  if (a == 0 || a >= q_) throw Error(ErrorKind::kInvalidArgument, "log of zero");
  return log_[a];
}

void Field::mul_acc_region(Element c, std::span<const std::uint8_t> src,
                           std::span<std::uint8_t> dst) const {
  require_dims(src.size() == dst.size(), "region sizes differ");
  if (c == 0) return;
  if (m_ <= 8) {
    if (c == 1) {
      for (std::size_t i = 0; i < src.size(); ++i) dst[i] ^= src[i];
      return;
    }
    const std::uint8_t* row = mul_table_.data() + (static_cast<std::size_t>(c) << 8);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] ^= row[src[i]];
    return;
  }
  require_dims(src.size() % 2 == 0, "region length must be a multiple of 2 bytes");
  for (std::size_t i = 0; i < src.size(); i += 2) {
    const Element s = static_cast<Element>(src[i]) | (static_cast<Element>(src[i + 1]) << 8);
    const Element p = c == 1 ? s : mul(c, s);
    dst[i] ^= static_cast<std::uint8_t>(p & 0xFF);
    dst[i + 1] ^= static_cast<std::uint8_t>(p >> 8);
  }
}

// ---------------------------------------------------------------------------

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<Element>>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require_dims(rows[r].size() == m.cols(), "ragged rows");
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

std::vector<Element> Matrix::column(std::size_t c) const {
  std::vector<Element> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::select_columns(std::span<const std::size_t> cols) const {
  Matrix out(rows_, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    require_dims(cols[j] < cols_, "column index out of range");
    for (std::size_t r = 0; r < rows_; ++r) out(r, j) = (*this)(r, cols[j]);
  }
  return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
  Matrix out(rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require_dims(rows[i] < rows_, "row index out of range");
    for (std::size_t c = 0; c < cols_; ++c) out(i, c) = (*this)(rows[i], c);
  }
  return out;
}

Matrix Matrix::column_block(std::size_t first, std::size_t count) const {
  require_dims(first + count <= cols_, "column block out of range");
  Matrix out(rows_, count);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < count; ++c) out(r, c) = (*this)(r, first + c);
  return out;
}

Matrix Matrix::hconcat(const Matrix& other) const {
  require_dims(rows_ == other.rows_, "hconcat row mismatch");
  Matrix out(rows_, cols_ + other.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c);
    for (std::size_t c = 0; c < other.cols_; ++c) out(r, cols_ + c) = other(r, c);
  }
  return out;
}

Matrix multiply(const Field& f, const Matrix& a, const Matrix& b) {
  require_dims(a.cols() == b.rows(), "multiply: inner dimensions differ");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Element aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) ^= f.mul(aik, b(k, j));
    }
  }
  return out;
}

std::vector<Element> multiply(const Field& f, std::span<const Element> x, const Matrix& a) {
  require_dims(x.size() == a.rows(), "vector-matrix: length differs from rows");
  std::vector<Element> out(a.cols(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] ^= f.mul(x[i], a(i, j));
  }
  return out;
}

bool is_zero(const Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (Element e : m.row(r))
      if (e != 0) return false;
  return true;
}

namespace {

// Forward elimination in place; returns rank. Pivot on the first nonzero entry.
std::size_t eliminate(const Field& f, Matrix& m, std::size_t pivot_cols) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < pivot_cols && rank < m.rows(); ++c) {
    std::size_t p = rank;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != rank) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(rank, j));
    }
    const Element scale = f.inv(m(rank, c));
    for (std::size_t j = 0; j < m.cols(); ++j) m(rank, j) = f.mul(m(rank, j), scale);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == rank) continue;
      const Element factor = m(r, c);
      if (factor == 0) continue;
      for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) ^= f.mul(factor, m(rank, j));
    }
    ++rank;
  }
  return rank;
}

}  // namespace

std::size_t rank(const Field& f, Matrix m) { return eliminate(f, m, m.cols()); }

Matrix inverse(const Field& f, const Matrix& m) {
  require_dims(m.rows() == m.cols(), "inverse: matrix is not square");
  const std::size_t n = m.rows();
  Matrix aug = m.hconcat(Matrix::identity(n));
  if (eliminate(f, aug, n) < n) {
    throw Error(ErrorKind::kSingularMatrix, "inverse: matrix is singular");
  }
  return aug.column_block(n, n);
}

std::vector<Element> solve(const Field& f, const Matrix& a, std::span<const Element> b) {
  require_dims(a.rows() == a.cols(), "solve: matrix is not square");
  require_dims(b.size() == a.rows(), "solve: right-hand side length differs");
  const std::size_t n = a.rows();
  Matrix aug(n, n + 1);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
    aug(r, n) = b[r];
  }
  if (eliminate(f, aug, n) < n) {
    throw Error(ErrorKind::kSingularMatrix, "solve: matrix is singular");
  }
  return aug.column(n);
}

std::optional<std::vector<Element>> solve_any(const Field& f, const Matrix& a,
                                              std::span<const Element> b) {
  require_dims(b.size() == a.rows(), "solve_any: right-hand side length differs");
  const std::size_t n = a.cols();
  Matrix aug(a.rows(), n + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
    aug(r, n) = b[r];
  }
  const std::size_t rk = eliminate(f, aug, n);
  for (std::size_t r = rk; r < aug.rows(); ++r)
    if (aug(r, n) != 0) return std::nullopt;
  // Reduced row echelon: each pivot row's leading 1 gives that variable.
  std::vector<Element> x(n, 0);
  for (std::size_t r = 0; r < rk; ++r) {
    std::size_t c = 0;
    while (aug(r, c) == 0) ++c;
    x[c] = aug(r, n);
  }
  return x;
}

bool SpanBasis::reduce(std::vector<Element>& v) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Element factor = v[pivots_[i]];
    if (factor == 0) continue;
    const auto& b = rows_[i];
    for (std::size_t j = 0; j < dim_; ++j) v[j] ^= field_->mul(factor, b[j]);
  }
  for (Element e : v)
    if (e != 0) return false;
  return true;
}

bool SpanBasis::add(std::span<const Element> v) {
  require_dims(v.size() == dim_, "basis vector length");
  std::vector<Element> w(v.begin(), v.end());
  if (reduce(w)) return false;
  std::size_t p = 0;
  while (w[p] == 0) ++p;
  const Element scale = field_->inv(w[p]);
  for (auto& e : w) e = field_->mul(e, scale);
  // Keep the basis fully reduced so reduce() is a single pass.
  for (auto& row : rows_) {
    const Element factor = row[p];
    if (factor == 0) continue;
    for (std::size_t j = 0; j < dim_; ++j) row[j] ^= field_->mul(factor, w[j]);
  }
  rows_.push_back(std::move(w));
  pivots_.push_back(p);
  return true;
}

bool SpanBasis::contains(std::span<const Element> v) const {
  require_dims(v.size() == dim_, "basis vector length");
  std::vector<Element> w(v.begin(), v.end());
  return reduce(w);
}

std::vector<std::size_t> independent_columns(const Field& f, const Matrix& m,
                                             std::span<const std::size_t> order,
                                             std::size_t target) {
  SpanBasis basis(f, m.rows());
  std::vector<std::size_t> chosen;
  for (std::size_t c : order) {
    if (chosen.size() == target) break;
    if (basis.add(m.column(c))) chosen.push_back(c);
  }
  return chosen;
}

bool in_column_span(const Field& f, const Matrix& m, std::span<const std::size_t> basis_cols,
                    std::size_t target) {
  SpanBasis basis(f, m.rows());
  for (std::size_t c : basis_cols) basis.add(m.column(c));
  return basis.contains(m.column(target));
}

}  // namespace locrep::gf
