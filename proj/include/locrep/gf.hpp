#pragma once

// Arithmetic over GF(2^m), 2 <= m <= 16, and dense matrices over it.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace locrep::gf {

using Element = std::uint32_t;

// Primitive polynomial used when none is given, indexed by m.
std::uint32_t default_polynomial(unsigned m);

// Carry-less multiply of a and b reduced modulo poly (degree m). Pure bit
// arithmetic, independent of any table.
Element clmul_reduce(Element a, Element b, std::uint32_t poly, unsigned m);

class Field {
 public:
  // Throws Error(kInvalidArgument) if m is out of range, the polynomial has
  // the wrong degree, or the generator does not have order q-1.
  explicit Field(unsigned m, std::uint32_t poly = 0, Element generator = 2);

  static std::shared_ptr<const Field> make(unsigned m, std::uint32_t poly = 0,
                                           Element generator = 2);

  unsigned degree() const noexcept { return m_; }
  std::uint32_t order() const noexcept { return q_; }
  std::uint32_t polynomial() const noexcept { return poly_; }
  Element generator() const noexcept { return generator_; }
  bool table_driven() const noexcept { return !mul_table_.empty(); }

  // Bytes used to store one symbol in a block payload: 1 for m <= 8, else 2.
  std::size_t symbol_bytes() const noexcept { return m_ <= 8 ? 1 : 2; }

  bool contains(Element a) const noexcept { return a < q_; }

  static Element add(Element a, Element b) noexcept { return a ^ b; }
  static Element sub(Element a, Element b) noexcept { return a ^ b; }

  Element mul(Element a, Element b) const noexcept {
    if (!mul_table_.empty()) return mul_table_[(a << 8) | b];
    return clmul_reduce(a, b, poly_, m_);
  }
  Element inv(Element a) const;
  Element div(Element a, Element b) const { return mul(a, inv(b)); }
  Element pow(Element a, std::uint64_t e) const noexcept;

  // generator^i for any integer i (reduced mod q-1).
  Element exp(std::int64_t i) const noexcept;
  // Discrete log base generator; a must be nonzero.
  std::uint32_t log(Element a) const;

  std::span<const std::uint32_t> log_table() const noexcept { return log_; }
  std::span<const Element> antilog_table() const noexcept { return antilog_; }

  // dst[i] ^= c * src[i] over symbols packed in little-endian symbol_bytes().
  void mul_acc_region(Element c, std::span<const std::uint8_t> src,
                      std::span<std::uint8_t> dst) const;

 private:
  unsigned m_;
  std::uint32_t q_;
  std::uint32_t poly_;
  Element generator_;
  std::vector<std::uint32_t> log_;  // size q, log_[0] unused
  std::vector<Element> antilog_;    // size q, antilog_[q-1] == antilog_[0]
  std::vector<std::uint8_t> mul_table_;  // 256*256 for m <= 8
};

using FieldPtr = std::shared_ptr<const Field>;

// Row-major dense matrix of field elements.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, Element fill = 0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<std::vector<Element>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Element& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Element operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Element> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Element> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::vector<Element> column(std::size_t c) const;

  Matrix transpose() const;
  Matrix select_columns(std::span<const std::size_t> cols) const;
  Matrix select_rows(std::span<const std::size_t> rows) const;
  // Columns [first, first+count).
  Matrix column_block(std::size_t first, std::size_t count) const;
  // [this | other], row counts must agree.
  Matrix hconcat(const Matrix& other) const;

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Element> data_;
};

Matrix multiply(const Field& f, const Matrix& a, const Matrix& b);
std::vector<Element> multiply(const Field& f, std::span<const Element> x,
                              const Matrix& a);  // row vector x * A
bool is_zero(const Matrix& m);

// Gaussian elimination with first-nonzero pivoting.
std::size_t rank(const Field& f, Matrix m);
// Throws Error(kDimensionMismatch) for non-square input, Error(kSingularMatrix)
// for rank-deficient input.
Matrix inverse(const Field& f, const Matrix& m);
// Solves A x = b for square A.
std::vector<Element> solve(const Field& f, const Matrix& a, std::span<const Element> b);

// Any x with A x = b for rectangular A (free variables set to zero), or
// nullopt when the system is inconsistent.
std::optional<std::vector<Element>> solve_any(const Field& f, const Matrix& a,
                                              std::span<const Element> b);

// Echelon basis of a subspace of F^dim, grown one vector at a time.
class SpanBasis {
 public:
  SpanBasis(const Field& f, std::size_t dim) : field_(&f), dim_(dim) {}

  // Adds v if it is not already in the span; returns true when rank grew.
  bool add(std::span<const Element> v);
  bool contains(std::span<const Element> v) const;
  std::size_t rank() const noexcept { return pivots_.size(); }
  std::size_t dim() const noexcept { return dim_; }

 private:
  // Reduces v against the basis in place; returns true if v became zero.
  bool reduce(std::vector<Element>& v) const;

  const Field* field_;
  std::size_t dim_;
  std::vector<std::vector<Element>> rows_;  // rows_[i][pivots_[i]] == 1
  std::vector<std::size_t> pivots_;
};

// Greedily picks columns (in the given preference order) that increase rank,
// stopping at `target` columns. Returns the chosen column indices.
std::vector<std::size_t> independent_columns(const Field& f, const Matrix& m,
                                             std::span<const std::size_t> order,
                                             std::size_t target);

// True if column `target` lies in the span of columns `basis`.
bool in_column_span(const Field& f, const Matrix& m, std::span<const std::size_t> basis,
                    std::size_t target);

}  // namespace locrep::gf
