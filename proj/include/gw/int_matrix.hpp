#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <gmpxx.h>

#include <nlohmann/json_fwd.hpp>

namespace gw {

using Int = mpz_class;

/// Dense matrix over arbitrary-precision integers, row-major.
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols) {}

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_triplets(
      std::size_t rows, std::size_t cols,
      const std::vector<std::tuple<std::size_t, std::size_t, Int>>& entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& at(std::size_t r, std::size_t c) {
    check(r, c);
    return a_[r * cols_ + c];
  }
  const Int& at(std::size_t r, std::size_t c) const {
    check(r, c);
    return a_[r * cols_ + c];
  }

  bool is_zero() const;
  IntMatrix transposed() const;

  void swap_rows(std::size_t i, std::size_t j);
  void swap_cols(std::size_t i, std::size_t j);

  /// this->row(i) += q * this->row(j)
  void add_row_multiple(std::size_t i, std::size_t j, const Int& q);
  /// this->col(i) += q * this->col(j)
  void add_col_multiple(std::size_t i, std::size_t j, const Int& q);
  void negate_row(std::size_t i);
  void negate_col(std::size_t i);

  /// Largest entry bit size (0 for a zero matrix).
  std::size_t max_bits() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b);

  /// Exact determinant (Bareiss fraction-free elimination). Square only.
  Int determinant() const;

  /// Sparse-triplet JSON {rows, cols, entries:[[r,c,"v"],...]}, row-major,
  /// values as decimal strings.
  nlohmann::json to_json() const;
  static IntMatrix from_json(const nlohmann::json& j);

private:
  void check(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_)
      throw std::out_of_range("IntMatrix index out of range");
  }

  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Int> a_;
};

/// Sparse integer row: (column, value) pairs sorted by column, values nonzero.
using SparseRow = std::vector<std::pair<std::size_t, Int>>;

SparseRow sparse_axpy(const SparseRow& x, const Int& c, const SparseRow& y);

}  // namespace gw
