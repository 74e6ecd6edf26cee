#include "gw/int_matrix.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace gw {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_triplets(
    std::size_t rows, std::size_t cols,
    const std::vector<std::tuple<std::size_t, std::size_t, Int>>& entries) {
  IntMatrix m(rows, cols);
  for (const auto& [r, c, v] : entries) m.at(r, c) += v;
  return m;
}

bool IntMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(),
                     [](const Int& v) { return v == 0; });
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
  return t;
}

void IntMatrix::swap_rows(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t c = 0; c < cols_; ++c)
    std::swap(a_[i * cols_ + c], a_[j * cols_ + c]);
}

void IntMatrix::swap_cols(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t r = 0; r < rows_; ++r)
    std::swap(a_[r * cols_ + i], a_[r * cols_ + j]);
}

void IntMatrix::add_row_multiple(std::size_t i, std::size_t j, const Int& q) {
  if (q == 0) return;
  for (std::size_t c = 0; c < cols_; ++c)
    a_[i * cols_ + c] += q * a_[j * cols_ + c];
}

void IntMatrix::add_col_multiple(std::size_t i, std::size_t j, const Int& q) {
  if (q == 0) return;
  for (std::size_t r = 0; r < rows_; ++r)
    a_[r * cols_ + i] += q * a_[r * cols_ + j];
}

void IntMatrix::negate_row(std::size_t i) {
  for (std::size_t c = 0; c < cols_; ++c) a_[i * cols_ + c] = -a_[i * cols_ + c];
}

void IntMatrix::negate_col(std::size_t i) {
  for (std::size_t r = 0; r < rows_; ++r) a_[r * cols_ + i] = -a_[r * cols_ + i];
}

std::size_t IntMatrix::max_bits() const {
  std::size_t best = 0;
  for (const Int& v : a_)
    if (v != 0) best = std::max(best, mpz_sizeinbase(v.get_mpz_t(), 2));
  return best;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("IntMatrix: dimension mismatch in product");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Int& aik = a.at(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        const Int& bkj = b.at(k, j);
        if (bkj != 0) c.at(i, j) += aik * bkj;
      }
    }
  return c;
}

bool operator==(const IntMatrix& a, const IntMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
}

Int IntMatrix::determinant() const {
  if (rows_ != cols_) throw std::invalid_argument("determinant: square only");
  std::size_t n = rows_;
  if (n == 0) return 1;
  IntMatrix m = *this;
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m.at(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m.at(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Int v = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m.at(i, j) = v;
      }
      m.at(i, k) = 0;
    }
    prev = m.at(k, k);
  }
  return sign * m.at(n - 1, n - 1);
}

nlohmann::json IntMatrix::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) {
      const Int& v = at(r, c);
      if (v != 0) entries.push_back({r, c, v.get_str()});
    }
  return nlohmann::json{{"rows", rows_}, {"cols", cols_}, {"entries", entries}};
}

IntMatrix IntMatrix::from_json(const nlohmann::json& j) {
  IntMatrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  for (const auto& e : j.at("entries")) {
    Int v(e.at(2).get<std::string>());
    m.at(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()) = v;
  }
  return m;
}

SparseRow sparse_axpy(const SparseRow& x, const Int& c, const SparseRow& y) {
  if (c == 0) return x;
  SparseRow out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, k = 0;
  while (i < x.size() || k < y.size()) {
    if (k == y.size() || (i < x.size() && x[i].first < y[k].first)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[k].first < x[i].first) {
      out.emplace_back(y[k].first, c * y[k].second);
      ++k;
    } else {
      Int v = x[i].second + c * y[k].second;
      if (v != 0) out.emplace_back(x[i].first, std::move(v));
      ++i;
      ++k;
    }
  }
  return out;
}

}  // namespace gw
