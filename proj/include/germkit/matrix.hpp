#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "germkit/polynomial.hpp"

namespace germkit {

/// Dense row-major matrix of polynomials sharing one variable count.
class PolyMatrix {
 public:
  PolyMatrix(std::size_t rows, std::size_t cols, std::size_t nvars)
      : rows_(rows), cols_(cols), nvars_(nvars), entries_(rows * cols, Polynomial(nvars)) {}

  PolyMatrix(std::size_t rows, std::size_t cols, std::vector<Polynomial> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows * cols) throw StructuralError("matrix entry count does not match shape");
    nvars_ = entries_.empty() ? 0 : entries_.front().nvars();
    for (const auto& e : entries_) {
      if (e.nvars() != nvars_) throw StructuralError("matrix entries disagree on variable count");
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nvars() const noexcept { return nvars_; }
  const std::vector<Polynomial>& entries() const noexcept { return entries_; }

  const Polynomial& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  void set(std::size_t i, std::size_t j, Polynomial value) {
    if (value.nvars() != nvars_) throw StructuralError("matrix entry has wrong variable count");
    entries_[i * cols_ + j] = std::move(value);
  }

  PolyMatrix submatrix(const std::vector<std::size_t>& row_idx, const std::vector<std::size_t>& col_idx) const {
    std::vector<Polynomial> out;
    out.reserve(row_idx.size() * col_idx.size());
    for (auto r : row_idx) {
      for (auto c : col_idx) out.push_back((*this)(r, c));
    }
    PolyMatrix m(row_idx.size(), col_idx.size(), std::move(out));
    m.nvars_ = nvars_;
    return m;
  }

  PolyMatrix swap_rows(std::size_t a, std::size_t b) const {
    PolyMatrix m = *this;
    for (std::size_t j = 0; j < cols_; ++j) std::swap(m.entries_[a * cols_ + j], m.entries_[b * cols_ + j]);
    return m;
  }

  friend bool operator==(const PolyMatrix&, const PolyMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t nvars_;
  std::vector<Polynomial> entries_;
};

inline PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols() != b.rows()) throw StructuralError("matrix product shape mismatch");
  PolyMatrix r(a.rows(), b.cols(), a.nvars());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Polynomial s(a.nvars());
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      r.set(i, j, std::move(s));
    }
  }
  return r;
}

/// All k-element subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

namespace detail {

inline Polynomial cofactor_det(const PolyMatrix& m) {
  const auto n = m.rows();
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  // n == 3, expansion along the first row
  Polynomial d = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1));
  d -= m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0));
  d += m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  return d;
}

// Fraction-free elimination; every intermediate division is exact.
inline Polynomial bareiss_det(PolyMatrix m) {
  const auto n = m.rows();
  std::vector<Polynomial> a = m.entries();
  auto at = [&](std::size_t i, std::size_t j) -> Polynomial& { return a[i * n + j]; };
  bool negate = false;
  Polynomial prev = Polynomial::constant(m.nvars(), 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (at(k, k).is_zero()) {
      std::size_t p = k + 1;
      while (p < n && at(p, k).is_zero()) ++p;
      if (p == n) return Polynomial(m.nvars());
      for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(p, j));
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        at(i, j) = divide_exact(at(i, j) * at(k, k) - at(i, k) * at(k, j), prev);
      }
      at(i, k) = Polynomial(m.nvars());
    }
    prev = at(k, k);
  }
  Polynomial d = at(n - 1, n - 1);
  return negate ? -d : d;
}

}  // namespace detail

/// Determinant by cofactor expansion up to 3x3 and Bareiss elimination above.
inline Polynomial determinant(const PolyMatrix& m) {
  if (m.rows() != m.cols()) throw StructuralError("determinant of a non-square matrix");
  if (m.rows() == 0) return Polynomial::constant(m.nvars(), 1);
  if (m.rows() <= 3) return detail::cofactor_det(m);
  return detail::bareiss_det(m);
}

/// All s x s minors, ordered by row subset then column subset (both lexicographic).
inline std::vector<Polynomial> minors(const PolyMatrix& m, std::size_t s) {
  if (s < 1 || s > std::min(m.rows(), m.cols())) throw StructuralError("minor size out of range");
  const auto row_sets = combinations(m.rows(), s);
  const auto col_sets = combinations(m.cols(), s);
  std::vector<Polynomial> out;
  out.reserve(row_sets.size() * col_sets.size());
  for (const auto& r : row_sets) {
    for (const auto& c : col_sets) out.push_back(determinant(m.submatrix(r, c)));
  }
  return out;
}

/// Exact rank of a rational matrix. Rows are cleared of denominators and then
/// reduced by fraction-free elimination over the integers.
inline std::size_t rational_rank(const std::vector<std::vector<Rational>>& rows) {
  if (rows.empty()) return 0;
  const std::size_t ncols = rows.front().size();
  std::vector<std::vector<Integer>> a;
  a.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.size() != ncols) throw StructuralError("ragged matrix");
    Integer l = 1;
    for (const auto& x : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    std::vector<Integer> ints;
    ints.reserve(ncols);
    for (const auto& x : row) ints.push_back(Integer(x.get_num() * (l / x.get_den())));
    a.push_back(std::move(ints));
  }
  std::size_t rank = 0;
  Integer prev = 1;
  for (std::size_t col = 0; col < ncols && rank < a.size(); ++col) {
    std::size_t p = rank;
    while (p < a.size() && a[p][col] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t i = rank + 1; i < a.size(); ++i) {
      for (std::size_t j = col + 1; j < ncols; ++j) {
        Integer num = a[rank][col] * a[i][j] - a[i][col] * a[rank][j];
        mpz_divexact(a[i][j].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank;
}

/// Constant terms of every entry, i.e. the matrix evaluated at the origin.
inline std::vector<std::vector<Rational>> value_at_origin(const PolyMatrix& m) {
  std::vector<std::vector<Rational>> out(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j).constant_term();
  }
  return out;
}

}  // namespace germkit
