#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "moduli/rational.hpp"

namespace moduli {

template <typename T>
using Matrix = std::vector<std::vector<T>>;

// Exact solution-set description of M x = rhs over a field.
template <typename T>
struct LinearSolution {
  bool consistent = false;
  std::vector<T> particular;          // one solution (free variables set to 0)
  std::vector<std::vector<T>> kernel; // basis of the homogeneous solution space
  std::vector<std::size_t> pivot_cols;
  std::vector<std::size_t> free_cols;
};

namespace detail {

// In-place reduced row echelon form. Deterministic pivoting: columns are
// scanned in index order and the first row with a nonzero entry is used.
template <typename T>
std::vector<std::size_t> rref(Matrix<T>& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t sel = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (!fe_is_zero(m[i][c])) {
        sel = i;
        break;
      }
    if (sel == rows) continue;
    std::swap(m[r], m[sel]);
    T inv = m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] = m[r][j] / inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || fe_is_zero(m[i][c])) continue;
      T f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] = m[i][j] - f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace detail

// Public handle on the elimination itself, for callers that inspect the
// echelon form directly (kernel-projection checks).
template <typename T>
std::vector<std::size_t> rref_in_place(Matrix<T>& m) {
  return detail::rref(m);
}

template <typename T>
std::size_t matrix_rank(Matrix<T> m) {
  return detail::rref(m).size();
}

// Fraction-free in effect: all arithmetic is exact field arithmetic, nothing
// is ever rounded. Inconsistency is reported, never approximated.
template <typename T>
LinearSolution<T> solve_linear_exact(const Matrix<T>& mat, const std::vector<T>& rhs,
                                     const T& zero, const T& one) {
  std::size_t rows = mat.size();
  std::size_t cols = rows == 0 ? 0 : mat[0].size();
  if (rhs.size() != rows) throw std::invalid_argument("rhs length does not match the matrix");
  Matrix<T> aug(rows, std::vector<T>(cols + 1, zero));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) aug[i][j] = mat[i][j];
    aug[i][cols] = rhs[i];
  }
  std::vector<std::size_t> pivots = detail::rref(aug);

  LinearSolution<T> sol;
  // a pivot in the rhs column means inconsistency
  if (!pivots.empty() && pivots.back() == cols) {
    sol.consistent = false;
    return sol;
  }
  sol.consistent = true;
  sol.pivot_cols = pivots;
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  for (std::size_t c = 0; c < cols; ++c)
    if (!is_pivot[c]) sol.free_cols.push_back(c);

  sol.particular.assign(cols, zero);
  for (std::size_t r = 0; r < pivots.size(); ++r) sol.particular[pivots[r]] = aug[r][cols];

  for (std::size_t fc : sol.free_cols) {
    std::vector<T> v(cols, zero);
    v[fc] = one;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = zero - aug[r][fc];
    sol.kernel.push_back(std::move(v));
  }
  return sol;
}

}  // namespace moduli
