#pragma once

#include <cmath>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cliffordlab/errors.hpp"
#include "cliffordlab/scalar.hpp"

namespace cliffordlab {

template <class S>
using Matrix = std::vector<std::vector<S>>;

template <class S>
Matrix<S> zero_matrix(std::size_t rows, std::size_t cols) {
  return Matrix<S>(rows, std::vector<S>(cols, S(0)));
}

template <class S>
Matrix<S> identity_matrix(std::size_t n) {
  auto m = zero_matrix<S>(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = S(1);
  return m;
}

template <class S>
Matrix<S> transpose(const Matrix<S>& a) {
  if (a.empty()) return {};
  Matrix<S> t = zero_matrix<S>(a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

template <class S>
Matrix<S> matmul(const Matrix<S>& a, const Matrix<S>& b) {
  if (a.empty() || b.empty()) return {};
  if (a[0].size() != b.size()) throw DimMismatch();
  Matrix<S> c = zero_matrix<S>(a.size(), b[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (exactly_zero(a[i][k])) continue;
      for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] = c[i][j] + a[i][k] * b[k][j];
    }
  return c;
}

// Zero test used during elimination: tolerance relative to the matrix scale for floats.
template <class S>
bool negligible(const S& x, double scale) {
  if constexpr (std::is_same_v<S, Float>) return x.is_zero(scale);
  else return is_zero(x);
}

template <class S>
double matrix_scale(const Matrix<S>& m) {
  double s = 0;
  if constexpr (std::is_same_v<S, Float>)
    for (const auto& r : m)
      for (const auto& x : r) s = std::max(s, std::fabs(x.value()));
  return s;
}

// Division-free determinant by cofactor expansion over column subsets.
template <class S>
S determinant(const Matrix<S>& m) {
  const std::size_t n = m.size();
  if (n == 0) return S(1);
  for (const auto& r : m)
    if (r.size() != n) throw NonSquare();
  if (n > 20) throw OutOfRange("determinant size");
  std::unordered_map<unsigned, S> memo;
  // minor of rows [n - popcount(cols), n) and the given column set
  auto rec = [&](auto&& self, unsigned cols) -> S {
    int k = __builtin_popcount(cols);
    if (k == 0) return S(1);
    auto it = memo.find(cols);
    if (it != memo.end()) return it->second;
    std::size_t row = n - k;
    S acc(0);
    int pos = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(cols & (1u << j))) continue;
      if (!exactly_zero(m[row][j])) {
        S sub = self(self, cols & ~(1u << j));
        S t = m[row][j] * sub;
        acc = (pos % 2) ? acc - t : acc + t;
      }
      ++pos;
    }
    memo.emplace(cols, acc);
    return acc;
  };
  return rec(rec, (1u << n) - 1);
}

// Reduced row echelon form in place.  Columns are scanned left to right among the first
// `ncols`; within a column the pivot row minimizes pivot_cost.  Returns pivot columns.
template <class S>
std::vector<int> rref(Matrix<S>& a, int ncols) {
  std::vector<int> piv;
  const int rows = static_cast<int>(a.size());
  double scale = matrix_scale(a);
  int r = 0;
  for (int col = 0; col < ncols && r < rows; ++col) {
    int best = -1;
    double best_cost = 0;
    for (int i = r; i < rows; ++i) {
      if (negligible(a[i][col], scale)) continue;
      double c = pivot_cost(a[i][col]);
      if (best < 0 || c < best_cost) {
        best = i;
        best_cost = c;
      }
    }
    if (best < 0) {
      for (int i = r; i < rows; ++i) a[i][col] = S(0);
      continue;
    }
    std::swap(a[r], a[best]);
    S p = a[r][col];
    for (auto& x : a[r]) x = x / p;
    a[r][col] = S(1);
    for (int i = 0; i < rows; ++i) {
      if (i == r || exactly_zero(a[i][col])) continue;
      S f = a[i][col];
      for (std::size_t j = 0; j < a[i].size(); ++j)
        if (!exactly_zero(a[r][j])) a[i][j] = a[i][j] - f * a[r][j];
      a[i][col] = S(0);
    }
    piv.push_back(col);
    ++r;
  }
  return piv;
}

template <class S>
int rank(Matrix<S> a) {
  if (a.empty()) return 0;
  return static_cast<int>(rref(a, static_cast<int>(a[0].size())).size());
}

// Unique solution of a x = b, or nullopt if singular or inconsistent.
template <class S>
std::optional<std::vector<S>> solve_unique(const Matrix<S>& a, const std::vector<S>& b) {
  const int rows = static_cast<int>(a.size());
  const int cols = rows ? static_cast<int>(a[0].size()) : 0;
  Matrix<S> aug = a;
  for (int i = 0; i < rows; ++i) aug[i].push_back(b[i]);
  auto piv = rref(aug, cols);
  if (static_cast<int>(piv.size()) != cols) return std::nullopt;
  double scale = matrix_scale(aug);
  for (int i = cols; i < rows; ++i)
    if (!negligible(aug[i][cols], scale)) return std::nullopt;
  std::vector<S> x(cols, S(0));
  for (int i = 0; i < cols; ++i) x[piv[i]] = aug[i][cols];
  return x;
}

template <class S>
std::optional<Matrix<S>> inverse(const Matrix<S>& a) {
  const std::size_t n = a.size();
  Matrix<S> aug = a;
  for (std::size_t i = 0; i < n; ++i) {
    if (aug[i].size() != n) throw NonSquare();
    for (std::size_t j = 0; j < n; ++j) aug[i].push_back(i == j ? S(1) : S(0));
  }
  auto piv = rref(aug, static_cast<int>(n));
  if (piv.size() != n) return std::nullopt;
  Matrix<S> inv = zero_matrix<S>(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

// Basis of the null space {x : a x = 0}; one vector per free column, in column order.
template <class S>
std::vector<std::vector<S>> nullspace(Matrix<S> a, int cols) {
  auto piv = rref(a, cols);
  std::vector<bool> is_piv(cols, false);
  for (int p : piv) is_piv[p] = true;
  std::vector<std::vector<S>> out;
  for (int f = 0; f < cols; ++f) {
    if (is_piv[f]) continue;
    std::vector<S> v(cols, S(0));
    v[f] = S(1);
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -a[i][f];
    out.push_back(v);
  }
  return out;
}

}  // namespace cliffordlab
