#include "asp/lp.hpp"

#include <cstddef>
#include <stdexcept>

namespace asp {

bool linear_feasible(const RationalMatrix& a, const std::vector<Rational>& b) {
  const std::size_t m = a.size();
  if (b.size() != m) throw std::invalid_argument("linear_feasible: row count mismatch");
  if (m == 0) return true;
  const std::size_t n = a[0].size();
  for (const auto& row : a)
    if (row.size() != n) throw std::invalid_argument("linear_feasible: ragged matrix");

  // Columns: n structural, m slacks, one artificial per row with negative rhs, then rhs.
  std::vector<std::size_t> artificial_of(m, 0);
  std::size_t artificials = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (b[i] < 0) artificial_of[i] = n + m + artificials++;
  if (artificials == 0) return true;  // x = 0

  const std::size_t cols = n + m + artificials;
  const std::size_t rhs = cols;
  std::vector<std::vector<Rational>> t(m + 1, std::vector<Rational>(cols + 1));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool negate = b[i] < 0;
    for (std::size_t j = 0; j < n; ++j) t[i][j] = negate ? Rational(-a[i][j]) : a[i][j];
    t[i][n + i] = negate ? -1 : 1;
    t[i][rhs] = negate ? Rational(-b[i]) : b[i];
    if (negate) {
      t[i][artificial_of[i]] = 1;
      basis[i] = artificial_of[i];
    } else {
      basis[i] = n + i;
    }
  }

  // Objective row: reduced costs of "minimize sum of artificials".
  auto& obj = t[m];
  for (std::size_t j = n + m; j < cols; ++j) obj[j] = 1;
  for (std::size_t i = 0; i < m; ++i) {
    if (b[i] >= 0) continue;
    for (std::size_t j = 0; j <= cols; ++j) obj[j] -= t[i][j];
  }

  for (;;) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j)
      if (obj[j] < 0) {
        enter = j;
        break;
      }
    if (enter == cols) break;

    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Rational ratio = t[i][rhs] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    // Phase I is bounded below by 0, so an entering column always has a pivot.
    if (leave == m) throw std::logic_error("linear_feasible: unbounded phase I");

    const Rational pivot = t[leave][enter];
    for (auto& v : t[leave]) v /= pivot;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      const Rational f = t[i][enter];
      for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  return obj[rhs] == 0;
}

std::optional<std::vector<Rational>> solve_linear(RationalMatrix a, std::vector<Rational> b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw std::invalid_argument("solve_linear: row count mismatch");
  for (const auto& row : a)
    if (row.size() != n) throw std::invalid_argument("solve_linear: matrix not square");

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    const Rational inv = 1 / a[col][col];
    for (std::size_t j = col; j < n; ++j) a[col][j] *= inv;
    b[col] *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a[i][col] == 0) continue;
      const Rational f = a[i][col];
      for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
      b[i] -= f * b[col];
    }
  }
  return b;
}

}  // namespace asp
