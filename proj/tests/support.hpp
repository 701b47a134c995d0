#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "depthnorm/depth.hpp"
#include "depthnorm/matrix.hpp"

namespace depthnorm::testing {

inline std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

inline ExpressionMatrix scalar_sample(const std::vector<double>& xs) {
  return ExpressionMatrix(1, xs.size(), xs);
}

inline ExpressionMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(rows * cols);
  for (auto& x : v) x = normal(rng);
  return ExpressionMatrix(rows, cols, std::move(v));
}

// Small integers, so distance ties are frequent and exact.
inline ExpressionMatrix random_integer_matrix(std::mt19937_64& rng, std::size_t rows,
                                              std::size_t cols, int lo, int hi) {
  std::uniform_int_distribution<int> u(lo, hi);
  std::vector<double> v(rows * cols);
  for (auto& x : v) x = u(rng);
  return ExpressionMatrix(rows, cols, std::move(v));
}

// Values distinct within each column.
inline ExpressionMatrix random_tie_free(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::vector<double> v(rows * cols);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  for (std::size_t j = 0; j < cols; ++j) {
    std::vector<double> col;
    while (col.size() < rows) {
      const double x = u(rng);
      bool seen = false;
      for (double y : col) seen = seen || y == x;
      if (!seen) col.push_back(x);
    }
    std::copy(col.begin(), col.end(), v.begin() + static_cast<std::ptrdiff_t>(j * rows));
  }
  return ExpressionMatrix(rows, cols, std::move(v));
}

inline double naive_distance(const ExpressionMatrix& m, std::size_t a, std::size_t b) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double d = m(i, a) - m(i, b);
    s += d * d;
  }
  return std::sqrt(s);
}

// O(n^3) rescan: every round looks at all remaining pairs again and keeps the
// first strict maximum in (i, j) order.
inline std::vector<Border> rescan_borders(const DistanceMatrix& dm) {
  const std::size_t n = dm.size();
  std::vector<bool> taken(n, false);
  std::vector<Border> out;
  std::size_t left = n;
  while (left >= 2) {
    std::size_t bi = 0, bj = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (taken[j]) continue;
        if (dm(i, j) > best) {
          best = dm(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    taken[bi] = taken[bj] = true;
    left -= 2;
    out.push_back(Border{bi, bj, best});
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!taken[i]) out.push_back(Border{i, std::nullopt, 0.0});
  }
  return out;
}

// Tukey hinges: medians of the lower and upper halves, the middle value
// shared by both halves when n is odd.
inline std::pair<double, double> hinges(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  const std::size_t half = (n + 1) / 2;
  auto med = [&](std::size_t lo, std::size_t len) {
    const std::size_t mid = lo + len / 2;
    return len % 2 == 1 ? xs[mid] : (xs[mid - 1] + xs[mid]) / 2.0;
  };
  return {med(0, half), med(n - half, half)};
}

}  // namespace depthnorm::testing
