#pragma once

// Brute-force reference computations used to cross-check the library.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dilatia/dilatia.hpp"

namespace oracle {

/// All-pairs shortest paths: turns any nonnegative symmetric matrix with a
/// zero diagonal into a metric.
inline dilatia::Matrix floyd_warshall(dilatia::Matrix m) {
  const std::size_t n = m.size();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m[i][j] = std::min(m[i][j], m[i][k] + m[k][j]);
  return m;
}

/// Crossing scale on a uniform grid of `cells` candidate values in (0, 1]:
/// the smallest grid value g with d(act(1/g, x), x0) <= eps. Images that
/// leave the space count as infinitely far; eps gets the window's 1e-12 slack.
template <class P>
double gamma_grid(const dilatia::RadialAction<P>& action, const P& x, double eps, int cells = 4096) {
  const auto& X = action.space;
  if (X.distance(x, X.center()) == 0.0) return 0.0;
  for (int k = 1; k <= cells; ++k) {
    const double g = static_cast<double>(k) / cells;
    const P y = action.act(1.0 / g, x);
    if (X.contains(y) && X.distance(y, X.center()) <= eps * (1.0 + 1e-12)) return g;
  }
  return std::numeric_limits<double>::infinity();
}

/// sup over a dense geometric grid of scales b in [floor, top] of
/// d(F(b)x, F(b)y)/b, restricted to the smallest decade.
template <class P>
double limsup_grid(const dilatia::Space<P>& X, const dilatia::DilationFamily<P>& fam, const P& x,
                   const P& y, double floor = 1e-8, int points = 2000) {
  double sup = 0.0;
  for (int i = 0; i < points; ++i) {
    const double b = floor * std::pow(10.0, static_cast<double>(i) / (points - 1));
    sup = std::max(sup, X.distance(fam.map(b, x), fam.map(b, y)) / b);
  }
  return sup;
}

}  // namespace oracle
