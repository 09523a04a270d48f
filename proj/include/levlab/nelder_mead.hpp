#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>

namespace levlab {

/// Result of a bounded simplex search.
template <std::size_t N>
struct SimplexResult {
  std::array<double, N> x;
  double value;
  int evaluations;
};

/**
 * @brief Nelder-Mead minimization on a box.
 *
 * Trial points are clamped into [lo, hi] coordinate-wise, so the result is
 * always feasible. Stops when the simplex diameter falls below `xtol` or the
 * evaluation budget is exhausted. Deterministic for fixed inputs.
 */
template <std::size_t N, typename F>
SimplexResult<N> nelder_mead_box(F&& f, std::array<double, N> start, std::array<double, N> lo,
                                 std::array<double, N> hi, std::array<double, N> initial_step,
                                 double xtol, int max_evals = 5000) {
  using Point = std::array<double, N>;
  auto clamp = [&](Point p) {
    for (std::size_t i = 0; i < N; ++i) p[i] = std::clamp(p[i], lo[i], hi[i]);
    return p;
  };
  int evals = 0;
  auto eval = [&](const Point& p) {
    ++evals;
    const double v = f(p);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::array<Point, N + 1> pts;
  std::array<double, N + 1> vals;
  pts[0] = clamp(start);
  for (std::size_t i = 0; i < N; ++i) {
    Point p = pts[0];
    p[i] += initial_step[i];
    if (p[i] > hi[i]) p[i] = pts[0][i] - initial_step[i];
    pts[i + 1] = clamp(p);
  }
  for (std::size_t i = 0; i <= N; ++i) vals[i] = eval(pts[i]);

  auto order = [&] {
    std::array<std::size_t, N + 1> idx;
    for (std::size_t i = 0; i <= N; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    auto p2 = pts;
    auto v2 = vals;
    for (std::size_t i = 0; i <= N; ++i) {
      pts[i] = p2[idx[i]];
      vals[i] = v2[idx[i]];
    }
  };
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i <= N; ++i)
      for (std::size_t j = 0; j < N; ++j) d = std::max(d, std::abs(pts[i][j] - pts[0][j]));
    return d;
  };
  auto along = [&](const Point& c, const Point& p, double t) {
    Point out;
    for (std::size_t j = 0; j < N; ++j) out[j] = c[j] + t * (p[j] - c[j]);
    return clamp(out);
  };

  order();
  while (evals < max_evals && diameter() > xtol) {
    Point centroid{};
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) centroid[j] += pts[i][j] / static_cast<double>(N);

    const Point xr = along(centroid, pts[N], -1.0);
    const double fr = eval(xr);
    if (fr < vals[0]) {
      const Point xe = along(centroid, pts[N], -2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[N] = xe;
        vals[N] = fe;
      } else {
        pts[N] = xr;
        vals[N] = fr;
      }
    } else if (fr < vals[N - 1]) {
      pts[N] = xr;
      vals[N] = fr;
    } else {
      const bool outside = fr < vals[N];
      const Point xc = outside ? along(centroid, pts[N], -0.5) : along(centroid, pts[N], 0.5);
      const double fc = eval(xc);
      if (fc < std::min(fr, vals[N])) {
        pts[N] = xc;
        vals[N] = fc;
      } else {
        for (std::size_t i = 1; i <= N; ++i) {
          pts[i] = along(pts[0], pts[i], 0.5);
          vals[i] = eval(pts[i]);
        }
      }
    }
    order();
  }
  return {pts[0], vals[0], evals};
}

}  // namespace levlab
