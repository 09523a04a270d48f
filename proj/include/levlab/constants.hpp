#pragma once

// Closed-form Levinson constants for the linear mollifier P(x) = x and the
// derivative-free search for the best critical-zero proportion.

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "levlab/error.hpp"
#include "levlab/nelder_mead.hpp"

namespace levlab {

/**
 * @brief Mollifier length exponent, derivative weight and shift.
 *
 * theta: X = q~^theta. r: lambda = 1/(r log q~). R: sigma = 1/2 - R/log q~.
 */
struct LevinsonParams {
  double theta = 1.0;
  double r = 1.0;
  double R = 1.0;

  /// lambda and sigma for a given log of the (normalized) conductor.
  double lambda(double log_conductor) const { return 1.0 / (r * log_conductor); }
  double sigma(double log_conductor) const { return 0.5 - R / log_conductor; }
  double length(double log_conductor) const { return std::exp(theta * log_conductor); }
};

namespace detail {
inline void check_formula_domain(const LevinsonParams& p, const char* who) {
  require(p.theta > 0.0 && p.theta <= 1.0, std::string(who) + ": theta must lie in (0, 1]");
  require(p.R != 0.0, std::string(who) + ": R must be nonzero");
  require(std::isfinite(p.r) && std::isfinite(p.R), std::string(who) + ": non-finite parameter");
}
}  // namespace detail

/// C(theta, r, R). Admits any real r and any R != 0.
inline double big_c(const LevinsonParams& p) {
  detail::check_formula_domain(p, "big_c");
  const double th = p.theta, r = p.r, R = p.R;
  const double inv = 1.0 / (th * R);
  const double lin = th * R / 3.0;
  return -(r * r / 2.0 + 1.0 / (4.0 * R * R)) * (inv + lin) + r * r / 2.0 - (r / (2.0 * R)) * (inv - lin);
}

/// C*(theta, r, R), written out directly; equals big_c at (1 - r, -R)
/// bit-for-bit because every operation mirrors big_c under negation.
inline double big_c_star(const LevinsonParams& p) {
  detail::check_formula_domain(p, "big_c_star");
  const double th = p.theta, R = p.R;
  const double rm = p.r - 1.0;
  const double inv = 1.0 / (th * R);
  const double lin = th * R / 3.0;
  return (rm * rm / 2.0 + 1.0 / (4.0 * R * R)) * (inv + lin) + rm * rm / 2.0 + (rm / (2.0 * R)) * (inv - lin);
}

/// c(theta, r, R) = (C + e^{2R} C*) / r^2.
inline double levinson_c(const LevinsonParams& p) {
  require(p.r != 0.0, "levinson_c: r must be nonzero");
  require(p.R > 0.0, "levinson_c: R must be positive");
  return (big_c(p) + std::exp(2.0 * p.R) * big_c_star(p)) / (p.r * p.r);
}

/// The explicit r = 1 specialization; an independent code path from levinson_c.
inline double levinson_c_r1(double theta, double R) {
  require(theta > 0.0 && theta <= 1.0, "levinson_c_r1: theta must lie in (0, 1]");
  require(R > 0.0, "levinson_c_r1: R must be positive");
  return std::exp(2.0 * R) / (4.0 * R * R) * (1.0 / (theta * R) + theta * R / 3.0) -
         1.0 / (4.0 * theta * R * R * R) - 1.0 / (2.0 * theta * R * R) -
         (1.0 / (2.0 * theta) + theta / 12.0) / R + (theta + 3.0) / 6.0 - theta * R / 6.0;
}

/// kappa' = 1 - log(c)/R. Throws when c <= 0.
inline double kappa_prime(const LevinsonParams& p) {
  require(p.R > 0.0, "kappa_prime: R must be positive");
  const double c = levinson_c(p);
  require(c > 0.0, "kappa_prime: c(theta, r, R) <= 0, logarithm undefined");
  return 1.0 - std::log(c) / p.R;
}

struct ConstantReport {
  double bigC;
  double bigCstar;
  double c;
  double kappaPrime;
};

inline ConstantReport constant_report(const LevinsonParams& p) {
  const double c = levinson_c(p);
  return {big_c(p), big_c_star(p), c, kappa_prime(p)};
}

struct SearchBox {
  double r_lo = 0.5, r_hi = 2.0;
  double R_lo = 0.2, R_hi = 2.0;
};

struct OptimizationResult {
  LevinsonParams best;
  double kappaPrime;
  int evaluations;
  SearchBox box;
  double refinementTolerance;
};

/**
 * @brief Maximize kappa' over (r, R) in a box for fixed theta.
 *
 * A grid scan (`grid` x `grid`, ties to smaller R then smaller r) seeds a
 * box-constrained simplex refinement to `tol` in parameter space. The
 * reported kappa' is recomputed at the returned point.
 */
inline OptimizationResult optimize_kappa(double theta, SearchBox box = {}, double tol = 1e-8, int grid = 64) {
  require(theta > 0.0 && theta <= 1.0, "optimize_kappa: theta must lie in (0, 1]");
  require(box.r_lo > 0.0 && box.R_lo > 0.0 && box.r_lo < box.r_hi && box.R_lo < box.R_hi,
          "optimize_kappa: box must satisfy 0 < lo < hi in r and R");
  require(tol > 0.0, "optimize_kappa: tol must be positive");
  require(grid >= 2, "optimize_kappa: grid must be >= 2");

  auto objective = [theta](double r, double R) {
    const LevinsonParams p{theta, r, R};
    const double c = levinson_c(p);
    if (!(c > 0.0)) return -std::numeric_limits<double>::infinity();
    return 1.0 - std::log(c) / R;
  };

  int evals = 0;
  double best_k = -std::numeric_limits<double>::infinity();
  double best_r = 0.0, best_R = 0.0;
  // R outer, r inner: the first strict maximum wins, which realizes the
  // smaller-R-then-smaller-r tie-break
  for (int j = 0; j < grid; ++j) {
    const double R = box.R_lo + (box.R_hi - box.R_lo) * j / (grid - 1);
    for (int i = 0; i < grid; ++i) {
      const double r = box.r_lo + (box.r_hi - box.r_lo) * i / (grid - 1);
      const double k = objective(r, R);
      ++evals;
      if (k > best_k) {
        best_k = k;
        best_r = r;
        best_R = R;
      }
    }
  }
  if (!std::isfinite(best_k)) throw ValidationError("optimize_kappa: c <= 0 on the entire box");

  const std::array<double, 2> step = {(box.r_hi - box.r_lo) / (grid - 1), (box.R_hi - box.R_lo) / (grid - 1)};
  const auto refined = nelder_mead_box<2>([&](const std::array<double, 2>& x) { return -objective(x[0], x[1]); },
                                          {best_r, best_R}, {box.r_lo, box.R_lo}, {box.r_hi, box.R_hi}, step, tol);
  evals += refined.evaluations;

  LevinsonParams best{theta, best_r, best_R};
  if (-refined.value > best_k) best = {theta, refined.x[0], refined.x[1]};
  return {best, kappa_prime(best), evals, box, tol};
}

struct SurfacePoint {
  double r;
  double R;
  double kappaPrime;  ///< NaN where c <= 0
};

/// kappa' on a grid x grid lattice over the box, ordered by r then R.
inline std::vector<SurfacePoint> kappa_surface(double theta, int grid, SearchBox box = {}) {
  require(theta > 0.0 && theta <= 1.0, "kappa_surface: theta must lie in (0, 1]");
  require(grid >= 2, "kappa_surface: grid must be >= 2");
  require(box.r_lo > 0.0 && box.R_lo > 0.0 && box.r_lo < box.r_hi && box.R_lo < box.R_hi,
          "kappa_surface: box must satisfy 0 < lo < hi in r and R");
  std::vector<SurfacePoint> out;
  out.reserve(static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    const double r = box.r_lo + (box.r_hi - box.r_lo) * i / (grid - 1);
    for (int j = 0; j < grid; ++j) {
      const double R = box.R_lo + (box.R_hi - box.R_lo) * j / (grid - 1);
      const double c = levinson_c({theta, r, R});
      out.push_back({r, R, c > 0.0 ? 1.0 - std::log(c) / R : std::numeric_limits<double>::quiet_NaN()});
    }
  }
  return out;
}

}  // namespace levlab
