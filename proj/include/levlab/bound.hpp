#pragma once

// Lower bounds for the number of critical zeros of a family of Dirichlet
// L-functions by Levinson's method:
//
//   N0(T) >= N(T) - 2T J / (pi (1/2 - sigma)) + O(log QT),
//   J = (1/2T) \int_{-T}^{T} sum_f c_f log|F(sigma + it, f)| dt,  F = G M,
//
// together with the convexity relaxations J <= log K <= (1/2) log L, where K
// and L are the family means of |F| and |F|^2 on the same segment.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "levlab/characters.hpp"
#include "levlab/error.hpp"
#include "levlab/lfunction.hpp"
#include "levlab/mollifier.hpp"
#include "levlab/parallel.hpp"
#include "levlab/special.hpp"
#include "levlab/zeros.hpp"

namespace levlab {

/// X'/X(s) for X(s) = (q/pi)^{s/2} Gamma((s + nu)/2).
inline cplx x_log_derivative(const DirichletCharacter& chi, cplx s) {
  const cplx z = 0.5 * (s + static_cast<double>(chi.parity()));
  if (z.real() <= 0.0 && std::abs(z - std::round(z.real())) < 1e-8)
    throw ValidationError("x_log_derivative: too close to a pole of the digamma function");
  const double qt = static_cast<double>(chi.modulus()) / std::numbers::pi;
  return 0.5 * std::log(qt) + 0.5 * digamma(z);
}

/// Y(s) = 2 - lambda X'/X(s) - lambda X'/X(1 - s).
inline cplx y_value(const DirichletCharacter& chi, cplx s, double lambda) {
  if (lambda == 0.0) return {2.0, 0.0};
  return 2.0 - lambda * x_log_derivative(chi, s) - lambda * x_log_derivative(chi, 1.0 - s);
}

/// Sign changes of Y(1/2 + it) (real there) over a uniform scan of [-T, T].
inline long y_sign_changes(const DirichletCharacter& chi, double T, double lambda, double step = 0.05) {
  require(T > 0.0 && step > 0.0, "y_sign_changes: T and step must be positive");
  const int n = static_cast<int>(std::ceil(2.0 * T / step));
  long changes = 0;
  double prev = y_value(chi, {0.5, -T}, lambda).real();
  for (int i = 1; i <= n; ++i) {
    const double cur = y_value(chi, {0.5, -T + 2.0 * T * i / n}, lambda).real();
    if ((cur < 0.0) != (prev < 0.0)) ++changes;
    prev = cur;
  }
  return changes;
}

/// Means over [-T, T] of log|F|, |F| and |F|^2 (dt / 2T).
struct SegmentMeans {
  double logAbs = 0.0;
  double abs = 0.0;
  double abs2 = 0.0;
  long panels = 0;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {0.129484966168869693270611432679082,
                                                        0.279705391489276667901467771423780,
                                                        0.381830050505118944950369775488975,
                                                        0.417959183673469387755102040816327};

struct PanelResult {
  std::array<double, 3> kronrod{};
  std::array<double, 3> gauss{};
  double min_abs = 0.0;
};

template <typename Fn>
PanelResult gk_panel(const Fn& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  PanelResult out;
  out.min_abs = INFINITY;
  auto add = [&](double t, double wk, double wg) {
    const double m = std::abs(f(t));
    out.min_abs = std::min(out.min_abs, m);
    const std::array<double, 3> v = {std::log(m), m, m * m};
    for (int j = 0; j < 3; ++j) {
      out.kronrod[j] += wk * v[j];
      out.gauss[j] += wg * v[j];
    }
  };
  add(c, kKronrodWeights[7], kGaussWeights[3]);
  for (int i = 0; i < 7; ++i) {
    const double wg = (i % 2 == 1) ? kGaussWeights[i / 2] : 0.0;
    add(c - h * kKronrodNodes[i], kKronrodWeights[i], wg);
    add(c + h * kKronrodNodes[i], kKronrodWeights[i], wg);
  }
  for (int j = 0; j < 3; ++j) {
    out.kronrod[j] *= h;
    out.gauss[j] *= h;
  }
  return out;
}

}  // namespace detail

struct QuadratureSettings {
  double abs_tol = 1e-8;  ///< per-unit-length tolerance on each panel's log|F| contribution
  double rel_tol = 1e-9;  ///< relative tolerance on the |F| and |F|^2 contributions
  double panel = 0.5;     ///< initial panel width
  int max_depth = 48;
};

/**
 * @brief Segment means of log|F|, |F|, |F|^2 for any F(t) on [-T, T].
 *
 * Adaptive Gauss-Kronrod with bisection. Log singularities from zeros of F
 * close to the segment are integrable and resolved by subdivision; a panel
 * still unresolved at max_depth is reported with its location.
 */
template <typename Fn>
SegmentMeans segment_means(const Fn& f, double T, const QuadratureSettings& qs = {}) {
  require(T > 0.0, "segment_means: T must be positive");
  const int n0 = std::max(2, static_cast<int>(std::ceil(2.0 * T / qs.panel)));
  std::array<CompensatedSum<double>, 3> acc;
  long panels = 0;

  std::function<void(double, double, const detail::PanelResult&, int)> refine =
      [&](double a, double b, const detail::PanelResult& p, int depth) {
        const double w = b - a;
        bool ok = true;
        for (int j = 0; j < 3; ++j) {
          const double err = std::abs(p.kronrod[j] - p.gauss[j]);
          const double lim = j == 0 ? qs.abs_tol * w : qs.rel_tol * std::max(std::abs(p.kronrod[j]), 1e-300);
          if (!(err <= lim)) ok = false;
        }
        if (ok) {
          for (int j = 0; j < 3; ++j) acc[j] += p.kronrod[j];
          ++panels;
          return;
        }
        if (depth >= qs.max_depth)
          throw NumericalError("log|F| quadrature did not converge near t = " + std::to_string(0.5 * (a + b)));
        const double m = 0.5 * (a + b);
        refine(a, m, detail::gk_panel(f, a, m), depth + 1);
        refine(m, b, detail::gk_panel(f, m, b), depth + 1);
      };

  for (int i = 0; i < n0; ++i) {
    const double a = -T + 2.0 * T * i / n0;
    const double b = i + 1 == n0 ? T : -T + 2.0 * T * (i + 1) / n0;
    refine(a, b, detail::gk_panel(f, a, b), 0);
  }
  return {acc[0].value() / (2.0 * T), acc[1].value() / (2.0 * T), acc[2].value() / (2.0 * T), panels};
}

/// F(sigma + it) = G(s) M(s) with G = L + lambda L' and M = sum c(m) sqrt(m) chi(m) m^{-s}.
class MollifiedForm {
 public:
  MollifiedForm(const DirichletCharacter& chi, double sigma, double lambda, const MollifierCoefficients* coeffs)
      : chi_(chi), sigma_(sigma), lambda_(lambda), coeffs_(coeffs) {}

  cplx operator()(double t) const {
    const cplx s{sigma_, t};
    const auto jet = l_jet(chi_, s);
    const cplx g = jet.value + lambda_ * jet.derivative;
    return coeffs_ ? g * mollifier_value(*coeffs_, chi_, s) : g;
  }

 private:
  DirichletCharacter chi_;
  double sigma_;
  double lambda_;
  const MollifierCoefficients* coeffs_;
};

/// (1/2 pi) \int_{-T}^{T} log|F(sigma + it)| dt. `coeffs` null means M = 1.
inline double littlewood_integral(const DirichletCharacter& chi, double sigma, double T, double lambda,
                                  const MollifierCoefficients* coeffs, const QuadratureSettings& qs = {}) {
  require(chi.is_primitive(), "littlewood_integral: character must be primitive");
  const auto means = segment_means(MollifiedForm(chi, sigma, lambda, coeffs), T, qs);
  return means.logAbs * 2.0 * T / (2.0 * std::numbers::pi);
}

/// Primitive characters with positive weights summing to 1.
struct FamilySpec {
  std::vector<DirichletCharacter> members;
  std::vector<double> weights;
  double T = 0.0;

  /// All primitive characters mod q, equally weighted.
  static FamilySpec primitive(std::int64_t q, double T) {
    FamilySpec f;
    f.members = primitive_characters(q);
    f.weights.assign(f.members.size(), f.members.empty() ? 0.0 : 1.0 / static_cast<double>(f.members.size()));
    f.T = T;
    return f;
  }

  void validate() const {
    require(!members.empty(), "FamilySpec: empty family");
    require(members.size() == weights.size(), "FamilySpec: one weight per member");
    require(T > 0.0, "FamilySpec: T must be positive");
    double total = 0.0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      require(members[i].is_primitive(), "FamilySpec: members must be primitive");
      require(weights[i] > 0.0, "FamilySpec: weights must be positive");
      total += weights[i];
    }
    require(std::abs(total - 1.0) <= 1e-12, "FamilySpec: weights must sum to 1");
  }

  /// Largest member modulus, standing in for Q.
  std::int64_t scale_modulus() const {
    std::int64_t q = 1;
    for (const auto& m : members) q = std::max(q, m.modulus());
    return q;
  }
};

/// Zero data that does not depend on (R, theta, r).
struct FamilyZeros {
  std::vector<CriticalZeroList> perMember;
  double nTotal = 0.0;    ///< weighted argument-principle count
  double actualN0 = 0.0;  ///< weighted count of located simple zeros
};

inline FamilyZeros family_zeros(const FamilySpec& family) {
  family.validate();
  FamilyZeros out;
  out.perMember.resize(family.members.size());
  parallel_for(family.members.size(),
               [&](std::size_t i) { out.perMember[i] = find_critical_zeros(family.members[i], family.T); });
  CompensatedSum<double> n, n0;
  for (std::size_t i = 0; i < family.members.size(); ++i) {
    n += family.weights[i] * static_cast<double>(out.perMember[i].argument_count);
    n0 += family.weights[i] * static_cast<double>(out.perMember[i].simple_count());
  }
  out.nTotal = n.value();
  out.actualN0 = n0.value();
  return out;
}

struct BoundSettings {
  double errorConstant = 2.0;  ///< C in the reported +-C log(qT) band
  QuadratureSettings quadrature{};
};

struct BoundReport {
  double T = 0.0;
  double R = 0.0;
  double theta = 0.0;
  double r = 0.0;
  double analyticConductorN = 0.0;  ///< (Q/pi) T
  double sigma = 0.0;
  double lambda = 0.0;
  double X = 0.0;
  double nTotal = 0.0;
  double nApprox = 0.0;  ///< (T/pi) log N
  double actualN0 = 0.0;
  double littlewoodJ = 0.0;
  double logK = 0.0;
  double lBar = 0.0;
  double lowerBoundJ = 0.0;     ///< N - 2T J / (pi (1/2 - sigma))
  double lowerBoundK = 0.0;     ///< J replaced by log K
  double lowerBoundL = 0.0;     ///< J replaced by (1/2) log L
  double lowerBoundLMain = 0.0; ///< (1 - log(L)/R) N
  double errorBand = 0.0;       ///< C log(QT)
  double chainSlack = 0.0;      ///< largest violation of J <= log K <= (1/2) log L (0 if none)
  std::vector<double> memberJ;  ///< per-member (1/2T) \int log|F|
};

/**
 * @brief Levinson lower bound for a family at fixed (R, theta, r).
 *
 * sigma = 1/2 - R/log N, lambda = 1/(r log N), X = N^theta with N the
 * analytic conductor (Q/pi) T. Zero data may be passed in to share it across
 * several parameter choices.
 */
inline BoundReport zero_count_bound(const FamilySpec& family, double R, double theta, double r,
                                    const BoundSettings& settings = {},
                                    const std::optional<FamilyZeros>& zeros = std::nullopt) {
  family.validate();
  require(R > 0.0, "zero_count_bound: R must be positive");
  require(theta > 0.0, "zero_count_bound: theta must be positive");
  require(r > 0.0, "zero_count_bound: r must be positive");
  const double T = family.T;
  const double Qd = static_cast<double>(family.scale_modulus());
  const double N = Qd / std::numbers::pi * T;
  require(N > std::numbers::e, "zero_count_bound: analytic conductor too small");
  const double logN = std::log(N);
  const double sigma = 0.5 - R / logN;
  require(sigma > 0.0, "zero_count_bound: R too large for this conductor (sigma <= 0)");

  BoundReport rep;
  rep.T = T;
  rep.R = R;
  rep.theta = theta;
  rep.r = r;
  rep.analyticConductorN = N;
  rep.sigma = sigma;
  rep.lambda = 1.0 / (r * logN);
  rep.X = std::exp(theta * logN);
  rep.nApprox = T / std::numbers::pi * logN;
  rep.errorBand = settings.errorConstant * std::log(Qd * T);

  const FamilyZeros z = zeros ? *zeros : family_zeros(family);
  rep.nTotal = z.nTotal;
  rep.actualN0 = z.actualN0;

  std::optional<MollifierCoefficients> coeffs;
  if (rep.X >= 2.0) coeffs.emplace(rep.X);
  const MollifierCoefficients* cp = coeffs ? &*coeffs : nullptr;

  std::vector<SegmentMeans> means(family.members.size());
  parallel_for(family.members.size(), [&](std::size_t i) {
    means[i] = segment_means(MollifiedForm(family.members[i], sigma, rep.lambda, cp), T, settings.quadrature);
  });
  CompensatedSum<double> j, k, l;
  for (std::size_t i = 0; i < means.size(); ++i) {
    j += family.weights[i] * means[i].logAbs;
    k += family.weights[i] * means[i].abs;
    l += family.weights[i] * means[i].abs2;
    rep.memberJ.push_back(means[i].logAbs);
  }
  rep.littlewoodJ = j.value();
  rep.logK = std::log(k.value());
  rep.lBar = l.value();
  const double halfLogL = 0.5 * std::log(rep.lBar);
  rep.chainSlack = std::max({0.0, rep.littlewoodJ - rep.logK, rep.logK - halfLogL});

  const double factor = 2.0 * T / (std::numbers::pi * (0.5 - sigma));
  rep.lowerBoundJ = rep.nTotal - factor * rep.littlewoodJ;
  rep.lowerBoundK = rep.nTotal - factor * rep.logK;
  rep.lowerBoundL = rep.nTotal - factor * halfLogL;
  rep.lowerBoundLMain = (1.0 - std::log(rep.lBar) / R) * rep.nTotal;
  return rep;
}

struct BoundScan {
  BoundReport best;  ///< largest lowerBoundJ over the grid
  std::vector<BoundReport> all;
};

/// zero_count_bound over an even R-grid in [R_lo, R_hi], sharing the zero data.
inline BoundScan scan_bound(const FamilySpec& family, double theta, double r, double R_lo = 0.3, double R_hi = 2.0,
                            int points = 18, const BoundSettings& settings = {}) {
  require(R_lo > 0.0 && R_hi >= R_lo && points >= 1, "scan_bound: bad R grid");
  const auto zeros = family_zeros(family);
  BoundScan out;
  const double logN = std::log(static_cast<double>(family.scale_modulus()) / std::numbers::pi * family.T);
  for (int i = 0; i < points; ++i) {
    const double R = points == 1 ? R_lo : R_lo + (R_hi - R_lo) * i / (points - 1);
    if (0.5 - R / logN <= 0.0) continue;
    out.all.push_back(zero_count_bound(family, R, theta, r, settings, zeros));
    if (out.all.size() == 1 || out.all.back().lowerBoundJ > out.best.lowerBoundJ) out.best = out.all.back();
  }
  if (out.all.empty()) throw ValidationError("scan_bound: no admissible R in the grid");
  return out;
}

}  // namespace levlab
