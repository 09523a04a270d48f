#pragma once

// Mollified second moments
//   I_chi = \int |G(sigma + it, chi) M(1/2 + it, chi)|^2 Phi(t) dt,
//   G = L + lambda L',
// per character and averaged over the primitive characters of a range of
// moduli weighted by Psi(q/Q).

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "levlab/arith.hpp"
#include "levlab/characters.hpp"
#include "levlab/constants.hpp"
#include "levlab/error.hpp"
#include "levlab/lfunction.hpp"
#include "levlab/mollifier.hpp"
#include "levlab/parallel.hpp"

namespace levlab {

/// Which conductor sets lambda, sigma and X: q~ = q/pi alone, or the
/// analytic conductor q~ T. Desk-scale runs use the latter.
enum class ConductorScale { Arithmetic, Analytic };

inline double log_conductor(std::int64_t q, double T, ConductorScale scale) {
  const double qt = static_cast<double>(q) / std::numbers::pi;
  return scale == ConductorScale::Analytic ? std::log(qt * T) : std::log(qt);
}

/// Smooth even weight Phi(t) >= 0 on |t| <= cutoff * T.
struct SmoothingPhi {
  enum class Shape { Gaussian, Bump };
  double T = 1.0;
  Shape shape = Shape::Gaussian;
  double cutoff = 8.0;

  static SmoothingPhi gaussian(double T, double cutoff = 8.0) { return {T, Shape::Gaussian, cutoff}; }
  static SmoothingPhi bump(double T, double cutoff = 1.0) { return {T, Shape::Bump, cutoff}; }

  double half_width() const { return cutoff * T; }

  double operator()(double t) const {
    const double u = t / T;
    if (std::abs(u) >= cutoff) return 0.0;
    if (shape == Shape::Gaussian) return std::exp(-u * u);
    const double v = u / cutoff;
    return std::exp(-1.0 / (1.0 - v * v));
  }

  /// \int Phi over its truncated support.
  double integral() const {
    if (shape == Shape::Gaussian) return T * std::sqrt(std::numbers::pi) * std::erf(cutoff);
    // trapezoid is spectrally accurate for a C-infinity bump
    const int n = 4096;
    const double a = half_width();
    const double h = 2.0 * a / n;
    CompensatedSum<double> acc;
    for (int i = 1; i < n; ++i) acc += (*this)(-a + i * h);
    return acc.value() * h;
  }
};

/// C-infinity bump on [1, 2]: exp(-1/(1 - u^2)), u = 2x - 3.
struct WeightPsi {
  double operator()(double x) const {
    const double u = 2.0 * x - 3.0;
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
  }
};

/// G(s, chi) = L(s, chi) + lambda L'(s, chi).
inline cplx g_value(const DirichletCharacter& chi, cplx s, double lambda) {
  require(chi.is_primitive(), "g_value: character must be primitive");
  const auto jet = l_jet(chi, s);
  return jet.value + lambda * jet.derivative;
}

struct MomentSettings {
  double rel_tol = 1e-6;  ///< absolute quadrature error target as a fraction of Phi^(1)
  int max_halvings = 8;
  double max_work = 4e11;  ///< cost guard: residue-sum terms over all quadrature points
};

namespace detail {

// The moment integrand for every character in `chars` (all of one modulus)
// at a single t, sharing one residue bank and one table of m^{-it}.
class ModulusIntegrand {
 public:
  ModulusIntegrand(std::vector<DirichletCharacter> chars, double sigma, double lambda, double X)
      : chars_(std::move(chars)), sigma_(sigma), lambda_(lambda) {
    if (X >= 2.0) coeffs_.emplace(X);
  }

  std::size_t size() const { return chars_.size(); }
  const DirichletCharacter& character(std::size_t i) const { return chars_[i]; }

  void operator()(double t, std::vector<double>& out) const {
    const std::int64_t q = chars_.front().modulus();
    const ResidueBank bank(q, cplx{sigma_, t}, lambda_ != 0.0);
    std::vector<cplx> mterm;
    if (coeffs_) {
      const auto& support = coeffs_->support();
      mterm.resize(support.size());
      for (std::size_t j = 0; j < support.size(); ++j) {
        const double m = support[j];
        // c(m) sqrt(m) m^{-1/2 - it} = c(m) m^{-it}
        mterm[j] = (*coeffs_)[support[j]] * std::polar(1.0, -t * std::log(m));
      }
    }
    out.resize(chars_.size());
    for (std::size_t i = 0; i < chars_.size(); ++i) {
      const auto jet = bank.evaluate(chars_[i]);
      const cplx g = jet.value + lambda_ * jet.derivative;
      cplx mval{1.0, 0.0};
      if (coeffs_) {
        CompensatedSum<cplx> acc;
        const auto& support = coeffs_->support();
        for (std::size_t j = 0; j < support.size(); ++j) acc += chars_[i](support[j]) * mterm[j];
        mval = acc.value();
      }
      out[i] = std::norm(g * mval);
    }
  }

  double work_per_point(double t_max) const {
    const double q = static_cast<double>(chars_.front().modulus());
    return q * (std::abs(cplx{sigma_, t_max}) / std::numbers::pi + 40.0);
  }

 private:
  std::vector<DirichletCharacter> chars_;
  double sigma_;
  double lambda_;
  std::optional<MollifierCoefficients> coeffs_;
};

// Trapezoid over [-a, a] with step halving until successive estimates agree
// for every component; returns the refined values.
template <typename Integrand>
std::vector<double> integrate_all(const Integrand& f, const SmoothingPhi& phi, double h0, double abs_tol,
                                  const MomentSettings& settings) {
  const double a = phi.half_width();
  int n = std::max(16, static_cast<int>(std::ceil(2.0 * a / h0)));
  const std::size_t k = f.size();
  if (settings.max_work > 0.0 && f.work_per_point(a) * n * 2.0 > settings.max_work)
    throw CostGuardError("moment quadrature: estimated work exceeds guard");

  std::vector<double> sum(k, 0.0), prev(k, 0.0), buf;
  auto add_points = [&](int count, double h, int offset_step, int first) {
    std::vector<std::vector<double>> vals(static_cast<std::size_t>(count));
    parallel_for(static_cast<std::size_t>(count), [&](std::size_t idx) {
      const double t = -a + (first + static_cast<int>(idx) * offset_step) * h;
      std::vector<double> v;
      f(t, v);
      const double w = phi(t);
      for (auto& x : v) x *= w;
      vals[idx] = std::move(v);
    });
    for (std::size_t c = 0; c < k; ++c) {
      CompensatedSum<double> acc;
      acc += sum[c];
      for (const auto& v : vals) acc += v[c];
      sum[c] = acc.value();
    }
  };

  // endpoints carry Phi = 0
  double h = 2.0 * a / n;
  add_points(n - 1, h, 1, 1);
  std::vector<double> est(k);
  for (std::size_t c = 0; c < k; ++c) est[c] = sum[c] * h;

  for (int halving = 0; halving < settings.max_halvings; ++halving) {
    prev = est;
    h *= 0.5;
    add_points(n, h, 2, 1);
    n *= 2;
    bool done = true;
    for (std::size_t c = 0; c < k; ++c) {
      est[c] = sum[c] * h;
      if (std::abs(est[c] - prev[c]) > abs_tol) done = false;
    }
    if (done) return est;
  }
  throw NumericalError("moment quadrature did not converge");
}

}  // namespace detail

/// Initial quadrature step 2 pi / (8 log(q~ T)).
inline double moment_initial_step(std::int64_t q, double T) {
  const double qt = static_cast<double>(q) / std::numbers::pi;
  return 2.0 * std::numbers::pi / (8.0 * std::log(std::max(qt * T, std::numbers::e)));
}

/**
 * @brief I_chi for one character with mollifier length X.
 *
 * X < 2 leaves only the m = 1 term, i.e. the unmollified moment (M = 1).
 */
inline double i_chi(const DirichletCharacter& chi, double sigma, double lambda, double X, const SmoothingPhi& phi,
                    const MomentSettings& settings = {}) {
  require(chi.is_primitive(), "i_chi: character must be primitive");
  require(phi.T > 0.0 && phi.cutoff > 0.0, "i_chi: bad smoothing weight");
  detail::ModulusIntegrand f({chi}, sigma, lambda, X);
  const double tol = settings.rel_tol * phi.integral();
  return detail::integrate_all(f, phi, moment_initial_step(chi.modulus(), phi.T), tol, settings)[0];
}

struct CharacterMoment {
  std::int64_t q;
  std::size_t index;
  double value;  ///< I_chi
};

/// I_chi for every primitive chi mod q, sharing evaluation work.
inline std::vector<CharacterMoment> modulus_moments(std::int64_t q, const LevinsonParams& params,
                                                    const SmoothingPhi& phi, ConductorScale scale,
                                                    const MomentSettings& settings = {}) {
  auto chars = primitive_characters(q);
  if (chars.empty()) return {};
  const double lc = log_conductor(q, phi.T, scale);
  require(lc > 0.0, "modulus_moments: conductor must exceed 1");
  detail::ModulusIntegrand f(chars, params.sigma(lc), params.lambda(lc), params.length(lc));
  const double tol = settings.rel_tol * phi.integral();
  const auto vals = detail::integrate_all(f, phi, moment_initial_step(q, phi.T), tol, settings);
  std::vector<CharacterMoment> out;
  for (std::size_t i = 0; i < chars.size(); ++i) out.push_back({q, chars[i].index(), vals[i]});
  return out;
}

struct MomentReport {
  double Q;
  double T;
  LevinsonParams params;
  ConductorScale scale;
  double lhs;      ///< sum_q Psi(q/Q)/phi(q) sum*_chi I_chi
  double rhs;      ///< c Phi^(1) sum_q Psi(q/Q) phi*(q)/phi(q)
  double ratio;
  double c;
  double phiHat;
  std::vector<CharacterMoment> perCharacter;
};

/// Moduli with Psi(q/Q) > 0.
inline std::vector<std::int64_t> family_moduli(double Q, const WeightPsi& psi = {}) {
  std::vector<std::int64_t> out;
  for (auto q = static_cast<std::int64_t>(std::floor(Q)); q <= static_cast<std::int64_t>(std::ceil(2.0 * Q)); ++q) {
    if (q >= 1 && psi(static_cast<double>(q) / Q) > 0.0) out.push_back(q);
  }
  return out;
}

/**
 * @brief Weighted family average of I_chi against c(theta, r, R) Phi^(1).
 *
 * `moduli` overrides the Psi-support set (e.g. a single q); weights still
 * come from Psi unless `unit_weights` is set.
 */
inline MomentReport family_average(double Q, const SmoothingPhi& phi, const LevinsonParams& params,
                                   ConductorScale scale = ConductorScale::Analytic,
                                   std::vector<std::int64_t> moduli = {}, bool unit_weights = false,
                                   const MomentSettings& settings = {}, const WeightPsi& psi = {}) {
  require(Q > 0.0, "family_average: Q must be positive");
  if (moduli.empty()) moduli = family_moduli(Q, psi);
  MomentReport rep{Q, phi.T, params, scale, 0.0, 0.0, 0.0, levinson_c(params), phi.integral(), {}};
  CompensatedSum<double> lhs, mass;
  for (auto q : moduli) {
    const double w = unit_weights ? 1.0 : psi(static_cast<double>(q) / Q);
    const auto pstar = arith::primitive_count(q);
    if (w <= 0.0 || pstar == 0) continue;
    const auto phi_q = static_cast<double>(arith::totient(q));
    const auto moms = modulus_moments(q, params, phi, scale, settings);
    CompensatedSum<double> inner;
    for (const auto& m : moms) inner += m.value;
    lhs += w / phi_q * inner.value();
    mass += w * static_cast<double>(pstar) / phi_q;
    rep.perCharacter.insert(rep.perCharacter.end(), moms.begin(), moms.end());
  }
  if (mass.value() == 0.0) throw ValidationError("family_average: empty family (no primitive characters carry weight)");
  rep.lhs = lhs.value();
  rep.rhs = rep.c * rep.phiHat * mass.value();
  rep.ratio = rep.lhs / rep.rhs;
  return rep;
}

}  // namespace levlab
