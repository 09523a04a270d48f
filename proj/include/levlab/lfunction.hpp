#pragma once

// L(s, chi), L'(s, chi) and the completed function Lambda(s, chi).
//
// L(s, chi) = sum_{r mod q} chi(r) S_r(s),  S_r(s) = sum_{n >= 0} (nq + r)^{-s}
//
// Each S_r is evaluated by a head sum over n < N plus an Euler-Maclaurin tail.
// The tail integral w^{1-s} / (q (s-1)), w = Nq + r, is split into a part
// regular at s = 1 and the common pole 1/(q (s-1)); the pole cancels for
// non-principal characters and is added back only for the principal one.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

#include "levlab/characters.hpp"
#include "levlab/error.hpp"
#include "levlab/special.hpp"

namespace levlab {

struct LJet {
  cplx value;
  cplx derivative;
};

namespace detail {

// (e^u - 1)/u and its derivative in u
inline std::pair<cplx, cplx> expm1_ratio(cplx u) {
  if (std::abs(u) < 1e-3) {
    const cplx f = 1.0 + u * (0.5 + u * (1.0 / 6.0 + u * (1.0 / 24.0 + u / 120.0)));
    const cplx df = 0.5 + u * (1.0 / 3.0 + u * (1.0 / 8.0 + u * (1.0 / 30.0 + u / 144.0)));
    return {f, df};
  }
  const cplx e = std::exp(u);
  return {(e - 1.0) / u, (u * e - e + 1.0) / (u * u)};
}

inline cplx real_pow(double base_log, cplx s) { return std::exp(-s * base_log); }

}  // namespace detail

/**
 * @brief Regular parts of the residue-class sums S_r(s) for one modulus.
 *
 * Computing this once per (q, s) lets every character mod q be evaluated
 * by a length-q dot product, which is how the family computations share
 * work across characters.
 */
class ResidueBank {
 public:
  /// `rel_tol` is the target for the Euler-Maclaurin remainder relative to
  /// the magnitude of each residue sum.
  ResidueBank(std::int64_t q, cplx s, bool with_derivative = true, double rel_tol = 1e-16)
      : q_(q), s_(s), value_(static_cast<std::size_t>(q) + 1), deriv_(static_cast<std::size_t>(q) + 1) {
    require(q >= 1, "ResidueBank: q must be >= 1");
    require(std::isfinite(s.real()) && std::isfinite(s.imag()), "ResidueBank: s must be finite");
    std::int64_t n_head = static_cast<std::int64_t>(std::ceil(std::abs(s) / std::numbers::pi)) + 10;
    for (int attempt = 0; attempt < 4; ++attempt, n_head *= 2) {
      bool ok = true;
      for (std::int64_t r = 1; r <= q && ok; ++r) {
        if (std::gcd(r, q) != 1) continue;
        ok = evaluate_residue(r, n_head, with_derivative, rel_tol);
      }
      if (ok) return;
    }
    throw NumericalError("ResidueBank: Euler-Maclaurin tail bound not reached");
  }

  std::int64_t modulus() const { return q_; }
  cplx point() const { return s_; }
  /// Largest Euler-Maclaurin remainder bound over the residues.
  double tail_bound() const { return tail_bound_; }

  LJet evaluate(const DirichletCharacter& chi) const {
    require(chi.modulus() == q_, "ResidueBank: modulus mismatch");
    CompensatedSum<cplx> v, d;
    for (std::int64_t r = 1; r <= q_; ++r) {
      const cplx c = chi(r);
      if (c == cplx{0.0, 0.0}) continue;
      v += c * value_[static_cast<std::size_t>(r)];
      d += c * deriv_[static_cast<std::size_t>(r)];
    }
    cplx value = v.value();
    cplx deriv = d.value();
    if (chi.is_principal()) {
      const cplx u = s_ - 1.0;
      if (std::abs(u) == 0.0) throw NumericalError("L(s, chi): pole at s = 1 for principal character");
      const double phi_over_q = static_cast<double>(arith::totient(q_)) / static_cast<double>(q_);
      value += phi_over_q / u;
      deriv -= phi_over_q / (u * u);
    }
    return {value, deriv};
  }

 private:
  bool evaluate_residue(std::int64_t r, std::int64_t n_head, bool with_derivative, double rel_tol) {
    const double qd = static_cast<double>(q_);
    CompensatedSum<cplx> head, dhead;
    for (std::int64_t n = 0; n < n_head; ++n) {
      const double lw = std::log(static_cast<double>(n * q_ + r));
      const cplx t = detail::real_pow(lw, s_);
      head += t;
      if (with_derivative) dhead += -lw * t;
    }
    const double w = static_cast<double>(n_head * q_ + r);
    const double lw = std::log(w);
    const cplx ws = detail::real_pow(lw, s_);  // w^{-s}

    // regular part of w^{1-s} / (q (s-1)):  -(log w / q) (e^u - 1)/u, u = (1 - s) log w
    const cplx u = (1.0 - s_) * lw;
    const auto [ratio, dratio] = detail::expm1_ratio(u);
    cplx tail = -(lw / qd) * ratio + 0.5 * ws;
    cplx dtail = (lw * lw / qd) * dratio - 0.5 * lw * ws;

    // Euler-Maclaurin corrections B_{2k}/(2k)! P_k(s) q^{2k-1} w^{-s-2k+1}
    cplx poch = s_;  // P_1(s) = s
    cplx dpoch{1.0, 0.0};
    const double qw = qd / w;
    double qw_pow = qw;  // (q/w)^{2k-1}
    double fact = 2.0;   // (2k)!
    const double scale = std::max(std::abs(head.value() + tail), 1e-300);
    double last = 0.0;
    bool converged = false;
    const int kmax = 30;
    for (int k = 1; k <= kmax; ++k) {
      const double coef = bernoulli_even(k) / fact * qw_pow;
      const cplx term = coef * poch * ws;
      tail += term;
      if (with_derivative) dtail += coef * (dpoch - poch * lw) * ws;
      last = std::abs(term);
      if (last <= rel_tol * scale) {
        // remainder bound |s + 2k + 1| / (sigma + 2k + 1) times the next term
        const double sig = s_.real() + 2.0 * k + 1.0;
        if (sig > 0.0) {
          const cplx a = s_ + (2.0 * k - 1.0);
          const cplx b = s_ + 2.0 * k;
          const double next = std::abs(bernoulli_even(std::min(k + 1, kmax)) /
                                       (fact * (2.0 * k + 1.0) * (2.0 * k + 2.0)) * qw_pow * qw * qw *
                                       poch * a * b * ws);
          tail_bound_ = std::max(tail_bound_, std::abs(s_ + 2.0 * k + 1.0) / sig * next);
          converged = true;
          break;
        }
      }
      // advance P_k -> P_{k+1} = P_k (s + 2k - 1)(s + 2k)
      const cplx a = s_ + (2.0 * k - 1.0);
      const cplx b = s_ + 2.0 * k;
      dpoch = dpoch * a * b + poch * (a + b);
      poch *= a * b;
      qw_pow *= qw * qw;
      fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    }
    if (!converged) return false;
    value_[static_cast<std::size_t>(r)] = head.value() + tail;
    deriv_[static_cast<std::size_t>(r)] = dhead.value() + dtail;
    return true;
  }

  std::int64_t q_;
  cplx s_;
  std::vector<cplx> value_;
  std::vector<cplx> deriv_;
  double tail_bound_ = 0.0;
};

inline LJet l_jet(const DirichletCharacter& chi, cplx s) {
  return ResidueBank(chi.modulus(), s, true).evaluate(chi);
}

/// L(s, chi) by analytic continuation; NumericalError at the pole of a
/// principal character.
inline cplx l_value(const DirichletCharacter& chi, cplx s) {
  return ResidueBank(chi.modulus(), s, false).evaluate(chi).value;
}

/// L'(s, chi) by term-wise differentiated Euler-Maclaurin.
inline cplx l_derivative(const DirichletCharacter& chi, cplx s) { return l_jet(chi, s).derivative; }

/// L'(s, chi) = (1/2 pi i) \oint L(s + z) z^{-2} dz on |z| = radius, trapezoid
/// rule in the angle. Independent of the differentiated series.
inline cplx l_derivative_cauchy(const DirichletCharacter& chi, cplx s, double radius = 0.05,
                                int nodes = 48) {
  require(radius > 0.0 && nodes >= 8, "l_derivative_cauchy: bad contour");
  CompensatedSum<cplx> acc;
  for (int k = 0; k < nodes; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / nodes;
    const cplx z = std::polar(radius, phi);
    acc += l_value(chi, s + z) / z;
  }
  return acc.value() / static_cast<double>(nodes);
}

/// log of the archimedean factor (q/pi)^{s/2} Gamma((s + nu)/2).
inline cplx log_gamma_factor(const DirichletCharacter& chi, cplx s) {
  const double qt = static_cast<double>(chi.modulus()) / std::numbers::pi;
  return 0.5 * s * std::log(qt) + log_gamma(0.5 * (s + static_cast<double>(chi.parity())));
}

/// Lambda(s, chi) = (q/pi)^{s/2} Gamma((s + nu)/2) L(s, chi), chi primitive.
inline cplx completed_l(const DirichletCharacter& chi, cplx s) {
  require(chi.is_primitive(), "completed_l: character must be primitive");
  return std::exp(log_gamma_factor(chi, s)) * l_value(chi, s);
}

/// |Lambda(s, chi) - eps Lambda(1 - s, conj chi)| / max(|Lambda(s, chi)|, 1e-30).
inline double fe_residual(const DirichletCharacter& chi, cplx s) {
  const cplx eps = root_number(chi).epsilon;
  const cplx lhs = completed_l(chi, s);
  const cplx rhs = eps * completed_l(chi.conj(), 1.0 - s);
  return std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-30);
}

}  // namespace levlab
