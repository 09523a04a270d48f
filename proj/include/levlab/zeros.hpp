#pragma once

// Critical-line zeros of L(s, chi): the real rotated form on Re s = 1/2,
// sign-change location, and zero counting by the argument principle.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "levlab/characters.hpp"
#include "levlab/error.hpp"
#include "levlab/lfunction.hpp"

namespace levlab {

struct RotatedValue {
  double value;     ///< the real rotated value
  double residual;  ///< |imaginary part| before projection
  double modulus;   ///< |L(1/2 + it)|
};

/**
 * @brief e^{i theta(t)} L(1/2 + it, chi), real for primitive chi.
 *
 * theta(t) = arg[(q/pi)^{s/2} Gamma((s + nu)/2)] - arg(eps)/2, so the result
 * equals eps^{-1/2} Lambda(1/2 + it) divided by the modulus of the gamma
 * factor: same sign, no exponential decay in t. The phase uses the
 * continuous Stirling branch of log Gamma, valid since Re((s + nu)/2) > 0.
 */
class RotatedForm {
 public:
  explicit RotatedForm(const DirichletCharacter& chi)
      : chi_(chi), half_arg_eps_(0.5 * std::arg(root_number(chi).epsilon)) {}

  RotatedValue operator()(double t) const {
    const cplx s{0.5, t};
    const double phase = log_gamma_factor(chi_, s).imag() - half_arg_eps_;
    const cplx l = l_value(chi_, s);
    const cplx z = std::polar(1.0, phase) * l;
    return {z.real(), std::abs(z.imag()), std::abs(l)};
  }

  const DirichletCharacter& character() const { return chi_; }

 private:
  DirichletCharacter chi_;
  double half_arg_eps_;
};

inline RotatedValue rotated_real_form(const DirichletCharacter& chi, double t) {
  require(chi.is_primitive(), "rotated_real_form: character must be primitive");
  return RotatedForm(chi)(t);
}

/// Default scan step: a quarter of pi / log(q~ T).
inline double default_zero_step(const DirichletCharacter& chi, double T) {
  const double qt = static_cast<double>(chi.modulus()) / std::numbers::pi;
  return 0.25 * std::numbers::pi / std::log(std::max(qt * T, std::numbers::e));
}

namespace detail {

// Winding of Lambda along a segment, tracked through the ratio of successive
// values so no branch of log is ever needed.
class ArgumentTracker {
 public:
  explicit ArgumentTracker(const DirichletCharacter& chi) : chi_(chi) {}

  struct Sample {
    cplx s;
    cplx log_factor;
    cplx l;
  };

  Sample sample(cplx s) const {
    Sample out{s, log_gamma_factor(chi_, s), l_value(chi_, s)};
    if (std::abs(out.l) < 1e-10) throw NumericalError("argument count: contour passes near a zero");
    return out;
  }

  double increment(const Sample& a, const Sample& b) const {
    const cplx ratio = std::exp(b.log_factor - a.log_factor) * (b.l / a.l);
    return std::arg(ratio);
  }

  double segment(const Sample& a, const Sample& b, int depth) const {
    const Sample m = sample(0.5 * (a.s + b.s));
    const double whole = increment(a, b);
    const double left = increment(a, m);
    const double right = increment(m, b);
    const bool small = std::abs(left) < 0.5 && std::abs(right) < 0.5;
    if (small && std::abs(left + right - whole) < 1e-9) return left + right;
    if (depth > 40) throw NumericalError("argument count: subdivision limit reached");
    return segment(a, m, depth + 1) + segment(m, b, depth + 1);
  }

 private:
  const DirichletCharacter& chi_;
};

}  // namespace detail

/**
 * @brief N(T, chi): zeros of L(s, chi) with 0 < Re s < 1, |Im s| <= T.
 *
 * Winding number of Lambda around [-delta, 1 + delta] x [-T, T]. For q = 1
 * the two poles of Lambda at s = 0, 1 are added back. When the contour
 * passes within reach of a zero, T is nudged and the count retried.
 */
inline long count_zeros_argument(const DirichletCharacter& chi, double T, double delta = 0.5) {
  require(chi.is_primitive(), "count_zeros_argument: character must be primitive");
  require(T > 0.0, "count_zeros_argument: T must be positive");
  detail::ArgumentTracker tracker(chi);
  const double panel = default_zero_step(chi, T);

  for (int attempt = 0; attempt < 8; ++attempt) {
    const double height = T + 1e-5 * attempt * (attempt % 2 == 0 ? 1.0 : -1.0);
    try {
      const cplx corners[4] = {{-delta, -height}, {1.0 + delta, -height}, {1.0 + delta, height}, {-delta, height}};
      double total = 0.0;
      for (int side = 0; side < 4; ++side) {
        const cplx a = corners[side];
        const cplx b = corners[(side + 1) % 4];
        const int pieces = std::max(4, static_cast<int>(std::ceil(std::abs(b - a) / panel)));
        auto prev = tracker.sample(a);
        for (int k = 1; k <= pieces; ++k) {
          const auto next = tracker.sample(a + (b - a) * (static_cast<double>(k) / pieces));
          total += tracker.segment(prev, next, 0);
          prev = next;
        }
      }
      const double winding = total / (2.0 * std::numbers::pi);
      const double rounded = std::round(winding);
      if (std::abs(winding - rounded) > 0.25)
        throw NumericalError("argument count: winding not near an integer");
      return static_cast<long>(rounded) + (chi.modulus() == 1 ? 2 : 0);
    } catch (const NumericalError&) {
      if (attempt == 7) throw;
    }
  }
  return -1;
}

struct CriticalZero {
  double gamma;
  bool simple;
};

struct CriticalZeroList {
  std::vector<CriticalZero> zeros;  ///< strictly increasing ordinates in [-T, T]
  long argument_count = 0;          ///< count_zeros_argument over the same window
  long suspected_missed = 0;        ///< argument_count - zeros.size() after refinement
  double step = 0.0;                ///< final scan step
  double max_residual = 0.0;        ///< worst relative imaginary residual on the grid

  long simple_count() const {
    return static_cast<long>(std::count_if(zeros.begin(), zeros.end(), [](auto& z) { return z.simple; }));
  }
};

/**
 * @brief Locate sign changes of the rotated form on [-T, T].
 *
 * Every bracket is bisected to `tol`. A zero is flagged simple when the
 * centred slope across it, times the scan step, exceeds 1e-6 of the local
 * scale. If the number found disagrees with the argument count, the step is
 * halved (up to four times); any remaining gap is reported in
 * suspected_missed rather than hidden.
 */
inline CriticalZeroList find_critical_zeros(const DirichletCharacter& chi, double T, double step = 0.0,
                                            double tol = 1e-9) {
  require(chi.is_primitive(), "find_critical_zeros: character must be primitive");
  require(T > 0.0, "find_critical_zeros: T must be positive");
  const RotatedForm z(chi);
  if (step <= 0.0) step = default_zero_step(chi, T);
  require(step < 2.0 * T, "find_critical_zeros: step too large");

  CriticalZeroList out;
  out.argument_count = count_zeros_argument(chi, T);

  for (int refine = 0; refine < 5; ++refine, step *= 0.5) {
    out.zeros.clear();
    out.max_residual = 0.0;
    const int n = static_cast<int>(std::ceil(2.0 * T / step));
    const double h = 2.0 * T / n;
    std::vector<double> ts(static_cast<std::size_t>(n) + 1);
    std::vector<RotatedValue> vals(ts.size());
    for (int i = 0; i <= n; ++i) {
      ts[static_cast<std::size_t>(i)] = i == n ? T : -T + i * h;
      vals[static_cast<std::size_t>(i)] = z(ts[static_cast<std::size_t>(i)]);
      const auto& v = vals[static_cast<std::size_t>(i)];
      if (v.modulus > 1e-12) out.max_residual = std::max(out.max_residual, v.residual / v.modulus);
      if (v.residual > 1e-6 * std::max(v.modulus, 1e-3))
        throw NumericalError("rotated form: phase continuity lost (imaginary residual too large)");
    }
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
      double fa = vals[i].value;
      double fb = vals[i + 1].value;
      if (fa == 0.0) fa = z(ts[i] - 1e-12).value;
      if ((fa < 0.0) == (fb < 0.0) || fb == 0.0) continue;
      double a = ts[i], b = ts[i + 1];
      while (b - a > tol) {
        const double m = 0.5 * (a + b);
        const double fm = z(m).value;
        if ((fm < 0.0) == (fa < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      const double gamma = 0.5 * (a + b);
      const double dh = std::min(1e-4, 0.25 * h);
      const double slope = (z(gamma + dh).value - z(gamma - dh).value) / (2.0 * dh);
      const double scale = std::max(std::abs(vals[i].value), std::abs(vals[i + 1].value));
      out.zeros.push_back({gamma, std::abs(slope) * h > 1e-6 * scale});
    }
    out.step = h;
    out.suspected_missed = out.argument_count - static_cast<long>(out.zeros.size());
    if (out.suspected_missed == 0) break;
  }
  return out;
}

}  // namespace levlab
