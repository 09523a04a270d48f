#pragma once

// Scalar special functions used across the library: compensated summation,
// complex log-gamma and digamma, and zeta(s) near its pole.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <type_traits>

#include "levlab/error.hpp"

namespace levlab {

using cplx = std::complex<double>;

/// Neumaier-compensated running sum. Order-dependent by construction, so
/// callers fix the summation order for reproducibility.
template <typename T>
class CompensatedSum {
 public:
  void add(T x) {
    T t = sum_ + x;
    if constexpr (std::is_same_v<T, double>) {
      comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    } else {
      comp_ += T(compensate(sum_.real(), x.real(), t.real()),
                 compensate(sum_.imag(), x.imag(), t.imag()));
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(T x) {
    add(x);
    return *this;
  }
  T value() const { return sum_ + comp_; }

 private:
  static double compensate(double s, double x, double t) {
    return std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
  }
  T sum_{};
  T comp_{};
};

namespace detail {

// B_2, B_4, ..., B_60
inline constexpr std::array<double, 30> kBernoulliEven = {
    0.16666666666666666,     -0.033333333333333333,   0.023809523809523808,
    -0.033333333333333333,   0.07575757575757576,     -0.2531135531135531,
    1.1666666666666667,      -7.0921568627450977,     54.971177944862156,
    -529.12424242424242,     6192.123188405797,       -86580.253113553117,
    1425517.1666666667,      -27298231.067816094,     601580873.9006424,
    -15116315767.092157,     429614643061.16669,      -13711655205088.332,
    488332318973593.19,      -19296579341940068.0,    8.4169304757368256e+17,
    -4.0338071854059454e+19, 2.1150748638081993e+21,  -1.2086626522296526e+23,
    7.5008667460769642e+24,  -5.0387781014810688e+26, 3.6528776484818122e+28,
    -2.8498769302450882e+30, 2.3865427499683627e+32,  -2.1399949257225335e+34};

// Stieltjes constants gamma_0 .. gamma_13
inline constexpr std::array<double, 14> kStieltjes = {
    0.57721566490153287,    -0.072815845483676728,  -0.0096903631928723193,
    0.002053834420303346,   0.0023253700654673002,  0.00079332381730106273,
    -0.00023876934543019961, -0.00052728956705775103, -0.00035212335380303952,
    -3.439477441808805e-05, 0.00020533281490906481, 0.00027018443954390353,
    0.00016727291210514019, -2.7463806603760158e-05};

constexpr double kStirlingShift = 15.0;

}  // namespace detail

/// B_{2k} for k = 1..30.
inline double bernoulli_even(int k) {
  require(k >= 1 && k <= static_cast<int>(detail::kBernoulliEven.size()),
          "bernoulli_even: index out of table range");
  return detail::kBernoulliEven[static_cast<std::size_t>(k - 1)];
}

/**
 * @brief log Gamma(z) for complex z with Re z > -50, z not a pole.
 *
 * Upward recurrence to Re z >= 15, then Stirling. The imaginary part is the
 * sum of principal logarithms of the shift factors, so it varies
 * continuously along any path that stays in Re z > 0.
 */
inline cplx log_gamma(cplx z) {
  require(z.real() > -50.0, "log_gamma: Re z too negative");
  cplx shift_log{0.0, 0.0};
  while (z.real() < detail::kStirlingShift) {
    if (std::abs(z) < 1e-300) throw NumericalError("log_gamma: pole");
    shift_log += std::log(z);
    z += 1.0;
  }
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx series{0.0, 0.0};
  cplx pw = inv;
  for (int k = 1; k <= 12; ++k) {
    series += bernoulli_even(k) / (2.0 * k * (2.0 * k - 1.0)) * pw;
    pw *= inv2;
  }
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  return (z - 0.5) * std::log(z) - z + half_log_2pi + series - shift_log;
}

/// psi(z) = Gamma'(z)/Gamma(z), same domain as log_gamma.
inline cplx digamma(cplx z) {
  require(z.real() > -50.0, "digamma: Re z too negative");
  cplx shift{0.0, 0.0};
  while (z.real() < detail::kStirlingShift) {
    if (std::abs(z) < 1e-300) throw NumericalError("digamma: pole");
    shift += 1.0 / z;
    z += 1.0;
  }
  const cplx inv2 = 1.0 / (z * z);
  cplx series{0.0, 0.0};
  cplx pw = inv2;
  for (int k = 1; k <= 12; ++k) {
    series += bernoulli_even(k) / (2.0 * k) * pw;
    pw *= inv2;
  }
  return std::log(z) - 0.5 / z - series - shift;
}

/// zeta(s), zeta'(s), zeta''(s) for real s with |s - 1| <= 1, s != 1,
/// from the Laurent expansion in Stieltjes constants.
struct ZetaJet {
  double value;
  double d1;
  double d2;
};

inline ZetaJet zeta_laurent(double s) {
  const double u = s - 1.0;
  require(u != 0.0, "zeta_laurent: pole at s = 1");
  require(std::abs(u) <= 1.0, "zeta_laurent: |s - 1| must be <= 1");
  // zeta(s) = 1/u + sum_n (-1)^n gamma_n u^n / n!
  double v = 1.0 / u;
  double d1 = -1.0 / (u * u);
  double d2 = 2.0 / (u * u * u);
  double fact = 1.0;
  for (std::size_t n = 0; n < detail::kStieltjes.size(); ++n) {
    if (n > 0) fact *= static_cast<double>(n);
    const double a = ((n % 2 == 0) ? 1.0 : -1.0) * detail::kStieltjes[n] / fact;
    const double dn = static_cast<double>(n);
    v += a * std::pow(u, dn);
    if (n >= 1) d1 += a * dn * std::pow(u, dn - 1.0);
    if (n >= 2) d2 += a * dn * (dn - 1.0) * std::pow(u, dn - 2.0);
  }
  return {v, d1, d2};
}

/// Polar part only: 1/(s-1) and its first two derivatives.
inline ZetaJet zeta_polar(double s) {
  const double u = s - 1.0;
  require(u != 0.0, "zeta_polar: pole at s = 1");
  return {1.0 / u, -1.0 / (u * u), 2.0 / (u * u * u)};
}

}  // namespace levlab
