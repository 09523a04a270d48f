#pragma once

// Mollifier coefficients c(h) = mu(h) h^{-1/2} P(1 - log h / log X), the
// reduced-ratio double sums over h, k <= X, their leading-order asymptotics,
// and the closed form of the derivative combination V(h, k).

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <variant>
#include <vector>

#include "levlab/arith.hpp"
#include "levlab/characters.hpp"
#include "levlab/constants.hpp"
#include "levlab/error.hpp"
#include "levlab/parallel.hpp"
#include "levlab/special.hpp"

namespace levlab {

struct LinearShape {};
/// P(x) = sinh(a x) / sinh(a)
struct SinhShape {
  double a;
};
using MollifierShape = std::variant<LinearShape, SinhShape>;

inline double shape_value(const MollifierShape& shape, double x) {
  if (const auto* s = std::get_if<SinhShape>(&shape)) return std::sinh(s->a * x) / std::sinh(s->a);
  return x;
}

/// Largest direct double sum accepted.
inline constexpr double kMaxDirectLength = 1e5;

class MollifierCoefficients {
 public:
  MollifierCoefficients(double X, MollifierShape shape = LinearShape{}) : X_(X), shape_(shape) {
    require(X >= 2.0, "coefficients: X must be >= 2");
    require(X <= 1e8, "coefficients: X too large for a dense table");
    if (const auto* s = std::get_if<SinhShape>(&shape)) require(s->a != 0.0, "coefficients: sinh shape needs a != 0");
    const auto n = static_cast<std::int64_t>(std::floor(X));
    const auto mu = arith::mobius_table(n);
    const double log_x = std::log(X);
    coeffs_.assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::int64_t h = 1; h <= n; ++h) {
      const auto m = mu[static_cast<std::size_t>(h)];
      if (m == 0) continue;
      const double hd = static_cast<double>(h);
      coeffs_[static_cast<std::size_t>(h)] = m / std::sqrt(hd) * shape_value(shape_, 1.0 - std::log(hd) / log_x);
      support_.push_back(static_cast<std::uint32_t>(h));
    }
  }

  double length() const { return X_; }
  const MollifierShape& shape() const { return shape_; }
  std::int64_t max_index() const { return static_cast<std::int64_t>(coeffs_.size()) - 1; }
  double operator[](std::int64_t h) const {
    return (h >= 1 && h <= max_index()) ? coeffs_[static_cast<std::size_t>(h)] : 0.0;
  }
  /// Squarefree h <= X in increasing order.
  const std::vector<std::uint32_t>& support() const { return support_; }

 private:
  double X_;
  MollifierShape shape_;
  std::vector<double> coeffs_;
  std::vector<std::uint32_t> support_;
};

inline MollifierCoefficients coefficients(double X, MollifierShape shape = LinearShape{}) {
  return MollifierCoefficients(X, shape);
}

/// M(s, chi) = sum_{m <= X} c(m) sqrt(m) chi(m) m^{-s}.
inline cplx mollifier_value(const MollifierCoefficients& coeffs, const DirichletCharacter& chi, cplx s) {
  CompensatedSum<cplx> acc;
  for (auto m : coeffs.support()) {
    const cplx c = chi(m);
    if (c == cplx{0.0, 0.0}) continue;
    const double md = static_cast<double>(m);
    acc += coeffs[m] * std::sqrt(md) * c * std::exp(-s * std::log(md));
  }
  return acc.value();
}

/// h/k in lowest terms, with the logs the kernels need.
struct ReducedPair {
  std::uint32_t h1;
  std::uint32_t k1;
  double log_h1;
  double log_k1;
  double log_l;  ///< log sqrt(h1 k1)
};

inline ReducedPair reduce_pair(std::uint32_t h, std::uint32_t k) {
  const std::uint32_t g = arith::gcd_u32(h, k);
  const std::uint32_t h1 = h / g, k1 = k / g;
  const double lh = std::log(static_cast<double>(h1));
  const double lk = std::log(static_cast<double>(k1));
  return {h1, k1, lh, lk, 0.5 * (lh + lk)};
}

/**
 * @brief sum_{h,k <= X} c(h) c(k) l^{-1} w_j(h1, k1) for K kernels at once.
 *
 * The kernel fills `w` for one reduced pair. With `symmetric` set, only
 * k >= h is visited and off-diagonal pairs are doubled; the kernels must
 * then be symmetric under h1 <-> k1. Rows are summed with compensation and
 * combined in row order, so the result does not depend on LEVLAB_THREADS.
 */
template <typename Acc, std::size_t K, typename Kernel>
std::array<Acc, K> reduced_pair_sum(const MollifierCoefficients& coeffs, Kernel&& kernel, bool symmetric) {
  if (coeffs.length() > kMaxDirectLength) throw CostGuardError("direct double sum: X exceeds 1e5");
  const auto& support = coeffs.support();
  const std::int64_t n = coeffs.max_index();
  std::vector<double> logs(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::int64_t i = 1; i <= n; ++i) logs[static_cast<std::size_t>(i)] = std::log(static_cast<double>(i));

  constexpr std::size_t kRowsPerChunk = 32;
  const std::size_t rows = support.size();
  const std::size_t chunks = (rows + kRowsPerChunk - 1) / kRowsPerChunk;
  std::vector<std::array<Acc, K>> partial(chunks);

  parallel_for(chunks, [&](std::size_t chunk) {
    std::array<CompensatedSum<Acc>, K> chunk_acc;
    std::array<Acc, K> w{};
    const std::size_t first = chunk * kRowsPerChunk;
    const std::size_t last = std::min(rows, first + kRowsPerChunk);
    for (std::size_t i = first; i < last; ++i) {
      const std::uint32_t h = support[i];
      const double ch = coeffs[h];
      const double log_h = logs[h];
      std::array<CompensatedSum<Acc>, K> row;
      for (std::size_t j = symmetric ? i : 0; j < rows; ++j) {
        const std::uint32_t k = support[j];
        const std::uint32_t g = arith::gcd_u32(h, k);
        const double lg = logs[g];
        const double lh1 = log_h - lg;
        const double lk1 = logs[k] - lg;
        const ReducedPair p{h / g, k / g, lh1, lk1, 0.5 * (lh1 + lk1)};
        kernel(p, w);
        const double weight = coeffs[k] * std::exp(-p.log_l) * ((symmetric && j != i) ? 2.0 : 1.0);
        for (std::size_t a = 0; a < K; ++a) row[a] += weight * w[a];
      }
      for (std::size_t a = 0; a < K; ++a) chunk_acc[a] += ch * row[a].value();
    }
    for (std::size_t a = 0; a < K; ++a) partial[chunk][a] = chunk_acc[a].value();
  });

  std::array<CompensatedSum<Acc>, K> total;
  for (const auto& part : partial)
    for (std::size_t a = 0; a < K; ++a) total[a] += part[a];
  std::array<Acc, K> out;
  for (std::size_t a = 0; a < K; ++a) out[a] = total[a].value();
  return out;
}

/// sum_{h,k <= X} c(h) c(k) l^{-1} h1^{-alpha} k1^{-beta}, exact double summation.
inline cplx direct_bilinear(const MollifierCoefficients& coeffs, cplx alpha, cplx beta) {
  const bool symmetric = alpha == beta;
  const auto out = reduced_pair_sum<cplx, 1>(
      coeffs,
      [&](const ReducedPair& p, std::array<cplx, 1>& w) { w[0] = std::exp(-alpha * p.log_h1 - beta * p.log_k1); },
      symmetric);
  return out[0];
}

/// 1/log X + (alpha + beta)/2 + alpha beta log X / 3.
inline cplx asymptotic_bilinear(double X, cplx alpha, cplx beta) {
  require(X > 1.0, "asymptotic_bilinear: X must exceed 1");
  const double lx = std::log(X);
  return 1.0 / lx + 0.5 * (alpha + beta) + alpha * beta * lx / 3.0;
}

struct SumComparison {
  double direct;
  double asymptotic;
  double relError;
  double X;
};

inline SumComparison compare(double direct, double asymptotic, double X) {
  return {direct, asymptotic, std::abs(direct - asymptotic) / std::abs(asymptotic), X};
}

struct VSums {
  SumComparison v0;
  SumComparison v1;
  SumComparison v2;
};

/// Asymptotic V0, V1, V2 at shift sigma for mollifier length X.
inline std::array<double, 3> v_sums_asymptotic(double X, double sigma) {
  const double lx = std::log(X);
  const double d = 0.5 - sigma;
  return {1.0 / lx - d + d * d * lx / 3.0, -0.5 + d * lx / 3.0, lx / 3.0};
}

/**
 * @brief V0, V1, V2: weights l^{1-2 sigma} times 1, log l, (log h1)(log k1),
 * by direct double summation, beside their asymptotics.
 */
inline VSums v_sums(const MollifierCoefficients& coeffs, double sigma) {
  const double e = 1.0 - 2.0 * sigma;
  const auto d = reduced_pair_sum<double, 3>(
      coeffs,
      [e](const ReducedPair& p, std::array<double, 3>& w) {
        const double base = std::exp(e * p.log_l);
        w[0] = base;
        w[1] = base * p.log_l;
        w[2] = base * p.log_h1 * p.log_k1;
      },
      true);
  const auto a = v_sums_asymptotic(coeffs.length(), sigma);
  const double X = coeffs.length();
  return {compare(d[0], a[0], X), compare(d[1], a[1], X), compare(d[2], a[2], X)};
}

enum class ZetaMode { Polar, Laurent };

inline ZetaJet zeta_jet(double s, ZetaMode mode) {
  return mode == ZetaMode::Polar ? zeta_polar(s) : zeta_laurent(s);
}

/// Everything in V(h, k) that does not depend on (h, k).
struct VClosedForm {
  double sigma;
  double r;
  double log_q;  ///< log q~
  ZetaMode mode = ZetaMode::Polar;

  VClosedForm(double sigma_, double r_, double qtilde, ZetaMode mode_ = ZetaMode::Polar)
      : sigma(sigma_), r(r_), log_q(std::log(qtilde)), mode(mode_) {
    require(sigma != 0.5, "v_closed_form: sigma = 1/2 puts zeta on its pole");
    require(qtilde > 1.0, "v_closed_form: q~ must exceed 1");
    require(r != 0.0, "v_closed_form: r must be nonzero");
    near_ = zeta_jet(2.0 * sigma, mode);
    far_ = zeta_jet(2.0 - 2.0 * sigma, mode);
    mirror_ = std::exp((1.0 - 2.0 * sigma) * log_q);
    norm_ = 1.0 / ((r * log_q) * (r * log_q));
  }

  /// V(h, k) for a reduced pair (the (log q~^r)^2 factor divided out).
  double operator()(double log_h1, double log_k1, double log_l) const {
    auto bracket = [&](double sig, double rr, const ZetaJet& z) {
      const double a = rr * log_q - log_h1;
      const double b = rr * log_q - log_k1;
      return std::exp((1.0 - 2.0 * sig) * log_l) * (a * b * z.value + (a + b) * z.d1 + z.d2);
    };
    return norm_ * (bracket(sigma, r, near_) + mirror_ * bracket(1.0 - sigma, 1.0 - r, far_));
  }

 private:
  ZetaJet near_{};
  ZetaJet far_{};
  double mirror_ = 1.0;
  double norm_ = 1.0;
};

inline double v_closed_form(std::uint32_t h, std::uint32_t k, double sigma, double r, double qtilde,
                            ZetaMode mode = ZetaMode::Polar) {
  require(h >= 1 && k >= 1, "v_closed_form: h, k must be positive");
  const auto p = reduce_pair(h, k);
  return VClosedForm(sigma, r, qtilde, mode)(p.log_h1, p.log_k1, p.log_l);
}

struct DiagonalReport {
  double direct;     ///< sum c(h) c(k) l^{-1} V(h, k)
  double predicted;  ///< c(theta, r, R)
  double ratio;
  double X;
  double qtilde;
  double sigma;
};

/**
 * @brief The double sum of c(h) c(k) l^{-1} V(h, k) against c(theta, r, R).
 *
 * X = q~^theta and sigma = 1/2 - R/log q~; zeta near 1 by its polar part.
 */
inline DiagonalReport diagonal_main_term(double qtilde, const LevinsonParams& params,
                                         ZetaMode mode = ZetaMode::Polar) {
  require(qtilde > 1.0, "diagonal_main_term: q~ must exceed 1");
  const double log_q = std::log(qtilde);
  const double X = params.length(log_q);
  if (X > kMaxDirectLength) throw CostGuardError("diagonal_main_term: X exceeds 1e5");
  const double sigma = params.sigma(log_q);
  const MollifierCoefficients coeffs(X);
  const VClosedForm v(sigma, params.r, qtilde, mode);
  const auto out = reduced_pair_sum<double, 1>(
      coeffs,
      [&v](const ReducedPair& p, std::array<double, 1>& w) { w[0] = v(p.log_h1, p.log_k1, p.log_l); }, true);
  const double predicted = levinson_c(params);
  return {out[0], predicted, out[0] / predicted, X, qtilde, sigma};
}

struct SurveyPoint {
  double sigma = 0.0;
  VSums v{};
};

/// Mollifier sums at one X, all from a single pass over the pairs.
template <std::size_t N>
struct MollifierSurvey {
  double X = 0.0;
  double qtilde = 0.0;
  SumComparison bilinear{};  ///< alpha = beta = 0 against 1/log X
  std::array<SurveyPoint, N> points{};
  DiagonalReport diagonal{};
};

/**
 * @brief Bilinear sum, V-sums at each of `sigmas`, and the diagonal main
 * term at (diag_sigma, r, q~), for mollifier length X.
 *
 * The diagonal is compared with c(theta, r, R) where theta = log X / log q~
 * and R = (1/2 - diag_sigma) log q~. X > 1e5 is refused.
 */
template <std::size_t N>
MollifierSurvey<N> survey(double X, double qtilde, const std::array<double, N>& sigmas, double r, double diag_sigma,
                          ZetaMode mode = ZetaMode::Polar) {
  require(X >= 2.0, "survey: X must be >= 2");
  if (X > kMaxDirectLength) throw CostGuardError("survey: X exceeds 1e5");
  constexpr std::size_t K = 2 + 3 * N;
  const VClosedForm v(diag_sigma, r, qtilde, mode);
  std::array<double, N> expo{};
  for (std::size_t i = 0; i < N; ++i) expo[i] = 1.0 - 2.0 * sigmas[i];
  const MollifierCoefficients coeffs(X);
  const auto d = reduced_pair_sum<double, K>(
      coeffs,
      [&](const ReducedPair& p, std::array<double, K>& w) {
        w[0] = 1.0;
        const double lhk = p.log_h1 * p.log_k1;
        for (std::size_t i = 0; i < N; ++i) {
          const double base = std::exp(expo[i] * p.log_l);
          w[1 + 3 * i] = base;
          w[2 + 3 * i] = base * p.log_l;
          w[3 + 3 * i] = base * lhk;
        }
        w[K - 1] = v(p.log_h1, p.log_k1, p.log_l);
      },
      true);

  MollifierSurvey<N> out;
  out.X = X;
  out.qtilde = qtilde;
  out.bilinear = compare(d[0], 1.0 / std::log(X), X);
  for (std::size_t i = 0; i < N; ++i) {
    const auto a = v_sums_asymptotic(X, sigmas[i]);
    out.points[i] = {sigmas[i],
                     {compare(d[1 + 3 * i], a[0], X), compare(d[2 + 3 * i], a[1], X), compare(d[3 + 3 * i], a[2], X)}};
  }
  const double log_q = std::log(qtilde);
  const double predicted = levinson_c({std::log(X) / log_q, r, (0.5 - diag_sigma) * log_q});
  out.diagonal = {d[K - 1], predicted, d[K - 1] / predicted, X, qtilde, diag_sigma};
  return out;
}

}  // namespace levlab
