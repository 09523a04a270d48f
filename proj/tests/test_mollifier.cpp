#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numeric>

#include "levlab/mollifier.hpp"
#include "oracles.hpp"

using namespace levlab;

namespace {

// sum over all h, k <= X (both orders) with gcd reduction done from scratch
cplx bilinear_brute(double X, cplx alpha, cplx beta) {
  const auto n = static_cast<std::int64_t>(X);
  cplx acc = 0.0;
  for (std::int64_t h = 1; h <= n; ++h) {
    const int mh = oracle::mobius_brute(h);
    if (!mh) continue;
    const double ch = mh / std::sqrt(double(h)) * (1.0 - std::log(double(h)) / std::log(X));
    for (std::int64_t k = 1; k <= n; ++k) {
      const int mk = oracle::mobius_brute(k);
      if (!mk) continue;
      const double ck = mk / std::sqrt(double(k)) * (1.0 - std::log(double(k)) / std::log(X));
      const auto g = std::gcd(h, k);
      const double h1 = double(h / g), k1 = double(k / g);
      acc += ch * ck / std::sqrt(h1 * k1) * std::pow(h1, -alpha) * std::pow(k1, -beta);
    }
  }
  return acc;
}

}  // namespace

TEST(Coefficients, SmallCases) {
  const MollifierCoefficients c(100.0);
  EXPECT_EQ(c[1], 1.0);
  EXPECT_EQ(c[4], 0.0);
  EXPECT_NEAR(c[2], -(1.0 / std::sqrt(2.0)) * (1.0 - std::log(2.0) / std::log(100.0)), 1e-16);
  EXPECT_NEAR(c[30], -(1.0 / std::sqrt(30.0)) * (1.0 - std::log(30.0) / std::log(100.0)), 1e-16);
  EXPECT_EQ(c[101], 0.0);
  EXPECT_EQ(c.support().size(), 61u);  // squarefree numbers up to 100
  EXPECT_THROW(MollifierCoefficients(1.5), ValidationError);
  const MollifierCoefficients s(100.0, SinhShape{2.0});
  EXPECT_NEAR(s[2], -(1.0 / std::sqrt(2.0)) * std::sinh(2.0 * (1.0 - std::log(2.0) / std::log(100.0))) / std::sinh(2.0),
              1e-15);
}

TEST(MollifierValue, FiniteSums) {
  const auto one = enumerate_characters(1)[0];
  cplx expected = 0.0;
  for (int m = 1; m <= 10; ++m)
    expected += oracle::mobius_brute(m) / std::sqrt(double(m)) * (1.0 - std::log(double(m)) / std::log(10.0));
  EXPECT_NEAR(std::abs(mollifier_value(MollifierCoefficients(10.0), one, 0.5) - expected), 0.0, 1e-15);
  // at X = 2 the m = 2 weight P(0) vanishes
  const auto chi = enumerate_characters(5)[1];
  EXPECT_NEAR(std::abs(mollifier_value(MollifierCoefficients(2.0), chi, {0.5, 3.0}) - 1.0), 0.0, 1e-15);
}

TEST(MollifierValue, SquareMatchesOpenedDoubleSum) {
  const auto chi = oracle::find_character(7, {3}, {std::polar(1.0, 2.0 * std::numbers::pi / 6.0)});
  const MollifierCoefficients c(40.0);
  for (double t : {0.0, 3.3, 25.0}) {
    const double direct = std::norm(mollifier_value(c, chi, {0.5, t}));
    cplx opened = 0.0;
    for (auto h : c.support())
      for (auto k : c.support())
        opened += c[h] * c[k] * chi(h) * std::conj(chi(k)) * std::pow(double(k) / double(h), cplx{0.0, t});
    EXPECT_NEAR(direct, opened.real(), 1e-12);
    EXPECT_NEAR(opened.imag(), 0.0, 1e-12);
  }
}

TEST(Bilinear, BruteForceOracle) {
  for (double X : {3.0, 60.0, 250.0})
    for (auto [a, b] : {std::pair<cplx, cplx>{0.0, 0.0}, {0.2, 0.2}, {cplx{0.1, 0.3}, cplx{-0.05, 0.2}}}) {
      const cplx ref = bilinear_brute(X, a, b);
      EXPECT_NEAR(std::abs(direct_bilinear(MollifierCoefficients(X), a, b) - ref), 0.0, 1e-12 * std::abs(ref))
          << X << a << b;
    }
}

TEST(Bilinear, AsymptoticClosedForm) {
  EXPECT_DOUBLE_EQ(asymptotic_bilinear(1000.0, 0.0, 0.0).real(), 1.0 / std::log(1000.0));
  // V0 is the bilinear form at alpha = beta = sigma - 1/2
  const double X = 5000.0, sigma = 0.41;
  EXPECT_NEAR(asymptotic_bilinear(X, sigma - 0.5, sigma - 0.5).real(), v_sums_asymptotic(X, sigma)[0], 1e-15);
  // V2 is its mixed second derivative
  const double h = 1e-4;
  const double mixed = (asymptotic_bilinear(X, h, h) - asymptotic_bilinear(X, h, -h) - asymptotic_bilinear(X, -h, h) +
                        asymptotic_bilinear(X, -h, -h))
                           .real() /
                       (4 * h * h);
  EXPECT_NEAR(mixed, v_sums_asymptotic(X, sigma)[2], 1e-6);
}

TEST(Bilinear, ConvergesToAsymptotic) {
  const auto e3 = compare(direct_bilinear(MollifierCoefficients(1e3), 0.0, 0.0).real(), 1.0 / std::log(1e3), 1e3);
  const auto e4 = compare(direct_bilinear(MollifierCoefficients(1e4), 0.0, 0.0).real(), 1.0 / std::log(1e4), 1e4);
  EXPECT_LT(e3.relError, 0.1);
  EXPECT_LT(e4.relError, e3.relError);
  auto shifted = [](double X) {
    const double a = 0.3 / std::log(X);
    return compare(direct_bilinear(MollifierCoefficients(X), a, a).real(), asymptotic_bilinear(X, a, a).real(), X);
  };
  EXPECT_LT(shifted(1e4).relError, shifted(1e3).relError);
}

TEST(Bilinear, AlphaDerivativeTrend) {
  // d/d alpha of the asymptotic form at 0 is 1/2
  auto err = [](double X) {
    const MollifierCoefficients c(X);
    const double h = 1e-4;
    const double d = (direct_bilinear(c, h, 0.0) - direct_bilinear(c, -h, 0.0)).real() / (2 * h);
    return std::abs(d - 0.5);
  };
  EXPECT_LT(err(1e4), err(1e3));
}

TEST(VSums, AsymptoticSpecialCases) {
  const auto at_half = v_sums_asymptotic(1e4, 0.5);
  EXPECT_DOUBLE_EQ(at_half[1], -0.5);
  const double theta = 0.6, log_q = 20.0;
  EXPECT_NEAR(v_sums_asymptotic(std::exp(theta * log_q), 0.4)[2], theta / 3.0 * log_q, 1e-12);
}

TEST(VSums, RelativeErrorsDecrease) {
  for (double R : {0.5, 0.83, 1.2}) {
    std::array<double, 3> prev{1e9, 1e9, 1e9};
    for (double X : {1e3, 3e3, 1e4}) {
      const auto v = v_sums(MollifierCoefficients(X), 0.5 - R / std::log(X));
      const std::array<double, 3> e{v.v0.relError, v.v1.relError, v.v2.relError};
      for (int j = 0; j < 3; ++j) EXPECT_LT(e[j], prev[j]) << "R=" << R << " X=" << X << " V" << j;
      prev = e;
    }
  }
}

TEST(ClosedForm, DiagonalPairCollapses) {
  const double sigma = 0.45, r = 1.1, qt = 1e4;
  const double L = r * std::log(qt), Lm = (1.0 - r) * std::log(qt);
  const auto near = zeta_polar(2 * sigma), far = zeta_polar(2 - 2 * sigma);
  const double expected = (L * L * near.value + 2 * L * near.d1 + near.d2 +
                           std::pow(qt, 1 - 2 * sigma) * (Lm * Lm * far.value + 2 * Lm * far.d1 + far.d2)) /
                          (L * L);
  EXPECT_NEAR(v_closed_form(7, 7, sigma, r, qt), expected, 1e-12 * std::abs(expected));
  EXPECT_DOUBLE_EQ(v_closed_form(6, 6, sigma, r, qt), v_closed_form(1, 1, sigma, r, qt));
  EXPECT_DOUBLE_EQ(v_closed_form(6, 35, sigma, r, qt), v_closed_form(35, 6, sigma, r, qt));
  EXPECT_THROW(v_closed_form(1, 1, 0.5, r, qt), ValidationError);
}

TEST(ClosedForm, PolarApproximationGap) {
  const double qt = 1e6, R = 0.83, r = 10.0 / 9.0;
  const double sigma = 0.5 - R / std::log(qt);
  for (auto [h, k] : {std::pair<std::uint32_t, std::uint32_t>{1, 1}, {2, 3}, {30, 7}}) {
    const double polar = v_closed_form(h, k, sigma, r, qt, ZetaMode::Polar);
    const double exact = v_closed_form(h, k, sigma, r, qt, ZetaMode::Laurent);
    const double rel = std::abs(polar - exact) / std::abs(exact);
    EXPECT_GT(rel, 0.0);
    EXPECT_LT(rel, 3.0 / std::log(qt)) << h << ' ' << k;
  }
}

TEST(Diagonal, TinyLengthIsSingleTerm) {
  const LevinsonParams p{1.0, 10.0 / 9.0, 0.83};
  const auto rep = diagonal_main_term(2.0, p);
  EXPECT_EQ(rep.X, 2.0);
  EXPECT_NEAR(rep.direct, v_closed_form(1, 1, rep.sigma, p.r, 2.0), 1e-15);
  EXPECT_EQ(rep.predicted, levinson_c(p));
}

TEST(Diagonal, ApproachesConstant) {
  const LevinsonParams p{1.0, 10.0 / 9.0, 0.83};
  const auto a = diagonal_main_term(1e3, p);
  const auto b = diagonal_main_term(1e4, p);
  EXPECT_LT(std::abs(b.ratio - 1.0), std::abs(a.ratio - 1.0));
  const LevinsonParams half{0.5, 1.0, 0.83};
  const auto c = diagonal_main_term(1e6, half);
  const auto d = diagonal_main_term(1e8, half);
  EXPECT_NEAR(c.predicted, levinson_c_r1(0.5, 0.83), 1e-12 * c.predicted);
  EXPECT_LT(std::abs(d.ratio - 1.0), std::abs(c.ratio - 1.0));
}

TEST(Survey, MatchesSeparateSums) {
  const double X = 700.0, R = 0.83, r = 10.0 / 9.0;
  const double sigma = 0.5 - R / std::log(X);
  const auto s = survey<1>(X, X, {sigma}, r, sigma);
  const MollifierCoefficients c(X);
  const auto v = v_sums(c, sigma);
  EXPECT_DOUBLE_EQ(s.points[0].v.v0.direct, v.v0.direct);
  EXPECT_DOUBLE_EQ(s.points[0].v.v1.direct, v.v1.direct);
  EXPECT_DOUBLE_EQ(s.points[0].v.v2.direct, v.v2.direct);
  EXPECT_DOUBLE_EQ(s.bilinear.direct, direct_bilinear(c, 0.0, 0.0).real());
  const auto d = diagonal_main_term(X, {1.0, r, R});
  EXPECT_DOUBLE_EQ(s.diagonal.direct, d.direct);
  EXPECT_NEAR(s.diagonal.predicted, d.predicted, 1e-13);
}

TEST(Survey, IndependentOfThreadCount) {
  const double X = 3000.0, sigma = 0.4;
  setenv("LEVLAB_THREADS", "1", 1);
  const auto one = survey<1>(X, X, {sigma}, 1.1, sigma);
  setenv("LEVLAB_THREADS", "3", 1);
  const auto three = survey<1>(X, X, {sigma}, 1.1, sigma);
  unsetenv("LEVLAB_THREADS");
  EXPECT_EQ(one.bilinear.direct, three.bilinear.direct);
  EXPECT_EQ(one.points[0].v.v2.direct, three.points[0].v.v2.direct);
  EXPECT_EQ(one.diagonal.direct, three.diagonal.direct);
}

TEST(Survey, CostGuard) {
  EXPECT_THROW(direct_bilinear(MollifierCoefficients(2e5), 0.0, 0.0), CostGuardError);
  EXPECT_THROW(survey<1>(2e5, 2e5, {0.4}, 1.0, 0.4), CostGuardError);
}
