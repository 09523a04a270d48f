#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "levlab/arith.hpp"
#include "levlab/special.hpp"
#include "oracles.hpp"

using namespace levlab;

TEST(LogGamma, RealAxisMatchesStd) {
  for (double x = 0.1; x < 60.0; x += 0.37) EXPECT_NEAR(log_gamma({x, 0.0}).real(), std::lgamma(x), 1e-12 * std::max(1.0, std::abs(std::lgamma(x))));
}

TEST(LogGamma, RecurrenceOffAxis) {
  // log Gamma(z + 1) = log Gamma(z) + log z on the continuous branch
  for (double y : {0.5, 3.0, 40.0, 250.0})
    for (double x : {0.25, 1.5, 7.0}) {
      const cplx z{x, y};
      const cplx diff = log_gamma(z + 1.0) - log_gamma(z) - std::log(z);
      EXPECT_NEAR(std::abs(diff), 0.0, 1e-11) << z;
    }
}

TEST(Digamma, MatchesDerivativeOfLogGamma) {
  for (cplx z : {cplx{0.3, 0.0}, cplx{2.5, 7.0}, cplx{0.25, 50.0}, cplx{-2.5, 1.0}}) {
    const double h = 1e-5;
    const cplx fd = (log_gamma(z + h) - log_gamma(z - h)) / (2.0 * h);
    EXPECT_NEAR(std::abs(digamma(z) - fd), 0.0, 1e-8) << z;
  }
  EXPECT_NEAR(digamma({1.0, 0.0}).real(), -0.57721566490153286, 1e-14);
}

TEST(Zeta, LaurentAndPolarNearOne) {
  const auto two = zeta_laurent(2.0);
  EXPECT_NEAR(two.value, std::numbers::pi * std::numbers::pi / 6.0, 1e-12);
  const auto polar = zeta_polar(1.01);
  EXPECT_NEAR(polar.value, 100.0, 1e-12);
  EXPECT_NEAR(polar.d1, -1e4, 1e-8);
  EXPECT_NEAR(polar.d2, 2e6, 1e-4);
  // true zeta minus its polar part tends to Euler's constant
  const double s = 1.0 + 1e-6;
  EXPECT_NEAR(zeta_laurent(s).value - 1.0 / (s - 1.0), 0.5772156649, 1e-6);
  EXPECT_NEAR(zeta_laurent(0.6).value, oracle::hurwitz_zeta(0.6, 1.0).real(), 1e-12);
  EXPECT_THROW(zeta_laurent(1.0), ValidationError);
  EXPECT_THROW(zeta_laurent(2.5), ValidationError);
}

TEST(CompensatedSum, RecoversCancellation) {
  CompensatedSum<double> s;
  s += 1e16;
  for (int i = 0; i < 1000; ++i) s += 1.0;
  s += -1e16;
  EXPECT_EQ(s.value(), 1000.0);
  CompensatedSum<cplx> z;
  z += cplx{1e16, -1e16};
  z += cplx{1.0, 1.0};
  z += cplx{-1e16, 1e16};
  EXPECT_EQ(z.value(), cplx(1.0, 1.0));
}

TEST(Arith, MobiusAndTotientAgainstBruteForce) {
  const auto table = arith::mobius_table(2000);
  for (std::int64_t n = 1; n <= 2000; ++n) {
    EXPECT_EQ(arith::mobius(n), oracle::mobius_brute(n)) << n;
    EXPECT_EQ(table[static_cast<std::size_t>(n)], oracle::mobius_brute(n)) << n;
  }
  for (std::int64_t n = 1; n <= 500; ++n) EXPECT_EQ(arith::totient(n), oracle::totient_brute(n)) << n;
}

TEST(Arith, BinaryGcd) {
  for (std::uint32_t a = 1; a < 300; a += 7)
    for (std::uint32_t b = 1; b < 300; b += 5) EXPECT_EQ(arith::gcd_u32(a, b), std::gcd(a, b));
}
