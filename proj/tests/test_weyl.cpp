#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pdem/errors.hpp"
#include "pdem/massmodel.hpp"
#include "pdem/weyl.hpp"

namespace {

using namespace pdem;
using std::numbers::pi;

TEST(WeylSymbol, PositionSymbolsAreReal) {
  const double mu = MassProfile(0.7).mu_at(-0.4);
  EXPECT_EQ(weyl_symbol(Observable::Mu, -0.4, 3.0, 0.7), std::complex<double>(mu, 0.0));
  EXPECT_EQ(weyl_symbol(Observable::Mu2, -0.4, -1.0, 0.7), std::complex<double>(mu * mu, 0.0));
}

TEST(WeylSymbol, MomentumSymbol) {
  // x = 0, alpha = 1: mu = 2.
  const auto at_zero = weyl_symbol(Observable::Pi, 0.0, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(at_zero.real(), 0.0);
  EXPECT_DOUBLE_EQ(at_zero.imag(), 0.25);
  // alpha = 2: mu(0) = 1.
  const auto v = weyl_symbol(Observable::Pi, 0.0, 1.5, 2.0);
  EXPECT_DOUBLE_EQ(v.real(), 1.5);
  EXPECT_DOUBLE_EQ(v.imag(), 0.5);
}

TEST(WeylSymbol, SquareIdentityOnRandomPoints) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ux(-4.0, 4.0), up(-10.0, 10.0), ua(0.2, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = ux(rng), p = up(rng), alpha = ua(rng);
    const double mu = MassProfile(alpha).mu_at(x);
    const auto w1 = weyl_symbol(Observable::Pi, x, p, alpha);
    const auto w2 = weyl_symbol(Observable::Pi2, x, p, alpha);
    const auto gap = w2 - w1 * w1 - 0.25 / (mu * mu);
    EXPECT_LE(std::abs(gap), 1e-14 * std::abs(w2) + 1e-14 * 0.25 / (mu * mu));
  }
}

TEST(PoissonBracket, CanonicalPair) {
  EXPECT_LT(poisson_bracket_gap(0.0, 1.0, 1.0, 1e-5), 1e-9);
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> ux(-3.0, 3.0), up(-5.0, 5.0), ua(0.3, 2.5);
  for (int i = 0; i < 100; ++i) EXPECT_LT(poisson_bracket_gap(ux(rng), up(rng), ua(rng), 1e-5), 1e-8);
  // The identity is exact; halving h does not expose a truncation term.
  const double g1 = poisson_bracket_gap(0.3, 2.0, 1.2, 1e-4);
  const double g2 = poisson_bracket_gap(0.3, 2.0, 1.2, 5e-5);
  EXPECT_LT(std::max(g1, g2), 1e-8);
}

TEST(MasterIntegral, ZeroMomentClosedForm) {
  for (double a : {0.5, 1.0, 2.25})
    for (double b : {0.5, 1.5}) {
      const auto r = b1_rhs_closed(0, a, b);
      EXPECT_NEAR(r.real(), pi * std::pow(2.0, 1 - a - b) * std::tgamma(a + b), 1e-12 * std::abs(r.real()));
      EXPECT_EQ(r.imag(), 0.0);
    }
}

TEST(MasterIntegral, ReflectionFormulaCase) {
  // |Gamma(1/2 + ix)|^2 = pi / cosh(pi x) integrates to pi.
  EXPECT_NEAR(b1_lhs_numeric(0, 0.5, 0.5).real(), pi, 1e-11);
  EXPECT_NEAR(b1_lhs_numeric(0, 0.5, 0.5).imag(), 0.0, 1e-12);
}

TEST(MasterIntegral, SymmetricFirstMomentIsImaginary) {
  for (double a : {0.5, 1.0, 1.75}) EXPECT_NEAR(b1_lhs_numeric(1, a, a).real(), 0.0, 1e-12);
}

TEST(MasterIntegral, BothSidesAgree) {
  for (int m = 0; m <= 2; ++m)
    for (double a : {0.5, 1.0, 1.5, 2.25})
      for (double b : {0.5, 1.0, 1.5, 2.25}) {
        const auto lhs = b1_lhs_numeric(m, a, b);
        const auto rhs = b1_rhs_closed(m, a, b);
        EXPECT_LE(std::abs(lhs - rhs), 1e-8 * std::max(std::abs(rhs), 1.0)) << "m=" << m << " a=" << a << " b=" << b;
      }
  EXPECT_NEAR(std::abs(b1_lhs_numeric(1, 1.0, 1.0) - b1_rhs_closed(1, 1.0, 1.0)), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(b1_lhs_numeric(2, 1.5, 0.5) - b1_rhs_closed(2, 1.5, 0.5)), 0.0, 1e-8);
}

TEST(MasterIntegral, ExtendedPrecisionMatchesDouble) {
  const auto a = b1_rhs_closed(2, 1.5, 2.25);
  const auto b = b1_rhs_closed(2, 1.5, 2.25, PrecisionConfig::digits(40));
  EXPECT_NEAR(std::abs(a - b), 0.0, 1e-12 * std::abs(b));
}

TEST(MasterIntegral, RejectsBadParameters) {
  EXPECT_THROW(b1_rhs_closed(-1, 1.0, 1.0), DomainError);
  EXPECT_THROW(b1_rhs_closed(1, 0.0, 1.0), DomainError);
  EXPECT_THROW(b1_lhs_numeric(0, 1.0, -0.5), DomainError);
}

}  // namespace
