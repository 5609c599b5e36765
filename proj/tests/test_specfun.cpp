#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "pdem/bigfloat.hpp"
#include "pdem/errors.hpp"
#include "pdem/quadrature.hpp"
#include "pdem/specfun.hpp"

namespace {

using namespace pdem;
using cd = std::complex<double>;
using std::numbers::pi;

// Reference values below were produced with mpmath at 25 digits.

TEST(LnGamma, SpecialValues) {
  EXPECT_NEAR(ln_gamma(1.0).real(), 0.0, 1e-15);
  EXPECT_NEAR(ln_gamma(0.5).real(), 0.572364942924700087, 1e-15);
  EXPECT_NEAR(ln_gamma(0.5).imag(), 0.0, 0.0);
  EXPECT_NEAR(ln_gamma(11.0).real(), std::log(3628800.0), 1e-13);
  // Gamma(-0.5) = -2 sqrt(pi) < 0
  const auto neg = ln_gamma(-0.5);
  EXPECT_NEAR(neg.real(), std::log(2 * std::sqrt(pi)), 1e-14);
  EXPECT_EQ(log_abs_gamma(-0.5).second, -1);
}

TEST(LnGamma, ComplexAgainstReference) {
  const cd a = ln_gamma(cd(3.2, 1.5));
  EXPECT_NEAR(a.real(), 0.491420665135805955, 1e-14);
  EXPECT_NEAR(a.imag(), 1.56725667131079719, 1e-14);
  const cd b = ln_gamma(cd(20.0, -30.0));
  EXPECT_NEAR(b.real(), 21.3450744938634449, 1e-12);
  EXPECT_NEAR(b.imag(), -96.7143476895361801, 1e-12);
  // Left half-plane: compare Gamma itself (the log may differ by 2 pi i).
  const cd c = std::exp(ln_gamma(cd(-2.5, 0.7)));
  const cd c_ref = std::exp(cd(-1.49418730891135751, -8.64647568280337734));
  EXPECT_NEAR(std::abs(c - c_ref) / std::abs(c_ref), 0.0, 1e-13);
}

TEST(LnGamma, EulerIntegralAndRecursion) {
  // Seed Gamma(3+2i) from its defining integral, then walk the recursion.
  const cd z(3.0, 2.0);
  quad::Options o;
  o.rel_tol = 1e-13;
  const cd seed =
      quad::integrate_halfline([&](double t) { return t > 0 ? std::exp((z - 1.0) * std::log(t) - t) : cd(0); }, o)
          .value;
  EXPECT_NEAR(std::abs(std::exp(ln_gamma(z)) - seed) / std::abs(seed), 0.0, 1e-12);
  cd g = seed;
  for (int k = 0; k < 6; ++k) {
    const cd zk = z + double(k);
    EXPECT_NEAR(std::abs(std::exp(ln_gamma(zk)) - g) / std::abs(g), 0.0, 1e-12) << k;
    g *= zk;
  }
}

TEST(LnGamma, PolesThrow) {
  EXPECT_THROW(ln_gamma(0.0), PoleError);
  EXPECT_THROW(ln_gamma(-3.0), PoleError);
  EXPECT_THROW(ln_gamma(cd(-2.0, 0.0)), PoleError);
}

TEST(LnGamma, ExtendedPrecisionAgrees) {
  for (double x : {0.5, 3.25, 17.5, 1e5 + 0.5}) {
    const auto hi = ln_gamma(x, PrecisionConfig::digits(40));
    EXPECT_NEAR(hi.real(), ln_gamma(x).real(), 1e-13 * std::max(1.0, std::abs(hi.real()))) << x;
  }
}

TEST(GenBinomial, Examples) {
  EXPECT_DOUBLE_EQ(gen_binomial(3.7, 0), 1.0);
  EXPECT_DOUBLE_EQ(gen_binomial(2.5, 1), 2.5);
  EXPECT_DOUBLE_EQ(gen_binomial(4.5, 2), 7.875);
  EXPECT_DOUBLE_EQ(gen_binomial(-1.5, 3), (-1.5 * -2.5 * -3.5) / 6.0);
  EXPECT_DOUBLE_EQ(gen_binomial(10.0, 3), 120.0);
  EXPECT_THROW(gen_binomial(1.0, -1), DomainError);
}

TEST(GenBinomial, FactorialTimesBinomialIsFallingFactorialInExtendedPrecision) {
  PrecisionScope scope(PrecisionConfig::digits(60));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int trial = 0; trial < 30; ++trial) {
    const BigFloat a(u(rng));
    for (int k = 0; k <= 12; ++k) {
      BigFloat falling(1), fact(1);
      for (int j = 0; j < k; ++j) {
        falling *= a - BigFloat(j);
        fact *= BigFloat(j + 1);
      }
      const BigFloat diff = gen_binomial(a, k) * fact - falling;
      const double scale = std::max(1.0, std::abs(falling.to_double()));
      EXPECT_LT(std::abs(diff.to_double()) / scale, 1e-50);
    }
  }
}

TEST(Laguerre, LowOrders) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(-0.9, 10.0), ux(0.0, 30.0);
  for (int i = 0; i < 20; ++i) {
    const double a = ua(rng), x = ux(rng);
    EXPECT_DOUBLE_EQ(laguerre(0, a, x), 1.0);
    EXPECT_NEAR(laguerre(1, a, x), a + 1 - x, 1e-12 * (1 + std::abs(x)));
  }
  EXPECT_NEAR(laguerre(2, 0.0, 2.0), -1.0, 1e-15);
}

TEST(Laguerre, AgainstReference) {
  EXPECT_NEAR(laguerre(3, 0.5, 1.7), -1.01133333333333334, 1e-14);
  EXPECT_NEAR(laguerre(8, 2.5, 12.0), -57.7927237374441964, 1e-11);
  EXPECT_NEAR(laguerre(5, 11.0, 3.0), 939.975, 1e-11);
  // At x = 30 the alternating sum cancels about ten digits (sum |terms| is
  // L(1.5, -30) ~ 1.7e15), so double precision holds only ~1e-6 relative.
  EXPECT_NEAR(laguerre(20, 1.5, 30.0) / 306895.473750541508, 1.0, 4 * 2.2e-16 * 1.74e15 / 3.07e5);
  PrecisionScope scope(PrecisionConfig::digits(40));
  EXPECT_NEAR(laguerre(20, BigFloat(1.5), BigFloat(30.0)).to_double() / 306895.473750541508, 1.0, 1e-15);
}

TEST(Laguerre, ThreeTermRecurrence) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ua(-0.9, 10.0), ux(0.0, 30.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = ua(rng), x = ux(rng);
    for (int n = 1; n < 10; ++n) {
      const double lhs = (n + 1) * laguerre(n + 1, a, x);
      const double rhs = (2 * n + a + 1 - x) * laguerre(n, a, x) - (n + a) * laguerre(n - 1, a, x);
      // Rounding in the explicit sums scales with sum |terms|, which is
      // L_m(a, -x) for a > -1.
      const double scale = std::max({(n + 1) * laguerre(n + 1, a, -x),
                                     std::abs(2 * n + a + 1 - x) * laguerre(n, a, -x),
                                     (n + a) * laguerre(n - 1, a, -x), 1.0});
      EXPECT_LE(std::abs(lhs - rhs) / scale, 1e-10) << "n=" << n << " a=" << a << " x=" << x;
    }
  }
}

TEST(Hyp2f1, TerminatingSums) {
  EXPECT_DOUBLE_EQ(hyp2f1_terminating(0, 2.0, 3.0, 0.4), 1.0);
  EXPECT_NEAR(hyp2f1_terminating(1, 2.0, 3.0, 0.4), 1 - 2.0 * 0.4 / 3.0, 1e-15);
  // 1 - 3/2 + 1/2
  EXPECT_NEAR(hyp2f1_terminating(2, 3.0, 2.0, 0.5), 0.0, 1e-15);
  EXPECT_NEAR(hyp2f1_terminating(4, 2.5, 3.75, 0.3), 0.426281006864988573, 1e-14);
  EXPECT_NEAR(hyp2f1_terminating(6, -1.5, 0.25, -2.0), 251.389140271493213, 1e-11);
  EXPECT_THROW(hyp2f1_terminating(3, 1.0, -1.0, 0.5), PoleError);
}

// Brute force: every vector with 0 <= i_nu <= m and sum nu i_nu = m.
std::size_t brute_force_count(int m) {
  std::size_t count = 0;
  std::vector<int> v(static_cast<std::size_t>(m), 0);
  while (true) {
    int w = 0;
    for (int k = 0; k < m; ++k) w += (k + 1) * v[k];
    if (w == m) ++count;
    int k = 0;
    while (k < m && v[k] == m) v[k++] = 0;
    if (k == m) break;
    ++v[k];
  }
  return count;
}

TEST(Partitions, SmallCases) {
  const auto p0 = partitions(0);
  ASSERT_EQ(p0.size(), 1u);
  EXPECT_EQ(p0[0].parts(), 0);
  const auto p1 = partitions(1);
  ASSERT_EQ(p1.size(), 1u);
  EXPECT_EQ(p1[0].multiplicities, std::vector<int>({1}));
  const auto p2 = partitions(2);
  ASSERT_EQ(p2.size(), 2u);
  EXPECT_EQ(p2[0].multiplicities, std::vector<int>({2, 0}));
  EXPECT_EQ(p2[0].parts(), 2);
  EXPECT_EQ(p2[1].multiplicities, std::vector<int>({0, 1}));
  EXPECT_EQ(p2[1].parts(), 1);
  EXPECT_THROW(partitions(-1), DomainError);
}

TEST(Partitions, MatchBruteForceAndInvariants) {
  for (int m = 1; m <= 8; ++m) {
    const auto ps = partitions(m);
    EXPECT_EQ(ps.size(), brute_force_count(m)) << m;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      EXPECT_EQ(ps[i].weight(), m);
      EXPECT_LE(ps[i].parts(), m);
      for (std::size_t j = i + 1; j < ps.size(); ++j) EXPECT_FALSE(ps[i] == ps[j]);
      if (i > 0) {
        EXPECT_TRUE(ps[i - 1].multiplicities > ps[i].multiplicities);
      }
    }
  }
}

TEST(BesselK, ClosedFormsAndReference) {
  EXPECT_NEAR(bessel_k(0.5, 1.0).real(), std::sqrt(pi / 2) * std::exp(-1.0), 1e-14);
  EXPECT_NEAR(bessel_k(0.0, 1.0).real(), 0.421024438240708333, 1e-14);
  EXPECT_NEAR(bessel_k(0.5, 2.0).real(), 0.119937771968061447, 1e-14);
  const struct {
    cd nu;
    double z;
    cd ref;
  } cases[] = {
      {{1.5, -2.0}, 0.7, {-0.516661752731467846, -0.132899221194571368}},
      {{0.0, 3.0}, 1.3, {0.00842481170719450132, 0.0}},
      {{2.5, 4.0}, 5.0, {-0.000537662829597260589, 0.00154159329525026415}},
      {{-1.0, 0.5}, 0.2, {2.40609362533892804, -3.29062859700796241}},
  };
  for (const auto& c : cases) {
    const cd k = bessel_k(c.nu, c.z);
    EXPECT_LE(std::abs(k - c.ref), std::max(1e-10 * std::abs(c.ref), 1e-14)) << c.nu << " " << c.z;
  }
  EXPECT_THROW(bessel_k(0.5, 0.0), DomainError);
}

TEST(BesselK, ReflectionAndConjugationSymmetry) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ur(-8.0, 8.0), ui(-16.0, 16.0), uz(0.01, 50.0);
  for (int trial = 0; trial < 40; ++trial) {
    const cd nu(ur(rng), ui(rng));
    const double z = uz(rng);
    const cd k = bessel_k(nu, z);
    const double scale = std::max(std::abs(k), 1e-300);
    EXPECT_LE(std::abs(bessel_k(-nu, z) - k) / scale, 1e-12) << nu << " z=" << z;
    EXPECT_LE(std::abs(bessel_k(std::conj(nu), z) - std::conj(k)) / scale, 1e-12) << nu << " z=" << z;
  }
}

TEST(BesselK, LargeArgumentAsymptote) {
  for (double nu : {0.0, 0.5, 1.0, 2.0}) {
    // Two terms of the Hankel expansion; the next is below 1e-6 here.
    const double m = 4.0 * nu * nu, z = 50.0;
    const double series = 1.0 + (m - 1.0) / (8.0 * z) + (m - 1.0) * (m - 9.0) / (2.0 * 64.0 * z * z);
    const double k = bessel_k(nu, z).real();
    EXPECT_NEAR(k / (std::sqrt(pi / (2.0 * z)) * std::exp(-z) * series), 1.0, 1e-5) << nu;
  }
}

TEST(BesselK, GridPathsAgree) {
  const std::vector<double> re = {0.0, 1.0, -2.0, 3.0};
  const std::vector<double> scales = {0.0, 0.0, 0.0, 0.0};
  std::vector<double> im;
  for (int k = 0; k < 30; ++k) im.push_back(-6.0 + 0.4 * k);
  for (double z : {0.3, 2.0, 9.0}) {
    const auto adaptive = bessel_k_grid(re, scales, im, z);
    const auto trap = bessel_k_grid_trapezoid(re, scales, im, z);
    for (std::size_t r = 0; r < re.size(); ++r)
      for (std::size_t k = 0; k < im.size(); ++k) {
        const cd single = bessel_k(cd(re[r], im[k]), z);
        const cd a = adaptive[r * im.size() + k];
        const cd t = trap[r * im.size() + k];
        EXPECT_LE(std::abs(a - single), 1e-12 * std::max(1.0, std::abs(single)));
        EXPECT_LE(std::abs(t - single), 1e-12 * std::max(1.0, std::abs(single)));
      }
  }
}

TEST(CompensatedSum, RecoversCancelledTerms) {
  CompensatedSum<double> s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  // Plain summation absorbs every small term and returns 0.
  EXPECT_NEAR(s.value(), 1e-13, 1e-25);
}

}  // namespace
