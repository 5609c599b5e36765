#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pdem/eigenstates.hpp"
#include "pdem/errors.hpp"
#include "pdem/quadrature.hpp"

namespace {

using namespace pdem;

QuantumState state(Case c, int n, double l, double alpha = 1.0) { return QuantumState(c, n, l, MassProfile(alpha)); }

// <psi_a | psi_b> by quadrature in mu with dx = 2 dmu / (alpha mu).
double overlap(const QuantumState& a, const QuantumState& b, double rel_tol = 1e-12) {
  auto [lo_a, hi_a] = support_mu(a);
  auto [lo_b, hi_b] = support_mu(b);
  const double lo = std::min(lo_a, lo_b), hi = std::max(hi_a, hi_b);
  quad::Options o;
  o.rel_tol = rel_tol;
  o.abs_tol = 1e-14;
  o.initial_panels = 16;
  // Integrate in t = log mu so both tails are resolved evenly.
  auto f = [&](double t) {
    const double mu = std::exp(t);
    return eigenfunction_of_mu(a, mu) * eigenfunction_of_mu(b, mu) * 2.0 / a.alpha();
  };
  return quad::integrate_interval(f, std::log(lo), std::log(hi), o).value;
}

TEST(QuantumState, RejectsExcludedParameters) {
  EXPECT_THROW(state(Case::LI, -1, 0.0), DomainError);
  EXPECT_THROW(state(Case::LI, 0, -1.5), DomainError);
  EXPECT_THROW(state(Case::LI, 0, -2.5), DomainError);
  EXPECT_THROW(state(Case::LIII, 0, -1.0), DomainError);
  EXPECT_THROW(state(Case::LIII, 0, -1.5), DomainError);
  EXPECT_THROW(state(Case::LI, 0, INFINITY), DomainError);
  EXPECT_NO_THROW(state(Case::LI, 0, -1.4));
  EXPECT_NO_THROW(state(Case::LIII, 0, -0.9));
}

TEST(Normalization, ConstantsMatchDirectFormula) {
  EXPECT_NEAR(normalization_constant(state(Case::LI, 0, 0.0)), std::sqrt(2.0 / std::sqrt(std::numbers::pi)), 1e-14);
  for (double l : {0.5, 2.0, 7.25}) {
    EXPECT_NEAR(normalization_constant(state(Case::LI, 0, l)), std::sqrt(1.0 / std::tgamma(l + 1.5)), 1e-13);
  }
  EXPECT_NEAR(normalization_constant(state(Case::LIII, 0, 0.0)), 0.5, 1e-15);
  EXPECT_NEAR(normalization_constant(state(Case::LIII, 2, 1.0, 3.0)),
              std::sqrt(3.0 * 2.0 / (4.0 * 4.0 * std::tgamma(6.0))), 1e-14);
}

TEST(Eigenfunction, AgainstReferenceValues) {
  EXPECT_NEAR(eigenfunction(state(Case::LIII, 0, 0.0), 0.0), 4.0 * std::exp(-2.0), 1e-15);
  EXPECT_NEAR(eigenfunction(state(Case::LI, 2, 3.5, 0.5), -1.3), 0.0128925223005299753, 1e-15);
  EXPECT_NEAR(eigenfunction(state(Case::LIII, 3, 2.0), -2.2), 0.292074628110667004, 1e-14);
  EXPECT_NEAR(eigenfunction(state(Case::LI, 0, 0.0), 0.0), 0.406615153225671646, 1e-15);
  EXPECT_NEAR(eigenfunction(state(Case::LIII, 5, 0.5, 2.0), -0.4), 0.0463322082748635584, 1e-14);
}

TEST(Eigenfunction, FirstExcitedZeroOfCaseOne) {
  for (double l : {0.0, 0.5, 2.0}) {
    const auto s = state(Case::LI, 1, l);
    const double x0 = s.profile().x_of_mu(std::sqrt(l + 1.5));
    EXPECT_NEAR(eigenfunction(s, x0), 0.0, 1e-14);
    EXPECT_LT(eigenfunction(s, x0 - 0.1) * eigenfunction(s, x0 + 0.1), 0.0);
  }
}

TEST(Eigenfunction, NodeCountEqualsN) {
  for (Case c : {Case::LI, Case::LIII}) {
    for (double l : {0.0, 0.5, 3.5}) {
      for (int n = 0; n <= 8; ++n) {
        const auto s = state(c, n, l, 0.8);
        auto [lo, hi] = support_x(s, 1e-10);
        int changes = 0;
        double prev = eigenfunction(s, lo);
        for (int i = 1; i <= 20000; ++i) {
          const double v = eigenfunction(s, lo + (hi - lo) * i / 20000.0);
          if (v * prev < 0.0) ++changes;
          if (v != 0.0) prev = v;
        }
        EXPECT_EQ(changes, n) << "case " << to_string(c) << " l=" << l;
      }
    }
  }
}

TEST(Eigenfunction, PiecewiseBranchIsEven) {
  const QuantumState s(Case::LI, 2, 1.5, MassProfile(1.2, Branch::PiecewiseAbs));
  for (double x = 0.05; x < 4.0; x += 0.3) EXPECT_DOUBLE_EQ(eigenfunction(s, x), eigenfunction(s, -x));
}

TEST(Eigenfunction, LargeLStaysFinite) {
  const auto s = state(Case::LI, 3, 1e5);
  const double mu_peak = std::sqrt(1e5);
  const double v = eigenfunction_of_mu(s, mu_peak);
  EXPECT_TRUE(std::isfinite(v));
  // log-gamma terms near 1e6 leave about 1e-10 relative accuracy in psi.
  EXPECT_NEAR(overlap(s, s, 1e-9), 1.0, 1e-8);
}

TEST(Orthonormality, CaseOne) {
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (double l : {0.0, 0.5, 2.0, 3.5}) {
      for (int m = 0; m <= 5; ++m) {
        for (int n = m; n <= 5; ++n) {
          const double o = overlap(state(Case::LI, m, l, alpha), state(Case::LI, n, l, alpha));
          EXPECT_NEAR(o, m == n ? 1.0 : 0.0, 1e-8) << "alpha=" << alpha << " l=" << l << " m=" << m << " n=" << n;
        }
      }
    }
  }
}

TEST(Orthonormality, CaseThreeIsNormalizedButNotOrthogonal) {
  for (double alpha : {0.5, 1.0, 2.0})
    for (double l : {0.0, 0.5, 2.0, 3.5})
      for (int n = 0; n <= 5; ++n) {
        const auto s = state(Case::LIII, n, l, alpha);
        EXPECT_NEAR(overlap(s, s), 1.0, 1e-8) << "alpha=" << alpha << " l=" << l << " n=" << n;
      }
  // Each n has its own b = n + l + 1, so the family is not an eigenbasis of
  // one operator; overlaps from an independent quadrature.
  EXPECT_NEAR(overlap(state(Case::LIII, 0, 0.0), state(Case::LIII, 1, 0.0)), -0.5, 1e-10);
  EXPECT_NEAR(overlap(state(Case::LIII, 0, 0.5), state(Case::LIII, 1, 0.5)), -1.0 / std::sqrt(5.0), 1e-10);
}

TEST(Energy, Spectra) {
  EXPECT_DOUBLE_EQ(energy(state(Case::LI, 0, 0.0)), 0.0);
  EXPECT_DOUBLE_EQ(energy(state(Case::LI, 3, 2.0)), 6.0);
  EXPECT_NEAR(energy(state(Case::LIII, 1, 0.0)), 1.5, 1e-15);
  for (double l : {0.0, 0.5, 2.0, 3.5}) {
    for (int n = 0; n < 10; ++n) {
      EXPECT_NEAR(energy(state(Case::LI, n + 1, l)) - energy(state(Case::LI, n, l)), 2.0, 1e-14);
      // With b = n + l + 1 the gaps grow as (2n + 2l + 3) / (2 (l+1)^2).
      const double gap = energy(state(Case::LIII, n + 1, l)) - energy(state(Case::LIII, n, l));
      EXPECT_NEAR(gap, (2.0 * n + 2.0 * l + 3.0) / (2.0 * (l + 1) * (l + 1)), 1e-12);
    }
  }
}

TEST(Energy, FixedChargeSpectrumConvergesWithShrinkingGaps) {
  const double charge = 3.0;
  for (double l : {0.0, 0.5, 2.0}) {
    double prev_gap = INFINITY;
    for (int n = 0; n < 12; ++n) {
      const double gap = energy(state(Case::LIII, n + 1, l), charge) - energy(state(Case::LIII, n, l), charge);
      EXPECT_GT(gap, 0.0);
      EXPECT_LT(gap, prev_gap);
      prev_gap = gap;
    }
    EXPECT_LT(energy(state(Case::LIII, 200, l), charge), charge * charge / (2.0 * (l + 1) * (l + 1)));
  }
  EXPECT_THROW(energy(state(Case::LI, 1, 0.0), charge), DomainError);
}

TEST(EffectivePotential, Examples) {
  EXPECT_NEAR(effective_potential(state(Case::LI, 0, 2.0), 0.0), -0.84375, 1e-14);
  EXPECT_NEAR(effective_potential(state(Case::LIII, 0, 0.0), 0.0), -0.09375, 1e-14);
  // Small alpha: the mass bracket fades and V -> -3/2 + mu^2/2.
  const auto s = state(Case::LI, 0, 0.0, 1e-4);
  const double x = -1.0;
  const double mu = s.profile().mu_at(x);
  EXPECT_NEAR(effective_potential(s, x), -1.5 + 0.5 * mu * mu, 1e-8);
}

TEST(SeResidual, Examples) {
  const auto a = se_residual(state(Case::LI, 0, 2.0), default_lattice(state(Case::LI, 0, 2.0), 1e-3));
  EXPECT_LT(a.residual, 1e-5);
  const auto s = state(Case::LI, 4, 3.5, 0.5);
  const auto b = se_residual(s, default_lattice(s, 1e-3));
  EXPECT_LT(b.residual, 1e-4);
  EXPECT_NEAR(b.ratio, 4.0, 0.5);
}

TEST(SeResidual, SecondOrderConvergence) {
  for (Case c : {Case::LI, Case::LIII}) {
    const auto s = state(c, 2, 0.5, 0.75);
    const double r1 = se_residual(s, default_lattice(s, 4e-3)).residual;
    const double r2 = se_residual(s, default_lattice(s, 2e-3)).residual;
    const double r3 = se_residual(s, default_lattice(s, 1e-3)).residual;
    EXPECT_NEAR(r1 / r2, 4.0, 0.5);
    EXPECT_NEAR(r2 / r3, 4.0, 0.5);
  }
}

TEST(SeResidual, RejectsUnsupportedInputs) {
  const auto s = state(Case::LI, 1, 0.5);
  const auto rep = se_residual(s, default_lattice(s, 1e-3));
  EXPECT_LT(rep.residual, 1e-5);
  EXPECT_THROW(se_residual(QuantumState(Case::LI, 1, 0.5, MassProfile(1.0, Branch::PiecewiseAbs)),
                           default_lattice(s, 1e-3)),
               DomainError);
  EXPECT_THROW(se_residual(s, UniformLattice{0.0, 1e-3, 2}), DomainError);
}

TEST(Support, ProbabilityIntervalHoldsRequestedMass) {
  for (Case c : {Case::LI, Case::LIII}) {
    const auto s = state(c, 2, 2.0, 0.7);
    auto [lo, hi] = probability_interval(s, 1.0 - 1e-6);
    quad::Options o;
    o.rel_tol = 1e-12;
    o.abs_tol = 1e-15;
    o.initial_panels = 8;
    const double inside =
        quad::integrate_interval([&](double x) { return std::pow(eigenfunction(s, x), 2); }, lo, hi, o).value;
    EXPECT_NEAR(1.0 - inside, 1e-6, 2e-8);
    EXPECT_LT(lo, hi);
  }
}

}  // namespace
