#pragma once

// Weyl symbols of the canonical pair (mu, pi = m^{-1/2} p) for m = e^{-alpha x}
// and the two-gamma master integral
//   int x^m Gamma(a - ix) Gamma(b + ix) dx
//     = m! pi (-i)^m 2^{1-a-b} Gamma(a+b)/Gamma(b)
//       * sum_{partitions} (-1)^M / prod(i_nu! (nu!)^{i_nu}) Gamma(b+M) 2F1(-M, a+b; b; 1/2)
// with M the number of parts.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <type_traits>

#include "pdem/bigfloat.hpp"
#include "pdem/errors.hpp"
#include "pdem/massmodel.hpp"
#include "pdem/quadrature.hpp"
#include "pdem/specfun.hpp"

namespace pdem {

enum class Observable { Mu, Mu2, Pi, Pi2 };

inline const char* to_string(Observable o) {
  switch (o) {
    case Observable::Mu: return "mu";
    case Observable::Mu2: return "mu2";
    case Observable::Pi: return "pi";
    case Observable::Pi2: return "pi2";
  }
  return "?";
}

/// Symbol at (mu, p): mu^m is its own symbol, W[pi] = (2/alpha) p/mu + i/(2 mu)
/// and W[pi^2] = ((2/alpha) p/mu)^2 + (2i/alpha) p/mu^2, which equals
/// W[pi]^2 + 1/(4 mu^2).
inline std::complex<double> weyl_symbol_at_mu(Observable which, double mu, double p, double alpha) {
  switch (which) {
    case Observable::Mu: return mu;
    case Observable::Mu2: return mu * mu;
    case Observable::Pi: return {2.0 * p / (alpha * mu), 0.5 / mu};
    case Observable::Pi2: {
      const double re = 2.0 * p / (alpha * mu);
      return {re * re, 2.0 * p / (alpha * mu * mu)};
    }
  }
  return 0.0;
}

/// Symbol at (x, p) on the monotone branch.
inline std::complex<double> weyl_symbol(Observable which, double x, double p, double alpha) {
  return weyl_symbol_at_mu(which, MassProfile(alpha).mu_at(x), p, alpha);
}

/// |{mu, pi} - 1| with pi(x, p) = p / mu'(x), every partial derivative taken
/// by central differences of step h. On the monotone branch mu' = -sqrt(m),
/// so pi = -(2/alpha) p/mu: the symbol above up to the orientation of mu.
inline double poisson_bracket_gap(double x, double p, double alpha, double h) {
  const MassProfile profile(alpha);
  auto mu = [&](double xx, double) { return profile.mu_at(xx); };
  auto pi = [&](double xx, double pp) { return -2.0 * pp / (alpha * profile.mu_at(xx)); };
  auto dx = [&](auto f) { return (f(x + h, p) - f(x - h, p)) / (2.0 * h); };
  auto dp = [&](auto f) { return (f(x, p + h) - f(x, p - h)) / (2.0 * h); };
  return std::abs(dx(mu) * dp(pi) - dx(pi) * dp(mu) - 1.0);
}

namespace detail {

template <class Real>
Real factorial_as(int k) {
  Real f(1);
  for (int j = 2; j <= k; ++j) f *= Real(j);
  return f;
}

template <class Real>
Real gamma_as(const Real& x) {
  using std::exp;
  auto [lg, sg] = log_abs_gamma(x);
  return sg < 0 ? Real(-exp(lg)) : Real(exp(lg));
}

// Real factor S with RHS = (-i)^m S.
template <class Real>
Real b1_real_factor(int m, const Real& a, const Real& b) {
  CompensatedSum<Real> sum;
  for (const auto& part : partitions(m)) {
    const int M = part.parts();
    Real denom(1);
    for (std::size_t nu = 0; nu < part.multiplicities.size(); ++nu) {
      const int i = part.multiplicities[nu];
      denom *= factorial_as<Real>(i);
      for (int k = 0; k < i; ++k) denom *= factorial_as<Real>(static_cast<int>(nu) + 1);
    }
    Real term = gamma_as(b + Real(M)) * hyp2f1_terminating(M, a + b, b, Real(0.5)) / denom;
    sum.add((M % 2) ? Real(-term) : term);
  }
  using std::pow;
  const Real pi_r = [] {
    if constexpr (std::is_same_v<Real, BigFloat>) {
      return BigFloat::pi();
    } else {
      return std::numbers::pi_v<Real>;
    }
  }();
  return factorial_as<Real>(m) * pi_r * pow(Real(2), Real(1) - a - b) * gamma_as(a + b) / gamma_as(b) *
         sum.value();
}

}  // namespace detail

/// Closed-form right-hand side of the master integral.
inline std::complex<double> b1_rhs_closed(int m, double a, double b, PrecisionConfig prec = {}) {
  if (m < 0) throw DomainError("b1_rhs_closed needs m >= 0");
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("b1_rhs_closed needs a, b > 0");
  double s;
  if (prec.working_digits > 16) {
    PrecisionScope scope(prec);
    s = detail::b1_real_factor<BigFloat>(m, BigFloat(a), BigFloat(b)).to_double();
  } else {
    s = detail::b1_real_factor<double>(m, a, b);
  }
  // (-i)^m
  static constexpr std::complex<double> kPhase[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  return kPhase[m % 4] * s;
}

/// Line quadrature of x^m Gamma(a - ix) Gamma(b + ix) with complex log-gamma,
/// truncated where e^{-pi|x|} |x|^{m+a+b} < 1e-16.
inline quad::IntegralResult<std::complex<double>> b1_lhs_integral(int m, double a, double b, double tol = 1e-13) {
  if (m < 0) throw DomainError("b1_lhs_numeric needs m >= 0");
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("b1_lhs_numeric needs a, b > 0");
  const double power = m + a + b;
  double cut = 1.0;
  while (-std::numbers::pi * cut + power * std::log(cut) > std::log(1e-16)) cut *= 1.25;
  auto f = [&](double x) {
    const auto lg = ln_gamma(std::complex<double>(a, -x)) + ln_gamma(std::complex<double>(b, x));
    return std::pow(x, m) * std::exp(lg);
  };
  quad::Options opt;
  opt.rel_tol = 1e-12;
  opt.abs_tol = tol;
  opt.initial_panels = 8;
  return quad::integrate_interval(f, -cut, cut, opt);
}

inline std::complex<double> b1_lhs_numeric(int m, double a, double b, double tol = 1e-13) {
  return b1_lhs_integral(m, a, b, tol).value;
}

}  // namespace pdem
