#pragma once

// Closed-form moments <mu>, <mu^2>, <pi>, <pi^2> of the LI / LIII states and
// the uncertainty product (Delta mu)(Delta pi).
//
// With gamma12 the state coefficient and A = l + l1 + l2 (LI) or 2l + l1 + l2 (LIII):
//   LI   <mu>   = sum gamma12 Gamma(A + 2)
//        <mu^2> = sum gamma12 Gamma(A + 5/2)
//        <pi>   = i sum gamma12 (l1 - l2 + 1/2) Gamma(A + 1)
//        <pi^2> = sum gamma12 (l + 1/2 - l1^2 - l2^2 + 2 l1 l2 + 2 l1) Gamma(A + 1/2)
//   LIII <mu>   = sum gamma12 Gamma(A + 4)/4
//        <mu^2> = sum gamma12 Gamma(A + 5)/8
//        <pi>   = i sum gamma12 (l1 - l2 + 1) Gamma(A + 2)/2
//        <pi^2> = sum gamma12 (2l + 1 - l1^2 - l2^2 - l1 + 3 l2 + 2 l1 l2) Gamma(A + 1)/2
// The terms alternate in sign and grow like l^{n+1/2}, so sums run at
// extended precision.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdem/bigfloat.hpp"
#include "pdem/eigenstates.hpp"
#include "pdem/errors.hpp"
#include "pdem/parallel.hpp"
#include "pdem/specfun.hpp"
#include "pdem/weyl.hpp"
#include "pdem/wigner.hpp"

namespace pdem {

/// sign * exp(log_magnitude).
struct SignedLog {
  int sign = 1;
  double log_magnitude = 0.0;

  double value() const { return sign * std::exp(log_magnitude); }
};

struct MomentSet {
  double mu1 = 0.0;
  double mu2 = 0.0;
  std::complex<double> pi1;  ///< purely imaginary
  double pi2 = 0.0;
  PrecisionConfig precision_used;
};

struct UncertaintyResult {
  double delta_mu = 0.0;
  double delta_pi = 0.0;
  double product = 0.0;
  double asymptote_gap = 0.0;  ///< product - (n + 1/2)
};

/// 16 + ceil(1.2 n log10(max(l, 10))) + 10 guard digits.
inline PrecisionConfig default_moment_precision(int n, double l) {
  const double lg = std::log10(std::max(l, 10.0));
  return PrecisionConfig::digits(16 + static_cast<int>(std::ceil(1.2 * n * lg)) + 10);
}

/// Smallest accepted working precision: 16 + ceil(n log10(max(l, 10))).
inline int minimum_moment_digits(int n, double l) {
  return 16 + static_cast<int>(std::ceil(n * std::log10(std::max(l, 10.0))));
}

namespace detail {

inline void check_moment_args(Case c, int n, double l) {
  // Constructing a state applies the parameter rules.
  (void)QuantumState(c, n, l, MassProfile(1.0));
}

template <class Real>
Real pi_value() {
  if constexpr (std::is_same_v<Real, BigFloat>) {
    return BigFloat::pi();
  } else {
    return std::numbers::pi_v<Real>;
  }
}

template <class Real>
Real log_binomial(const Real& top, int k) {
  return log_abs_gamma(top + Real(1)).first - log_abs_gamma(Real(k + 1)).first -
         log_abs_gamma(top - Real(k) + Real(1)).first;
}

// sign and log|gamma12|. The binomial tops exceed n - 1 for every allowed l,
// so only (-1)^{l1+l2} contributes a sign.
template <class Real>
std::pair<int, Real> coefficient_log(Case c, int n, const Real& l, int l1, int l2) {
  const Real nr(n);
  Real lg = log_abs_gamma(nr + Real(1)).first - log_abs_gamma(Real(l1 + 1)).first -
            log_abs_gamma(Real(l2 + 1)).first;
  Real top;
  if (c == Case::LI) {
    top = nr + l + Real(0.5);
    lg -= log_abs_gamma(nr + l + Real(1.5)).first;
  } else {
    top = nr + Real(2) * l + Real(1);
    using std::log;
    lg -= log(nr + l + Real(1)) + log_abs_gamma(nr + Real(2) * l + Real(2)).first;
  }
  lg += log_binomial(top, n - l1) + log_binomial(top, n - l2);
  return {((l1 + l2) % 2) ? -1 : 1, lg};
}

template <class Real>
struct RawMoments {
  Real mu1, mu2, pi1_imag, pi2;
  double worst_cancellation_digits = 0.0;  // log10(sum|t| / |sum t|), worst of the four
};

template <class Real>
class TermSum {
 public:
  void add(int sign, const Real& log_mag, const Real& poly) {
    if (poly == Real(0)) return;
    using std::exp;
    using std::abs;
    const Real t = exp(log_mag) * poly;
    sum_.add(sign < 0 ? Real(-t) : t);
    abs_.add(abs(t));
  }
  Real value() const { return sum_.value(); }
  double cancellation_digits() const {
    const Real v = value();
    if (v == Real(0)) return std::numeric_limits<double>::infinity();
    using std::abs;
    using std::log;
    return to_double(log(abs_.value() / abs(v))) / std::log(10.0);
  }

 private:
  CompensatedSum<Real> sum_;
  CompensatedSum<Real> abs_;
};

template <class Real>
RawMoments<Real> raw_moments(Case c, int n, const Real& l) {
  TermSum<Real> m1, m2, p1, p2;
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; b <= n; ++b) {
      auto [sg, lg] = coefficient_log(c, n, l, a, b);
      const Real ar(a), br(b);
      const Real big_a = (c == Case::LI ? l : Real(2) * l) + ar + br;
      auto add = [&](TermSum<Real>& acc, const Real& shift, const Real& poly) {
        auto [g, gs] = log_abs_gamma(big_a + shift);
        acc.add(sg * gs, lg + g, poly);
      };
      if (c == Case::LI) {
        add(m1, Real(2), Real(1));
        add(m2, Real(2.5), Real(1));
        add(p1, Real(1), ar - br + Real(0.5));
        add(p2, Real(0.5), l + Real(0.5) - ar * ar - br * br + Real(2) * ar * br + Real(2) * ar);
      } else {
        add(m1, Real(4), Real(0.25));
        add(m2, Real(5), Real(0.125));
        add(p1, Real(2), (ar - br + Real(1)) * Real(0.5));
        add(p2, Real(1),
            (Real(2) * l + Real(1) - ar * ar - br * br - ar + Real(3) * br + Real(2) * ar * br) * Real(0.5));
      }
    }
  }
  RawMoments<Real> r{m1.value(), m2.value(), p1.value(), p2.value(), 0.0};
  for (const auto* t : {&m1, &m2, &p1, &p2})
    r.worst_cancellation_digits = std::max(r.worst_cancellation_digits, t->cancellation_digits());
  return r;
}

// Digits that must survive every cancellation for results good to double.
inline constexpr double kSurvivingDigits = 10.0;

template <class Real>
UncertaintyResult uncertainty_from(const RawMoments<Real>& m, int n, int digits) {
  using std::sqrt;
  using std::abs;
  using std::log;
  const Real var_mu = m.mu2 - m.mu1 * m.mu1;
  const Real var_pi = m.pi2 + m.pi1_imag * m.pi1_imag;
  if (!(var_mu > Real(0)) || !(var_pi > Real(0)))
    throw PrecisionInsufficient("nonpositive variance at " + std::to_string(digits) + " digits");
  const double lost = to_double(log(m.mu2 / var_mu)) / std::log(10.0);
  if (digits - std::max(lost, m.worst_cancellation_digits) < kSurvivingDigits)
    throw PrecisionInsufficient("variance cancellation leaves too few of " + std::to_string(digits) + " digits");
  const Real product = sqrt(var_mu * var_pi);
  UncertaintyResult u;
  u.delta_mu = to_double(sqrt(var_mu));
  u.delta_pi = to_double(sqrt(var_pi));
  u.product = to_double(product);
  u.asymptote_gap = to_double(product - Real(n) - Real(0.5));
  return u;
}

template <class F>
auto with_precision(PrecisionConfig prec, F&& f) {
  if (prec.working_digits > 16) {
    PrecisionScope scope(prec);
    return f(BigFloat{});
  }
  return f(0.0);
}

}  // namespace detail

/// sign and log|gamma12| of the moment coefficient.
inline SignedLog coefficient(Case c, int n, double l, int l1, int l2, PrecisionConfig prec = {}) {
  detail::check_moment_args(c, n, l);
  if (l1 < 0 || l2 < 0 || l1 > n || l2 > n) throw DomainError("coefficient needs 0 <= l1, l2 <= n");
  return detail::with_precision(prec, [&]<class Real>(Real) {
    auto [s, lg] = detail::coefficient_log(c, n, Real(l), l1, l2);
    return SignedLog{s, to_double(lg)};
  });
}

/// All four moments at the given precision. Throws PrecisionInsufficient
/// below minimum_moment_digits(n, l) or when the observed cancellation
/// leaves fewer than 10 significant digits.
inline MomentSet moment_set(Case c, int n, double l, PrecisionConfig prec) {
  detail::check_moment_args(c, n, l);
  if (prec.working_digits < minimum_moment_digits(n, l))
    throw PrecisionInsufficient("moment sums need >= " + std::to_string(minimum_moment_digits(n, l)) +
                                " digits, got " + std::to_string(prec.working_digits));
  return detail::with_precision(prec, [&]<class Real>(Real) {
    const auto m = detail::raw_moments(c, n, Real(l));
    if (prec.working_digits - m.worst_cancellation_digits < detail::kSurvivingDigits)
      throw PrecisionInsufficient("moment sums cancel " + std::to_string(m.worst_cancellation_digits) +
                                  " digits of " + std::to_string(prec.working_digits));
    return MomentSet{to_double(m.mu1), to_double(m.mu2), {0.0, to_double(m.pi1_imag)}, to_double(m.pi2), prec};
  });
}

inline MomentSet moment_set(Case c, int n, double l) { return moment_set(c, n, l, default_moment_precision(n, l)); }

/// Moments by plain double summation, with no precision checks. Kept to
/// measure the cancellation the extended path avoids.
inline MomentSet moment_set_naive(Case c, int n, double l) {
  detail::check_moment_args(c, n, l);
  const auto m = detail::raw_moments(c, n, l);
  return MomentSet{m.mu1, m.mu2, {0.0, m.pi1_imag}, m.pi2, PrecisionConfig{}};
}

/// Delta mu, Delta pi and their product, with Delta pi^2 = <pi^2> - <pi>^2
/// and <pi> imaginary (so the square adds |<pi>|^2).
inline UncertaintyResult uncertainty_product(Case c, int n, double l, PrecisionConfig prec) {
  detail::check_moment_args(c, n, l);
  if (prec.working_digits < minimum_moment_digits(n, l))
    throw PrecisionInsufficient("moment sums need >= " + std::to_string(minimum_moment_digits(n, l)) +
                                " digits, got " + std::to_string(prec.working_digits));
  return detail::with_precision(prec, [&]<class Real>(Real) {
    return detail::uncertainty_from(detail::raw_moments(c, n, Real(l)), n, prec.working_digits);
  });
}

inline UncertaintyResult uncertainty_product(Case c, int n, double l) {
  return uncertainty_product(c, n, l, default_moment_precision(n, l));
}

inline double asymptotic_gap(Case c, int n, double l, std::optional<PrecisionConfig> prec = std::nullopt) {
  return uncertainty_product(c, n, l, prec.value_or(default_moment_precision(n, l))).asymptote_gap;
}

struct Table1Row {
  double l;
  Case kind;
  int n;
  UncertaintyResult result;
};

/// Every (l, case, n) cell, ordered by l ascending, LI before LIII, n
/// ascending. Without an explicit precision each cell uses its default.
inline std::vector<Table1Row> table1(std::span<const double> l_list, int n_max,
                                     std::optional<PrecisionConfig> prec = std::nullopt,
                                     unsigned threads = default_thread_count()) {
  if (n_max < 0) throw DomainError("table1 needs n_max >= 0");
  std::vector<double> ls(l_list.begin(), l_list.end());
  std::sort(ls.begin(), ls.end());
  std::vector<Table1Row> rows;
  for (double l : ls)
    for (Case c : {Case::LI, Case::LIII})
      for (int n = 0; n <= n_max; ++n) rows.push_back({l, c, n, {}});
  parallel_for(
      rows.size(),
      [&](std::size_t i) {
        auto& r = rows[i];
        r.result = uncertainty_product(r.kind, r.n, r.l, prec.value_or(default_moment_precision(r.n, r.l)));
      },
      threads);
  return rows;
}

/// The reference l-grid: fine steps up to 5, then decades to 1e5.
inline constexpr std::array<double, 16> kTable1Ls = {0.0, 0.5, 1.0, 1.5, 2.0,   2.5,   3.0,    3.5,
                                                    4.0, 4.5, 5.0, 10.0, 100.0, 1e3, 1e4, 1e5};

// ---------------------------------------------------------------------------
// Phase-space oracle
// ---------------------------------------------------------------------------

struct OracleMoments {
  std::complex<double> mu1, mu2, pi1, pi2;
  double error_estimate = 0.0;
};

/// All four moments as phase-space averages of W times the Weyl symbols,
/// in one vector quadrature. tol is absolute on each moment.
inline OracleMoments moment_oracle_all(const QuantumState& s, double tol = 1e-9) {
  if (s.n() > 3) throw DomainError("moment oracle is limited to n <= 3");
  const WignerClosedForm wdf(s);
  const double alpha = s.alpha();
  auto r = phase_space_integral(
      wdf, 8,
      [&](double mu, double p, double* out) {
        const Observable obs[4] = {Observable::Mu, Observable::Mu2, Observable::Pi, Observable::Pi2};
        for (int k = 0; k < 4; ++k) {
          const auto v = weyl_symbol_at_mu(obs[k], mu, p, alpha);
          out[2 * k] = v.real();
          out[2 * k + 1] = v.imag();
        }
      },
      1e-10, tol);
  const auto& v = r.value;
  return {{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}, {v[6], v[7]}, r.error_estimate};
}

inline std::complex<double> moment_oracle(const QuantumState& s, Observable which, double tol = 1e-9) {
  const auto m = moment_oracle_all(s, tol);
  switch (which) {
    case Observable::Mu: return m.mu1;
    case Observable::Mu2: return m.mu2;
    case Observable::Pi: return m.pi1;
    case Observable::Pi2: return m.pi2;
  }
  return 0.0;
}

}  // namespace pdem
