#pragma once

// Wigner distribution functions of the LI / LIII eigenstates.
//
// Closed form (hbar = 1), with z the Bessel argument and c = Im(order)/p:
//   LI   z = mu^2,  c = -2/alpha,
//        W = 2 n!/(pi Gamma(n+l+3/2)) sum_{l1,l2} g12 z^{l+l1+l2+3/2} K_{l1-l2+icp}(z)
//   LIII z = 2 mu,  c = -4/alpha,
//        W = n!/(pi (n+l+1) Gamma(n+2l+2)) sum_{l1,l2} g12 z^{2l+l1+l2+3} K_{l1-l2+icp}(z)
// where g12 = (-1)^{l1+l2}/(l1! l2!) C(A, n-l1) C(A, n-l2) and A is n+l+1/2
// (LI) or n+2l+1 (LIII). The defining integral
//   W(x,p) = (1/2pi) int e^{-ipy} psi(x-y/2) psi(x+y/2) dy
// is kept as an independent oracle.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "pdem/bigfloat.hpp"
#include "pdem/eigenstates.hpp"
#include "pdem/errors.hpp"
#include "pdem/parallel.hpp"
#include "pdem/quadrature.hpp"
#include "pdem/specfun.hpp"

namespace pdem {

struct PhaseSpacePoint {
  double x;
  double p;
};

/// Upper bound |W| <= 1/(pi hbar).
inline constexpr double kWignerBound = 1.0 / std::numbers::pi;

namespace detail {

// log|P g12| and sign for every (l1, l2), P the state prefactor.
template <class Real>
Real pi_as() {
  if constexpr (std::is_same_v<Real, BigFloat>) {
    return BigFloat::pi();
  } else {
    return std::numbers::pi_v<Real>;
  }
}

template <class Real>
void wigner_coefficients(const QuantumState& s, std::vector<double>& log_mag, std::vector<int>& sign) {
  const int n = s.n();
  const Real l(s.l());
  const Real top = s.kind() == Case::LI ? Real(n) + l + Real(0.5) : Real(n) + Real(2) * l + Real(1);
  using std::log;
  Real log_prefactor = log_abs_gamma(Real(n + 1)).first - log(pi_as<Real>());
  if (s.kind() == Case::LI) {
    log_prefactor += log(Real(2)) - log_abs_gamma(Real(n) + l + Real(1.5)).first;
  } else {
    log_prefactor -= log(Real(n) + l + Real(1)) + log_abs_gamma(Real(n) + Real(2) * l + Real(2)).first;
  }
  std::vector<Real> binom(n + 1);
  std::vector<Real> log_fact(n + 1);
  for (int k = 0; k <= n; ++k) {
    binom[k] = gen_binomial(top, n - k);
    log_fact[k] = log_abs_gamma(Real(k + 1)).first;
  }
  log_mag.assign(static_cast<std::size_t>((n + 1) * (n + 1)), 0.0);
  sign.assign(log_mag.size(), 1);
  for (int l1 = 0; l1 <= n; ++l1) {
    for (int l2 = 0; l2 <= n; ++l2) {
      const Real b = binom[l1] * binom[l2];
      const std::size_t idx = static_cast<std::size_t>(l1 * (n + 1) + l2);
      if (b == Real(0)) {
        log_mag[idx] = -std::numeric_limits<double>::infinity();
        continue;
      }
      using std::abs;
      const Real lm = log_prefactor + log(abs(b)) - log_fact[l1] - log_fact[l2];
      log_mag[idx] = to_double(lm);
      int sg = ((l1 + l2) % 2) ? -1 : 1;
      if (b < Real(0)) sg = -sg;
      sign[idx] = sg;
    }
  }
}

}  // namespace detail

/// Precomputed closed-form evaluator for one state (monotone branch).
class WignerClosedForm {
 public:
  struct Value {
    double real;
    double imag;   ///< residue of the double sum before it is discarded
    double noise;  ///< rounding scale: 32 eps sum_{l1,l2} |term| at real order
  };

  explicit WignerClosedForm(const QuantumState& s, PrecisionConfig prec = {}) : state_(s), prec_(prec) {
    if (s.profile().branch() != Branch::Monotone)
      throw DomainError("closed-form WDF is exact on the monotone branch only");
    if (prec.working_digits > 16) {
      PrecisionScope scope(prec);
      detail::wigner_coefficients<BigFloat>(s, log_mag_, sign_);
    } else {
      detail::wigner_coefficients<double>(s, log_mag_, sign_);
    }
    exponent_base_ = s.kind() == Case::LI ? s.l() + 1.5 : 2.0 * s.l() + 3.0;
    im_per_p_ = (s.kind() == Case::LI ? -2.0 : -4.0) / s.alpha();
  }

  const QuantumState& state() const { return state_; }
  PrecisionConfig precision() const { return prec_; }

  double bessel_argument(double mu) const { return state_.kind() == Case::LI ? mu * mu : 2.0 * mu; }

  /// W at (mu, p_k) for every p_k; one vector quadrature per call.
  std::vector<Value> column_at_mu(double mu, std::span<const double> ps) const {
    const int n = state_.n();
    const std::size_t rows = static_cast<std::size_t>(2 * n + 1);
    std::vector<Value> out(ps.size(), Value{0.0, 0.0, 0.0});
    const double z = bessel_argument(mu);
    if (!(z > 0.0) || !std::isfinite(z) || ps.empty()) return out;
    const double log_z = std::log(z);

    // Multipliers grouped by order d = l1 - l2 (row d + n).
    std::vector<CompensatedSum<double>> grouped(rows);
    std::vector<double> log_scale(rows, -std::numeric_limits<double>::infinity());
    std::vector<double> row_max(rows, -std::numeric_limits<double>::infinity());
    std::vector<double> terms((n + 1) * (n + 1));
    for (int l1 = 0; l1 <= n; ++l1) {
      for (int l2 = 0; l2 <= n; ++l2) {
        const std::size_t idx = static_cast<std::size_t>(l1 * (n + 1) + l2);
        terms[idx] = log_mag_[idx] + (exponent_base_ + l1 + l2) * log_z;
        const std::size_t r = static_cast<std::size_t>(l1 - l2 + n);
        row_max[r] = std::max(row_max[r], terms[idx]);
      }
    }
    std::vector<double> abs_sum(rows, 0.0);
    for (int l1 = 0; l1 <= n; ++l1) {
      for (int l2 = 0; l2 <= n; ++l2) {
        const std::size_t idx = static_cast<std::size_t>(l1 * (n + 1) + l2);
        const std::size_t r = static_cast<std::size_t>(l1 - l2 + n);
        if (!std::isfinite(terms[idx])) continue;
        const double rel = std::exp(terms[idx] - row_max[r]);
        abs_sum[r] += rel;
        grouped[r].add(sign_[idx] * rel);
      }
    }
    std::vector<double> re_orders, scales, multipliers;
    for (std::size_t r = 0; r < rows; ++r) {
      if (!(abs_sum[r] > 0.0) || !std::isfinite(row_max[r])) continue;
      log_scale[r] = row_max[r] + std::log(abs_sum[r]);
      re_orders.push_back(static_cast<double>(static_cast<int>(r) - n));
      scales.push_back(log_scale[r]);
      // grouped value relative to exp(log_scale)
      multipliers.push_back(grouped[r].value() / abs_sum[r]);
    }
    if (re_orders.empty()) return out;

    // One extra column at p = 0 bounds every |K| and sets the noise scale.
    const std::size_t cols = ps.size() + 1;
    std::vector<double> im_orders(cols, 0.0);
    for (std::size_t k = 0; k < ps.size(); ++k) im_orders[k] = im_per_p_ * ps[k];
    const auto kv = bessel_k_grid_trapezoid(re_orders, scales, im_orders, z, 1e-16);
    double magnitude = 0.0;
    for (std::size_t r = 0; r < re_orders.size(); ++r) magnitude += std::abs(kv[r * cols + ps.size()]);
    const double noise = 32.0 * std::numeric_limits<double>::epsilon() * magnitude;
    for (std::size_t k = 0; k < ps.size(); ++k) {
      CompensatedSum<double> re, im;
      for (std::size_t r = 0; r < re_orders.size(); ++r) {
        const std::complex<double> term = multipliers[r] * kv[r * cols + k];
        re.add(term.real());
        im.add(term.imag());
      }
      out[k] = {re.value(), im.value(), noise};
    }
    return out;
  }

  /// Checked value: throws RealityViolation if the residue exceeds 1e-10 (1 + |W|).
  double at_mu(double mu, double p) const {
    const double ps[1] = {p};
    return checked(column_at_mu(mu, ps)[0]);
  }

  double operator()(PhaseSpacePoint pt) const { return at_mu(state_.profile().mu_at(pt.x), pt.p); }

  static double checked(const Value& v) {
    if (!(std::abs(v.imag) < 1e-10 * (1.0 + std::abs(v.real))))
      throw RealityViolation("closed-form WDF imaginary residue " + std::to_string(v.imag) + " at W = " +
                             std::to_string(v.real));
    return v.real;
  }

 private:
  QuantumState state_;
  PrecisionConfig prec_;
  std::vector<double> log_mag_;
  std::vector<int> sign_;
  double exponent_base_ = 0.0;
  double im_per_p_ = 0.0;
};

/// Closed-form W(x, p).
inline double wdf_closed(const QuantumState& s, PhaseSpacePoint pt, PrecisionConfig prec = {}) {
  return WignerClosedForm(s, prec)(pt);
}

/// The defining integral, before division by 2 pi. The y-window is cut where
/// either eigenfunction factor leaves the region |psi| >= 1e-17 max|psi|.
inline quad::IntegralResult<std::complex<double>> wdf_defining_integral(const QuantumState& s, PhaseSpacePoint pt,
                                                                        double tol = 1e-12) {
  auto [x_lo, x_hi] = support_x(s, 1e-17);
  const double half_window = std::min(pt.x - x_lo, x_hi - pt.x);
  if (!(half_window > 0.0)) return {std::complex<double>(0.0, 0.0), 0.0, 0};
  const double y_max = 2.0 * half_window;
  auto integrand = [&](double y) -> std::complex<double> {
    const double prod = eigenfunction(s, pt.x - 0.5 * y) * eigenfunction(s, pt.x + 0.5 * y);
    return std::polar(prod, -pt.p * y);
  };
  quad::Options opt;
  opt.rel_tol = 1e-11;
  opt.abs_tol = 2.0 * std::numbers::pi * tol;
  opt.initial_panels = static_cast<int>(std::ceil(std::abs(pt.p) * y_max / std::numbers::pi)) + 2;
  opt.max_evaluations = std::size_t{1} << 17;
  return quad::integrate_interval(integrand, -y_max, y_max, opt);
}

/// W(x, p) from the defining integral; tol is absolute on W.
inline double wdf_numeric(const QuantumState& s, PhaseSpacePoint pt, double tol = 1e-12) {
  return wdf_defining_integral(s, pt, tol).value.real() / (2.0 * std::numbers::pi);
}

// ---------------------------------------------------------------------------
// Grids and marginals
// ---------------------------------------------------------------------------

struct PhaseSpaceGrid {
  QuantumState state;
  std::vector<double> x_axis;
  std::vector<double> p_axis;
  std::vector<double> values;  ///< row-major: values[ix * p_axis.size() + ip]
  double max_imag_seen = 0.0;
  int digits = 16;

  double at(std::size_t ix, std::size_t ip) const { return values[ix * p_axis.size() + ip]; }
  double max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  double min_value() const { return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end()); }
};

inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = lo;
    return v;
  }
  for (std::size_t i = 0; i < count; ++i)
    v[i] = (i + 1 == count) ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return v;
}

/// Closed-form W on an nx-by-np lattice, parallel over x columns.
inline PhaseSpaceGrid evaluate_grid(const QuantumState& s, std::pair<double, double> x_range,
                                    std::pair<double, double> p_range, std::size_t nx, std::size_t np,
                                    PrecisionConfig prec = {}, unsigned threads = default_thread_count()) {
  if (nx < 2 || np < 2) throw DomainError("evaluate_grid needs nx, np >= 2");
  if (!(x_range.first < x_range.second) || !(p_range.first < p_range.second))
    throw DomainError("evaluate_grid needs ascending ranges");
  const WignerClosedForm wdf(s, prec);
  PhaseSpaceGrid g{s, linspace(x_range.first, x_range.second, nx), linspace(p_range.first, p_range.second, np),
                   std::vector<double>(nx * np, 0.0), 0.0, prec.working_digits};
  std::vector<double> imag(nx, 0.0);
  parallel_for(
      nx,
      [&](std::size_t ix) {
        const auto col = wdf.column_at_mu(s.profile().mu_at(g.x_axis[ix]), g.p_axis);
        double worst = 0.0;
        for (std::size_t ip = 0; ip < np; ++ip) {
          g.values[ix * np + ip] = WignerClosedForm::checked(col[ip]);
          worst = std::max(worst, std::abs(col[ip].imag));
        }
        imag[ix] = worst;
      },
      threads);
  g.max_imag_seen = *std::max_element(imag.begin(), imag.end());
  return g;
}

/// Position marginal int W dp per x column (trapezoid in p). Throws
/// TruncationError if |W| >= 1e-12 on either p boundary.
inline std::vector<double> marginal_position(const PhaseSpaceGrid& g) {
  const std::size_t np = g.p_axis.size();
  std::vector<double> out(g.x_axis.size(), 0.0);
  for (std::size_t ix = 0; ix < g.x_axis.size(); ++ix) {
    if (std::abs(g.at(ix, 0)) >= 1e-12 || std::abs(g.at(ix, np - 1)) >= 1e-12)
      throw TruncationError("p range too narrow: |W| = " +
                            std::to_string(std::max(std::abs(g.at(ix, 0)), std::abs(g.at(ix, np - 1)))) +
                            " on the boundary at x = " + std::to_string(g.x_axis[ix]));
    CompensatedSum<double> sum;
    for (std::size_t ip = 0; ip + 1 < np; ++ip)
      sum.add(0.5 * (g.at(ix, ip) + g.at(ix, ip + 1)) * (g.p_axis[ip + 1] - g.p_axis[ip]));
    out[ix] = sum.value();
  }
  return out;
}

/// Smallest p_max (found by geometric growth) with |W(mu, +-p)| below the
/// threshold at 24 mu samples across [mu_lo, mu_hi]. The threshold is the
/// largest of abs_threshold, 1e-12 max|W(mu, 0)| and 10x the rounding
/// scale of the closed-form sum, which for large l sits well above 1e-14.
inline double momentum_extent(const WignerClosedForm& wdf, double mu_lo, double mu_hi, double abs_threshold = 1e-14) {
  constexpr int kSamples = 24;
  std::vector<double> mus(kSamples);
  double peak = 0.0, noise = 0.0;
  const double zero[1] = {0.0};
  for (int i = 0; i < kSamples; ++i) {
    mus[i] = mu_lo * std::pow(mu_hi / mu_lo, (i + 0.5) / kSamples);
    const auto v = wdf.column_at_mu(mus[i], zero)[0];
    peak = std::max(peak, std::abs(v.real));
    noise = std::max(noise, v.noise);
  }
  const double threshold = std::max({abs_threshold, 1e-12 * peak, 10.0 * noise});
  double p = 0.5;
  for (int iter = 0; iter < 60; ++iter, p *= 1.25) {
    const double ps[2] = {-p, p};
    bool small = true;
    for (double mu : mus) {
      for (const auto& v : wdf.column_at_mu(mu, ps)) small = small && std::abs(v.real) < threshold;
      if (!small) break;
    }
    if (small) return p;
  }
  throw TruncationError("no momentum cutoff found below p = " + std::to_string(p));
}

struct PhaseSpaceWindow {
  double mu_lo, mu_hi;
  double p_max;
};

/// Integration window: mu-support where |psi| >= 1e-9 max|psi| (discarded
/// position mass far below 1e-9) and |p| <= p_max from momentum_extent.
inline PhaseSpaceWindow phase_space_window(const WignerClosedForm& wdf) {
  auto [mu_lo, mu_hi] = support_mu(wdf.state(), 1e-9);
  return {mu_lo, mu_hi, momentum_extent(wdf, mu_lo, mu_hi)};
}

/// Momentum marginal int W(x, p) dx, integrated in mu with dx = 2 dmu/(alpha mu).
inline double marginal_momentum(const WignerClosedForm& wdf, double p, const PhaseSpaceWindow& win) {
  const double alpha = wdf.state().alpha();
  quad::Options opt;
  opt.rel_tol = 1e-9;
  opt.abs_tol = 1e-13;
  auto r = quad::integrate_interval([&](double mu) { return wdf.at_mu(mu, p) * 2.0 / (alpha * mu); }, win.mu_lo,
                                    win.mu_hi, opt);
  return r.value;
}

namespace detail {

// Trapezoid weights on a uniform p lattice of `count` nodes over [-p_max, p_max].
inline std::vector<double> trapezoid_weights(std::size_t count, double p_max) {
  const double h = 2.0 * p_max / static_cast<double>(count - 1);
  std::vector<double> w(count, h);
  w.front() = w.back() = 0.5 * h;
  return w;
}

}  // namespace detail

/// Uniform p lattice for phase-space integrals. W is analytic and decays
/// exponentially in p, so the trapezoid rule converges geometrically; the
/// node count doubles until the W sums agree with the half lattice to 1e-12
/// (p^2 W sums to 1e-9 relative), or to the rounding scale of the sum if
/// larger, at several mu across the window.
inline std::vector<double> momentum_lattice(const WignerClosedForm& wdf, const PhaseSpaceWindow& win) {
  constexpr int kProbes = 7;
  for (std::size_t count = 65; count <= 16385; count = 2 * count - 1) {
    const auto ps = linspace(-win.p_max, win.p_max, count);
    const auto fine = detail::trapezoid_weights(count, win.p_max);
    const auto coarse = detail::trapezoid_weights((count + 1) / 2, win.p_max);
    bool converged = true;
    for (int i = 0; i < kProbes && converged; ++i) {
      const double mu = win.mu_lo * std::pow(win.mu_hi / win.mu_lo, (i + 0.5) / kProbes);
      const auto col = wdf.column_at_mu(mu, ps);
      double f0 = 0, f2 = 0, c0 = 0, c2 = 0;
      const double floor = col.empty() ? 0.0 : 10.0 * col[0].noise * 2.0 * win.p_max;
      for (std::size_t k = 0; k < count; ++k) {
        f0 += fine[k] * col[k].real;
        f2 += fine[k] * col[k].real * ps[k] * ps[k];
        if (k % 2 == 0) {
          c0 += coarse[k / 2] * col[k].real;
          c2 += coarse[k / 2] * col[k].real * ps[k] * ps[k];
        }
      }
      converged = std::abs(f0 - c0) < std::max(1e-12, floor) &&
                  std::abs(f2 - c2) < std::max(1e-9 * std::max(1.0, std::abs(f2)), floor * win.p_max * win.p_max);
    }
    if (converged) return ps;
  }
  throw TruncationError("momentum lattice did not converge");
}

/// int dx dp W(x, p) g(mu, p) for a vector of weights g, integrated in
/// (mu, p): adaptive Gauss-Kronrod over mu with dx = 2 dmu/(alpha mu) and
/// the trapezoid rule over the momentum lattice. g(mu, p, out) fills
/// out[0..dims).
template <class G>
quad::IntegralResult<std::vector<double>> phase_space_integral(const WignerClosedForm& wdf, std::size_t dims, G&& g,
                                                               double rel_tol = 1e-10, double abs_tol = 1e-11) {
  const auto win = phase_space_window(wdf);
  const auto ps = momentum_lattice(wdf, win);
  const auto w = detail::trapezoid_weights(ps.size(), win.p_max);
  const double alpha = wdf.state().alpha();
  std::vector<double> gk(dims);
  quad::Options opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = abs_tol;
  auto integrand = [&](double mu) {
    std::vector<double> acc(dims, 0.0);
    const auto col = wdf.column_at_mu(mu, ps);
    const double jac = 2.0 / (alpha * mu);
    for (std::size_t k = 0; k < ps.size(); ++k) {
      const double wk = w[k] * jac * WignerClosedForm::checked(col[k]);
      if (wk == 0.0) continue;
      g(mu, ps[k], gk.data());
      for (std::size_t d = 0; d < dims; ++d) acc[d] += wk * gk[d];
    }
    return acc;
  };
  return quad::integrate_interval(integrand, win.mu_lo, win.mu_hi, opt);
}

/// Phase-space integral of W.
inline quad::IntegralResult<double> normalization_integral(const QuantumState& s, PrecisionConfig prec = {}) {
  const WignerClosedForm wdf(s, prec);
  auto r = phase_space_integral(wdf, 1, [](double, double, double* out) { out[0] = 1.0; });
  return {r.value[0], r.error_estimate, r.evaluations};
}

inline double normalization(const QuantumState& s, PrecisionConfig prec = {}) {
  return normalization_integral(s, prec).value;
}

}  // namespace pdem
