#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pdem/bigfloat.hpp"
#include "pdem/errors.hpp"
#include "pdem/quadrature.hpp"

namespace pdem {

// ---------------------------------------------------------------------------
// Summation
// ---------------------------------------------------------------------------

/// Neumaier-compensated accumulator.
template <class Real>
class CompensatedSum {
 public:
  void add(const Real& x) {
    const Real t = sum_ + x;
    if (abs_of(sum_) >= abs_of(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  Real value() const { return sum_ + comp_; }

 private:
  static Real abs_of(const Real& x) {
    using std::abs;
    return abs(x);
  }
  Real sum_ = Real(0);
  Real comp_ = Real(0);
};

// ---------------------------------------------------------------------------
// Log-gamma
// ---------------------------------------------------------------------------

namespace detail {

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && std::floor(x) == x; }

// Stirling series for Re z >= 15.
inline std::complex<double> stirling_ln_gamma(std::complex<double> z) {
  // B_{2k} / (2k (2k-1)), k = 1..8
  static constexpr double c[8] = {1.0 / 12.0,         -1.0 / 360.0,         1.0 / 1260.0,
                                  -1.0 / 1680.0,      1.0 / 1188.0,         -691.0 / 360360.0,
                                  1.0 / 156.0,        -3617.0 / 122400.0};
  const std::complex<double> inv = 1.0 / z;
  const std::complex<double> inv2 = inv * inv;
  std::complex<double> series = 0.0;
  for (int k = 7; k >= 0; --k) series = series * inv2 + c[k];
  series *= inv;
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

}  // namespace detail

/// Log-gamma for complex argument: the branch continuous off the negative
/// real axis, real on the positive real axis.
inline std::complex<double> ln_gamma(std::complex<double> z) {
  if (z.imag() == 0.0 && detail::is_nonpositive_integer(z.real()))
    throw PoleError("ln_gamma pole at " + std::to_string(z.real()));
  std::complex<double> shift = 0.0;
  while (z.real() < 15.0) {
    shift += std::log(z);
    z += 1.0;
  }
  return detail::stirling_ln_gamma(z) - shift;
}

/// Log-gamma for real argument. The imaginary part is pi where Gamma(x) < 0.
inline std::complex<double> ln_gamma(double x) {
  if (detail::is_nonpositive_integer(x)) throw PoleError("ln_gamma pole at " + std::to_string(x));
  double shift = 0.0;
  int negative_factors = 0;
  while (x < -14.0) {
    shift += std::log(std::abs(x));
    ++negative_factors;
    x += 1.0;
  }
  double re;
  if (x < 15.0) {
    // Gamma stays below 1e11 here, and one log avoids the cancellation a
    // shifted Stirling series would suffer.
    const double g = std::tgamma(x);
    if (g < 0.0) ++negative_factors;
    re = std::log(std::abs(g)) - shift;
  } else {
    re = detail::stirling_ln_gamma(x).real() - shift;
  }
  return {re, (negative_factors % 2) ? std::numbers::pi : 0.0};
}

/// log|Gamma(x)| and sign(Gamma(x)) in the precision of Real.
inline std::pair<double, int> log_abs_gamma(double x) {
  const auto g = ln_gamma(x);
  return {g.real(), g.imag() != 0.0 ? -1 : 1};
}
inline std::pair<BigFloat, int> log_abs_gamma(const BigFloat& x) { return lgamma_signed(x); }

/// ln Gamma evaluated at working precision; real part returned as double.
inline std::complex<double> ln_gamma(double x, PrecisionConfig prec) {
  if (prec.working_digits <= 16) return ln_gamma(x);
  PrecisionScope scope(prec);
  auto [v, s] = lgamma_signed(BigFloat(x));
  return {v.to_double(), s < 0 ? std::numbers::pi : 0.0};
}

// ---------------------------------------------------------------------------
// Binomials, Laguerre, terminating 2F1
// ---------------------------------------------------------------------------

/// Falling-factorial binomial a(a-1)...(a-k+1)/k! for real a.
template <class Real>
Real gen_binomial(const Real& a, int k) {
  if (k < 0) throw DomainError("gen_binomial needs k >= 0");
  Real falling(1);
  Real factorial(1);
  for (int j = 0; j < k; ++j) {
    falling *= a - Real(j);
    factorial *= Real(j + 1);
  }
  return falling / factorial;
}

/// Generalized Laguerre polynomial by its explicit series.
template <class Real>
Real laguerre(int n, const Real& a, const Real& x) {
  if (n < 0) throw DomainError("laguerre needs n >= 0");
  CompensatedSum<Real> sum;
  Real power(1);      // x^k / k!
  const Real top = Real(n) + a;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) power = power * x / Real(k);
    Real term = gen_binomial(top, n - k) * power;
    sum.add((k % 2) ? Real(-term) : term);
  }
  return sum.value();
}

/// 2F1(-M, b; c; x) as its finite sum of M+1 terms.
template <class Real>
Real hyp2f1_terminating(int M, const Real& b, const Real& c, const Real& x) {
  if (M < 0) throw DomainError("hyp2f1_terminating needs M >= 0");
  for (int j = 0; j < M; ++j) {
    if (c + Real(j) == Real(0))
      throw PoleError("hyp2f1_terminating: (c)_k vanishes at k=" + std::to_string(j + 1));
  }
  CompensatedSum<Real> sum;
  Real term(1);
  sum.add(term);
  for (int k = 0; k < M; ++k) {
    term = term * Real(k - M) * (b + Real(k)) / ((c + Real(k)) * Real(k + 1)) * x;
    sum.add(term);
  }
  return sum.value();
}

// ---------------------------------------------------------------------------
// Partitions
// ---------------------------------------------------------------------------

/// Multiplicities i_1..i_m with sum(nu * i_nu) = m.
struct PartitionVector {
  std::vector<int> multiplicities;

  int parts() const {
    int total = 0;
    for (int i : multiplicities) total += i;
    return total;
  }
  int weight() const {
    int w = 0;
    for (std::size_t nu = 0; nu < multiplicities.size(); ++nu) w += static_cast<int>(nu + 1) * multiplicities[nu];
    return w;
  }
  friend bool operator==(const PartitionVector&, const PartitionVector&) = default;
};

namespace detail {
inline void enumerate_partitions(int m, std::size_t nu, int remaining, std::vector<int>& current,
                                 std::vector<PartitionVector>& out) {
  if (nu == static_cast<std::size_t>(m)) {
    if (remaining == 0) out.push_back({current});
    return;
  }
  const int part = static_cast<int>(nu) + 1;
  for (int i = remaining / part; i >= 0; --i) {
    current[nu] = i;
    enumerate_partitions(m, nu + 1, remaining - i * part, current, out);
  }
  current[nu] = 0;
}
}  // namespace detail

/// Every partition vector of m, in descending lexicographic order of
/// (i_1, i_2, ..., i_m).
inline std::vector<PartitionVector> partitions(int m) {
  if (m < 0) throw DomainError("partitions needs m >= 0");
  std::vector<PartitionVector> out;
  if (m == 0) {
    out.push_back({});
    return out;
  }
  std::vector<int> current(static_cast<std::size_t>(m), 0);
  detail::enumerate_partitions(m, 0, m, current, out);
  return out;
}

// ---------------------------------------------------------------------------
// Modified Bessel function of the third kind, complex order
// ---------------------------------------------------------------------------

namespace detail {

// Smallest T such that log_scale + |d| t - z cosh t < floor for all t >= T.
inline double bessel_cutoff(double log_scale, double abs_re, double z, double floor) {
  auto g = [&](double t) { return log_scale + abs_re * t - z * std::cosh(t); };
  const double peak = std::asinh(abs_re / z);
  if (g(peak) < floor) return 0.0;
  double lo = peak, hi = peak + 1.0;
  while (g(hi) >= floor) {
    lo = hi;
    hi = 2.0 * hi + 1.0;
  }
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) >= floor ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace detail

/// exp(s_r) K_{d_r + i c_k}(z) for every (r, k), row-major in r. The
/// integrand of row r is exp(s_r) e^{-z cosh t} cosh(nu t), so `opt.abs_tol`
/// is an absolute tolerance on the scaled values. The integral over t in
/// [0, t_max] is truncated where every scaled integrand envelope falls below
/// abs_tol * e^{-20}.
inline std::vector<std::complex<double>> bessel_k_grid_scaled(std::span<const double> re_orders,
                                                       std::span<const double> log_scales,
                                                       std::span<const double> im_orders, double z,
                                                       const quad::Options& opt = {}) {
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("bessel_k needs z > 0, got " + std::to_string(z));
  if (re_orders.size() != log_scales.size()) throw DomainError("bessel_k_grid: one log-scale per real order");
  const std::size_t rows = re_orders.size();
  const std::size_t cols = im_orders.size();
  std::vector<std::complex<double>> out(rows * cols);
  if (rows == 0 || cols == 0) return out;

  const double floor = std::log(opt.abs_tol) - 20.0;
  double t_max = 0.0;
  double max_im = 0.0;
  for (std::size_t r = 0; r < rows; ++r)
    t_max = std::max(t_max, detail::bessel_cutoff(log_scales[r], std::abs(re_orders[r]), z, floor));
  for (double c : im_orders) max_im = std::max(max_im, std::abs(c));
  if (t_max == 0.0) return out;  // every row is below tolerance

  quad::Options o = opt;
  const double oscillations = max_im * t_max / (2.0 * std::numbers::pi);
  o.initial_panels = std::clamp(static_cast<int>(std::ceil(oscillations)) + 1, 1, 1024);
  o.max_evaluations = std::max<std::size_t>(opt.max_evaluations, static_cast<std::size_t>(o.initial_panels) * 15 * 8);

  std::vector<double> cs(cols), sn(cols);
  auto integrand = [&](double t) {
    std::vector<std::complex<double>> v(rows * cols);
    const double base = -z * std::cosh(t);
    for (std::size_t k = 0; k < cols; ++k) {
      cs[k] = std::cos(im_orders[k] * t);
      sn[k] = std::sin(im_orders[k] * t);
    }
    for (std::size_t r = 0; r < rows; ++r) {
      const double dt = re_orders[r] * t;
      const double a = std::exp(log_scales[r] + base + dt);
      const double b = std::exp(log_scales[r] + base - dt);
      const double even = 0.5 * (a + b);
      const double odd = 0.5 * (a - b);
      for (std::size_t k = 0; k < cols; ++k) v[r * cols + k] = {even * cs[k], odd * sn[k]};
    }
    return v;
  };
  return quad::integrate_interval(integrand, 0.0, t_max, o).value;
}

/// Same values as bessel_k_grid_scaled, by the trapezoid rule on a uniform
/// t lattice. The integrand is even and analytic in the strip |Im t| < pi/2,
/// so the rule converges geometrically; the step is chosen so the strip
/// bound e^{-2 pi a / h} times the integrand growth at Im t = a stays below
/// e^{-40} of the row scale. Much cheaper than adaptive panels when many
/// columns share the lattice; no error estimate is returned.
inline std::vector<std::complex<double>> bessel_k_grid_trapezoid(std::span<const double> re_orders,
                                                                 std::span<const double> log_scales,
                                                                 std::span<const double> im_orders, double z,
                                                                 double abs_tol = 1e-15) {
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("bessel_k needs z > 0, got " + std::to_string(z));
  if (re_orders.size() != log_scales.size()) throw DomainError("bessel_k_grid: one log-scale per real order");
  const std::size_t rows = re_orders.size();
  const std::size_t cols = im_orders.size();
  std::vector<std::complex<double>> out(rows * cols);
  if (rows == 0 || cols == 0) return out;

  const double floor = std::log(abs_tol) - 20.0;
  double t_max = 0.0, max_im = 0.0, max_re = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    t_max = std::max(t_max, detail::bessel_cutoff(log_scales[r], std::abs(re_orders[r]), z, floor));
    max_re = std::max(max_re, std::abs(re_orders[r]));
  }
  for (double c : im_orders) max_im = std::max(max_im, std::abs(c));
  if (t_max == 0.0) return out;

  const double target = -std::log(abs_tol) + 6.0;
  double h = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double a = 0.075 * i;  // strip half-width, up to 1.5 < pi/2
    const double growth = max_im * a + z * (1.0 - std::cos(a)) - max_re * std::log(std::cos(a));
    h = std::max(h, 2.0 * std::numbers::pi * a / (target + growth));
  }
  const auto nodes = static_cast<std::size_t>(std::ceil(t_max / h)) + 1;

  std::vector<double> re_acc(rows * cols, 0.0), im_acc(rows * cols, 0.0);
  std::vector<double> cs(cols), sn(cols), even(rows), odd(rows);
  for (std::size_t j = 0; j < nodes; ++j) {
    const double t = h * static_cast<double>(j);
    const double weight = j == 0 ? 0.5 : 1.0;
    const double base = -z * std::cosh(t);
    bool any = false;
    for (std::size_t r = 0; r < rows; ++r) {
      const double dt = re_orders[r] * t;
      const double a = std::exp(log_scales[r] + base + dt);
      const double b = std::exp(log_scales[r] + base - dt);
      even[r] = 0.5 * weight * (a + b);
      odd[r] = 0.5 * weight * (a - b);
      any = any || even[r] != 0.0;
    }
    if (!any) continue;
    for (std::size_t k = 0; k < cols; ++k) {
      cs[k] = std::cos(im_orders[k] * t);
      sn[k] = std::sin(im_orders[k] * t);
    }
    for (std::size_t r = 0; r < rows; ++r) {
      double* re = re_acc.data() + r * cols;
      double* im = im_acc.data() + r * cols;
      for (std::size_t k = 0; k < cols; ++k) {
        re[k] += even[r] * cs[k];
        im[k] += odd[r] * sn[k];
      }
    }
  }
  for (std::size_t i = 0; i < rows * cols; ++i) out[i] = {h * re_acc[i], h * im_acc[i]};
  return out;
}

/// K_{d_r + i c_k}(z), unscaled; see bessel_k_grid_scaled for the role of s_r.
inline std::vector<std::complex<double>> bessel_k_grid(std::span<const double> re_orders,
                                                       std::span<const double> log_scales,
                                                       std::span<const double> im_orders, double z,
                                                       const quad::Options& opt = {}) {
  auto out = bessel_k_grid_scaled(re_orders, log_scales, im_orders, z, opt);
  const std::size_t cols = im_orders.size();
  for (std::size_t r = 0; r < re_orders.size(); ++r) {
    const double unscale = std::exp(-log_scales[r]);
    for (std::size_t k = 0; k < cols; ++k) out[r * cols + k] *= unscale;
  }
  return out;
}

/// K_nu(z) for complex order via int_0^inf e^{-z cosh t} cosh(nu t) dt.
inline std::complex<double> bessel_k(std::complex<double> nu, double z, const quad::Options& opt = {}) {
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("bessel_k needs z > 0, got " + std::to_string(z));
  const double re[1] = {nu.real()};
  const double im[1] = {nu.imag()};
  // Scaling by e^{z} keeps the absolute tolerance meaningful for large z.
  const double scale[1] = {z};
  return bessel_k_grid(re, scale, im, z, opt)[0];
}

}  // namespace pdem
