#pragma once

// Adaptive Gauss-Kronrod integration over finite intervals, half-lines, the
// whole line and rectangles. Integrands may return double, std::complex<double>
// or a std::vector of either; vector integrands share one panel set and are
// refined until the largest component error meets the tolerance.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <string>
#include <type_traits>
#include <vector>

#include "pdem/errors.hpp"

namespace pdem::quad {

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  std::size_t max_evaluations = std::size_t{1} << 15;
  /// Equal-width panels to start from; callers set this to the number of
  /// oscillations over the interval.
  int initial_panels = 1;
};

template <class V = std::complex<double>>
struct IntegralResult {
  V value{};
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

struct Region {
  double x_lo, x_hi;
  double p_lo, p_hi;
};

namespace detail {

inline double norm(double v) { return std::abs(v); }
inline double norm(const std::complex<double>& v) { return std::abs(v); }
template <class T>
double norm(const std::vector<T>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, norm(x));
  return m;
}

inline double dev_norm(double a, double b) { return std::abs(a - b); }
inline double dev_norm(const std::complex<double>& a, const std::complex<double>& b) { return std::abs(a - b); }
template <class T>
double dev_norm(const std::vector<T>& a, const std::vector<T>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, dev_norm(a[i], b[i]));
  return m;
}

inline bool finite(double v) { return std::isfinite(v); }
inline bool finite(const std::complex<double>& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }
template <class T>
bool finite(const std::vector<T>& v) {
  return std::all_of(v.begin(), v.end(), [](const T& x) { return finite(x); });
}

template <class V>
V scaled(V v, double w) {
  if constexpr (std::is_arithmetic_v<V> || std::is_same_v<V, std::complex<double>>) {
    return v * w;
  } else {
    for (auto& x : v) x *= w;
    return v;
  }
}

template <class V>
void add_scaled(V& acc, const V& x, double w) {
  if constexpr (std::is_arithmetic_v<V> || std::is_same_v<V, std::complex<double>>) {
    acc += w * x;
  } else {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * x[i];
  }
}

template <class V>
V zero_like(const V& v) {
  return scaled(v, 0.0);
}

// Kronrod 15 abscissae (descending), Kronrod weights, and the embedded
// 7-point Gauss weights (for abscissae 1, 3, 5 and the centre).
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                  0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V>
struct Panel {
  double a, b;
  V value;
  double error;
  bool roundoff_limited;
};

template <class V, class F>
Panel<V> gauss_kronrod_15(F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  V fc = f(centre);
  V fv1[7] = {}, fv2[7] = {};
  V resk = scaled(fc, kWgk[7]);
  V resg = scaled(fc, kWg[3]);
  double resabs = kWgk[7] * norm(fc);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv1[j] = f(centre - dx);
    fv2[j] = f(centre + dx);
    add_scaled(resk, fv1[j], kWgk[j]);
    add_scaled(resk, fv2[j], kWgk[j]);
    if (j % 2 == 1) {
      add_scaled(resg, fv1[j], kWg[j / 2]);
      add_scaled(resg, fv2[j], kWg[j / 2]);
    }
    resabs += kWgk[j] * (norm(fv1[j]) + norm(fv2[j]));
  }
  const V mean = scaled(resk, 0.5);
  double resasc = kWgk[7] * dev_norm(fc, mean);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (dev_norm(fv1[j], mean) + dev_norm(fv2[j], mean));

  const double h = std::abs(half);
  resabs *= h;
  resasc *= h;
  double err = dev_norm(resk, resg) * h;
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
  const bool limited = err <= floor;
  return Panel<V>{a, b, scaled(resk, half), std::max(err, floor), limited};
}

template <class F>
using value_of = std::decay_t<std::invoke_result_t<F&, double>>;

}  // namespace detail

/// Adaptive G7/K15 on a finite interval [a, b].
template <class F>
auto integrate_interval(F&& f, double a, double b, const Options& opt = {})
    -> IntegralResult<detail::value_of<F>> {
  using V = detail::value_of<F>;
  using detail::Panel;
  if (!(opt.rel_tol > 0.0) || !(opt.abs_tol > 0.0)) throw DomainError("tolerances must be positive");
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("integrate_interval needs finite limits");

  std::size_t evaluations = 0;
  auto counted = [&](double x) -> V {
    ++evaluations;
    return f(x);
  };

  if (a == b) {
    V z = detail::zero_like(counted(a));
    return {z, 0.0, evaluations};
  }

  const int n0 = std::max(1, opt.initial_panels);
  std::vector<Panel<V>> done;
  auto worse = [](const Panel<V>& l, const Panel<V>& r) { return l.error < r.error; };
  std::priority_queue<Panel<V>, std::vector<Panel<V>>, decltype(worse)> active(worse);

  V total{};
  bool have_total = false;
  double err_total = 0.0;
  double err_active = 0.0;
  auto admit = [&](Panel<V>&& p) {
    if (!detail::finite(p.value) || !std::isfinite(p.error))
      throw NonConvergence("integrand is not finite on [" + std::to_string(p.a) + ", " + std::to_string(p.b) + "]");
    if (have_total) {
      detail::add_scaled(total, p.value, 1.0);
    } else {
      total = p.value;
      have_total = true;
    }
    err_total += p.error;
    if (p.roundoff_limited) {
      done.push_back(std::move(p));
    } else {
      err_active += p.error;
      active.push(std::move(p));
    }
  };

  const double width = (b - a) / n0;
  for (int i = 0; i < n0; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == n0) ? b : a + (i + 1) * width;
    admit(detail::gauss_kronrod_15<V>(counted, lo, hi));
  }

  while (true) {
    const double tol = std::max(opt.rel_tol * detail::norm(total), opt.abs_tol);
    if (err_total <= tol || err_active <= tol || active.empty()) break;
    if (evaluations + 30 > opt.max_evaluations)
      throw NonConvergence("evaluation budget of " + std::to_string(opt.max_evaluations) +
                           " exhausted; error estimate " + std::to_string(err_total) + " > " + std::to_string(tol));
    Panel<V> worst = active.top();
    active.pop();
    err_active -= worst.error;
    err_total -= worst.error;
    detail::add_scaled(total, worst.value, -1.0);
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Cannot split further in double precision.
      worst.roundoff_limited = true;
      detail::add_scaled(total, worst.value, 1.0);
      err_total += worst.error;
      done.push_back(std::move(worst));
      continue;
    }
    admit(detail::gauss_kronrod_15<V>(counted, worst.a, mid));
    admit(detail::gauss_kronrod_15<V>(counted, mid, worst.b));
  }

  // Re-sum from panels to shed drift from the running updates.
  V sum = detail::zero_like(total);
  double err = 0.0;
  for (const auto& p : done) {
    detail::add_scaled(sum, p.value, 1.0);
    err += p.error;
  }
  while (!active.empty()) {
    detail::add_scaled(sum, active.top().value, 1.0);
    err += active.top().error;
    active.pop();
  }
  return {sum, err, evaluations};
}

/// Integral over [0, inf) via t = s*u/(1-u).
template <class F>
auto integrate_halfline(F&& f, const Options& opt = {}, double scale = 1.0)
    -> IntegralResult<detail::value_of<F>> {
  using V = detail::value_of<F>;
  auto mapped = [&](double u) -> V {
    const double one_minus = 1.0 - u;
    double t = scale * u / one_minus;
    if (!std::isfinite(t)) t = std::numeric_limits<double>::max();
    V y = f(t);
    if (detail::norm(y) == 0.0) return y;
    return detail::scaled(std::move(y), scale / (one_minus * one_minus));
  };
  return integrate_interval(mapped, 0.0, 1.0, opt);
}

/// Integral over the whole real line via t = s*u/(1-u^2).
template <class F>
auto integrate_line(F&& f, const Options& opt = {}, double scale = 1.0)
    -> IntegralResult<detail::value_of<F>> {
  using V = detail::value_of<F>;
  auto mapped = [&](double u) -> V {
    const double d = 1.0 - u * u;
    double t = scale * u / d;
    if (!std::isfinite(t)) t = std::copysign(std::numeric_limits<double>::max(), u);
    V y = f(t);
    if (detail::norm(y) == 0.0) return y;
    return detail::scaled(std::move(y), scale * (1.0 + u * u) / (d * d));
  };
  Options o = opt;
  o.initial_panels = std::max(2, opt.initial_panels + opt.initial_panels % 2);
  return integrate_interval(mapped, -1.0, 1.0, o);
}

/// Nested adaptive integral of f(x, p) over a finite rectangle. The error
/// estimate combines the outer estimate with the worst inner estimate
/// times the outer width.
template <class F>
auto integrate_2d(F&& f, const Region& region, const Options& opt = {}, int inner_panels = 1)
    -> IntegralResult<std::decay_t<std::invoke_result_t<F&, double, double>>> {
  using V = std::decay_t<std::invoke_result_t<F&, double, double>>;
  if (!std::isfinite(region.x_lo) || !std::isfinite(region.x_hi) || !std::isfinite(region.p_lo) ||
      !std::isfinite(region.p_hi))
    throw DomainError("integrate_2d needs a finite region");
  const double x_width = std::abs(region.x_hi - region.x_lo);
  Options inner = opt;
  inner.rel_tol = opt.rel_tol * 0.1;
  inner.abs_tol = opt.abs_tol * 0.1 / std::max(x_width, 1e-300);
  inner.initial_panels = inner_panels;
  Options outer = opt;

  std::size_t evaluations = 0;
  double worst_inner = 0.0;
  auto column = [&](double x) -> V {
    auto r = integrate_interval([&](double p) { return f(x, p); }, region.p_lo, region.p_hi, inner);
    evaluations += r.evaluations;
    worst_inner = std::max(worst_inner, r.error_estimate);
    return r.value;
  };
  auto r = integrate_interval(column, region.x_lo, region.x_hi, outer);
  return {r.value, r.error_estimate + x_width * worst_inner, evaluations};
}

}  // namespace pdem::quad
