#pragma once

// Bound states of the BenDaniel-Duke equation
//   -psi''/2 + (m'/2m) psi' + m V psi = m E psi
// for the two generalized-Laguerre families with m(x) = e^{-alpha x}:
//   LI   psi = N mu^{l+3/2} e^{-mu^2/2} L_n^{(l+1/2)}(mu^2),     E = 2n
//   LIII psi = N (2mu)^{l+3/2} e^{-mu} L_n^{(2l+1)}(2mu),        b = n+l+1
// with omega = 1 throughout.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pdem/errors.hpp"
#include "pdem/massmodel.hpp"
#include "pdem/specfun.hpp"

namespace pdem {

enum class Case { LI, LIII };

inline const char* to_string(Case c) { return c == Case::LI ? "I" : "III"; }

/// (case, n, l, profile). Construction rejects l in the excluded sets.
class QuantumState {
 public:
  QuantumState(Case c, int n, double l, MassProfile profile) : case_(c), n_(n), l_(l), profile_(profile) {
    if (n < 0) throw DomainError("n must be nonnegative, got " + std::to_string(n));
    if (!std::isfinite(l)) throw DomainError("l must be finite");
    if (c == Case::LI && !(l > -1.5)) throw DomainError("case LI needs l > -3/2, got " + std::to_string(l));
    if (c == Case::LIII && !(l > -1.0)) throw DomainError("case LIII needs l > -1, got " + std::to_string(l));
  }

  Case kind() const { return case_; }
  int n() const { return n_; }
  double l() const { return l_; }
  const MassProfile& profile() const { return profile_; }
  double alpha() const { return profile_.alpha(); }

  /// Laguerre parameter: l + 1/2 (LI) or 2l + 1 (LIII).
  double laguerre_order() const { return case_ == Case::LI ? l_ + 0.5 : 2.0 * l_ + 1.0; }

 private:
  Case case_;
  int n_;
  double l_;
  MassProfile profile_;
};

/// log of the normalization constant.
inline double log_normalization_constant(const QuantumState& s) {
  const double n = s.n(), l = s.l();
  const double log_nfact = log_abs_gamma(n + 1.0).first;
  if (s.kind() == Case::LI) {
    return 0.5 * (std::log(s.alpha()) + log_nfact - log_abs_gamma(n + l + 1.5).first);
  }
  return 0.5 * (std::log(s.alpha()) + log_nfact - std::log(4.0 * (n + l + 1.0)) - log_abs_gamma(n + 2.0 * l + 2.0).first);
}

inline double normalization_constant(const QuantumState& s) { return std::exp(log_normalization_constant(s)); }

/// psi as a function of mu > 0 (log-space assembly, safe for large l).
inline double eigenfunction_of_mu(const QuantumState& s, double mu) {
  if (!(mu > 0.0)) return 0.0;
  const double a = s.laguerre_order();
  double arg, log_env;
  if (s.kind() == Case::LI) {
    arg = mu * mu;
    log_env = (s.l() + 1.5) * std::log(mu) - 0.5 * arg;
  } else {
    arg = 2.0 * mu;
    log_env = (s.l() + 1.5) * std::log(arg) - mu;
  }
  const double poly = laguerre(s.n(), a, arg);
  return std::exp(log_normalization_constant(s) + log_env) * poly;
}

/// psi(x); evaluated through |mu(x)| so every power has a positive base.
inline double eigenfunction(const QuantumState& s, double x) {
  return eigenfunction_of_mu(s, s.profile().mu_magnitude(x));
}

/// E_n with omega = 1: 2n for LI; b^2/2(l+1)^2 - b^2/2(n+l+1)^2 with b = n+l+1 for LIII.
inline double energy(const QuantumState& s) {
  if (s.kind() == Case::LI) return 2.0 * s.n();
  const double b = s.n() + s.l() + 1.0;
  return b * b / (2.0 * (s.l() + 1.0) * (s.l() + 1.0)) - 0.5;
}

/// LIII spectrum at a fixed charge b (Coulomb reading, b = Z).
inline double energy(const QuantumState& s, double charge) {
  if (s.kind() != Case::LIII) throw DomainError("fixed-charge energy is defined for case LIII");
  const double l1 = s.l() + 1.0, nl1 = s.n() + s.l() + 1.0;
  return charge * charge / (2.0 * l1 * l1) - charge * charge / (2.0 * nl1 * nl1);
}

/// Effective potential including the mass-derivative bracket.
/// Like the eigenfunction, evaluated through |mu(x)|.
inline double effective_potential(const QuantumState& s, double x) {
  const double mu = s.profile().mu_magnitude(x);
  const double l = s.l();
  const double centrifugal = l * (l + 1.0) / (2.0 * mu * mu);
  const double bracket = s.profile().mass_bracket(x);
  if (s.kind() == Case::LI) return -(l + 1.5) + 0.5 * mu * mu + centrifugal + bracket;
  const double b = s.n() + l + 1.0;
  return b * b / (2.0 * (l + 1.0) * (l + 1.0)) - b / mu + centrifugal + bracket;
}

/// [mu_lo, mu_hi] outside of which |psi| < rel_threshold * max|psi|.
inline std::pair<double, double> support_mu(const QuantumState& s, double rel_threshold = 1e-16) {
  constexpr int kSamples = 6000;
  const double log_lo = std::log(1e-12), log_hi = std::log(1e4);
  std::vector<double> mus(kSamples), vals(kSamples);
  double peak = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    mus[i] = std::exp(log_lo + (log_hi - log_lo) * i / (kSamples - 1));
    vals[i] = std::abs(eigenfunction_of_mu(s, mus[i]));
    peak = std::max(peak, vals[i]);
  }
  const double cut = rel_threshold * peak;
  int first = 0, last = kSamples - 1;
  while (first < kSamples - 1 && vals[first] < cut) ++first;
  while (last > 0 && vals[last] < cut) --last;
  return {mus[std::max(first - 1, 0)], mus[std::min(last + 1, kSamples - 1)]};
}

/// [x_lo, x_hi] on the monotone branch matching support_mu.
inline std::pair<double, double> support_x(const QuantumState& s, double rel_threshold = 1e-16) {
  auto [mu_lo, mu_hi] = support_mu(s, rel_threshold);
  return {s.profile().x_of_mu(mu_hi), s.profile().x_of_mu(mu_lo)};
}

/// [x_lo, x_hi] on the monotone branch holding `mass` of |psi|^2, with
/// equal tails cut from each side.
inline std::pair<double, double> probability_interval(const QuantumState& s, double mass = 1.0 - 1e-6) {
  if (!(mass > 0.0 && mass < 1.0)) throw DomainError("probability_interval needs 0 < mass < 1");
  constexpr int kSamples = 8001;
  auto [mu_lo, mu_hi] = support_mu(s, 1e-16);
  const double t_lo = std::log(mu_lo), t_hi = std::log(mu_hi);
  const double dt = (t_hi - t_lo) / (kSamples - 1);
  // dx = (2/alpha) d(log mu); the constant drops out of the quantiles.
  std::vector<double> cum(kSamples, 0.0);
  double prev = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double psi = eigenfunction_of_mu(s, std::exp(t_lo + dt * i));
    const double f = psi * psi;
    if (i > 0) cum[i] = cum[i - 1] + 0.5 * dt * (prev + f);
    prev = f;
  }
  const double total = cum.back(), tail = 0.5 * (1.0 - mass) * total;
  auto quantile = [&](double target) {
    const auto it = std::lower_bound(cum.begin(), cum.end(), target);
    const auto i = static_cast<int>(std::clamp<std::ptrdiff_t>(it - cum.begin(), 1, kSamples - 1));
    const double span = cum[i] - cum[i - 1];
    const double frac = span > 0.0 ? (target - cum[i - 1]) / span : 0.0;
    return std::exp(t_lo + dt * (i - 1 + frac));
  };
  const MassProfile mono(s.alpha());
  return {mono.x_of_mu(quantile(total - tail)), mono.x_of_mu(quantile(tail))};
}

struct UniformLattice {
  double start;
  double spacing;
  std::size_t count;

  double at(std::size_t i) const { return start + spacing * static_cast<double>(i); }
  UniformLattice refined() const { return {start, 0.5 * spacing, 2 * count - 1}; }
};

/// Lattice of spacing h over the region where |psi| >= 1e-12 max|psi|.
inline UniformLattice default_lattice(const QuantumState& s, double h) {
  auto [x_lo, x_hi] = support_x(s, 1e-12);
  const auto count = static_cast<std::size_t>(std::ceil((x_hi - x_lo) / h)) + 1;
  return {x_lo, h, count};
}

namespace detail {

// psi up to its (x-independent) normalization error, in extended precision.
inline long double eigenfunction_extended(const QuantumState& s, long double x) {
  const long double alpha = s.alpha();
  const long double mu = (2.0L / alpha) * std::exp(-0.5L * alpha * x);
  const long double a = s.laguerre_order();
  long double arg, log_env;
  if (s.kind() == Case::LI) {
    arg = mu * mu;
    log_env = (s.l() + 1.5L) * std::log(mu) - 0.5L * arg;
  } else {
    arg = 2.0L * mu;
    log_env = (s.l() + 1.5L) * std::log(arg) - mu;
  }
  return std::exp(static_cast<long double>(log_normalization_constant(s)) + log_env) * laguerre(s.n(), a, arg);
}

// Differences of psi lose about log10(1/h^2) digits, so the residual is
// assembled in long double to keep the rounding floor below the O(h^2) term.
inline double residual_on(const QuantumState& s, const UniformLattice& lat) {
  const long double h = lat.spacing;
  const long double alpha = s.alpha();
  const long double e = energy(s);
  const long double l = s.l();
  auto x_at = [&](std::size_t i) { return static_cast<long double>(lat.start) + h * static_cast<long double>(i); };
  std::vector<long double> psi(lat.count);
  long double peak = 0.0L;
  for (std::size_t i = 0; i < lat.count; ++i) {
    psi[i] = eigenfunction_extended(s, x_at(i));
    peak = std::max(peak, std::abs(psi[i]));
  }
  std::size_t first = 1, last = lat.count >= 2 ? lat.count - 2 : 0;
  while (first < last && std::abs(psi[first]) < 1e-12L * peak) ++first;
  while (last > first && std::abs(psi[last]) < 1e-12L * peak) --last;

  long double worst = 0.0L, scale_e = 0.0L, scale_v = 0.0L;
  for (std::size_t i = first; i <= last; ++i) {
    const long double x = x_at(i);
    const long double m = std::exp(-alpha * x);
    const long double mu = (2.0L / alpha) * std::exp(-0.5L * alpha * x);
    long double v = l * (l + 1.0L) / (2.0L * mu * mu) - (3.0L * alpha * alpha / 32.0L) / m;
    if (s.kind() == Case::LI) {
      v += -(l + 1.5L) + 0.5L * mu * mu;
    } else {
      const long double b = s.n() + l + 1.0L;
      v += b * b / (2.0L * (l + 1.0L) * (l + 1.0L)) - b / mu;
    }
    const long double d2 = (psi[i + 1] - 2.0L * psi[i] + psi[i - 1]) / (h * h);
    const long double d1 = (psi[i + 1] - psi[i - 1]) / (2.0L * h);
    const long double r = -0.5L * d2 - 0.5L * alpha * d1 + m * (v - e) * psi[i];
    worst = std::max(worst, std::abs(r));
    scale_e = std::max(scale_e, std::abs(m * e * psi[i]));
    scale_v = std::max(scale_v, std::abs(m * v * psi[i]));
  }
  const long double scale = scale_e > 0.0L ? scale_e : scale_v;
  return scale > 0.0L ? static_cast<double>(worst / scale) : 0.0;
}

}  // namespace detail

struct ResidualReport {
  double residual;          ///< at the given spacing
  double refined_residual;  ///< at half the spacing
  double ratio;             ///< residual / refined_residual, ~4 for an O(h^2) scheme
};

/// Normalized finite-difference residual of the Schroedinger equation on the
/// monotone branch: max|R| / max|m E psi| (max|m V psi| when E = 0), with R
/// from second-order central differences. The lattice is also halved; if
/// the residual is above the rounding floor and shrinks by less than 3x,
/// LatticeTooCoarse is thrown.
inline ResidualReport se_residual(const QuantumState& s, const UniformLattice& lattice) {
  if (s.profile().branch() != Branch::Monotone)
    throw DomainError("se_residual needs the monotone branch (piecewise mass has a kink at x = 0)");
  if (lattice.count < 3 || !(lattice.spacing > 0.0)) throw DomainError("se_residual needs >= 3 lattice points");
  ResidualReport rep{};
  rep.residual = detail::residual_on(s, lattice);
  rep.refined_residual = detail::residual_on(s, lattice.refined());
  rep.ratio = rep.refined_residual > 0.0 ? rep.residual / rep.refined_residual : 0.0;
  constexpr double kRoundingFloor = 1e-11;
  if (rep.residual > kRoundingFloor && rep.ratio < 3.0)
    throw LatticeTooCoarse("residual " + std::to_string(rep.residual) + " shrank only by " +
                           std::to_string(rep.ratio) + "x under refinement");
  return rep;
}

}  // namespace pdem
