#pragma once

#include <cmath>
#include <string>

#include "pdem/errors.hpp"

namespace pdem {

/// Monotone: m(x) = e^{-alpha x}, mu(x) = (2/alpha) e^{-alpha x/2} > 0 on the whole line.
/// PiecewiseAbs: m(x) = e^{-alpha |x|} with the signed piecewise mu (negative for x > 0).
enum class Branch { Monotone, PiecewiseAbs };

inline const char* to_string(Branch b) { return b == Branch::Monotone ? "monotone" : "piecewise-abs"; }

/// Exponentially decaying effective mass, alpha being an inverse well width.
class MassProfile {
 public:
  explicit MassProfile(double alpha, Branch branch = Branch::Monotone) : alpha_(alpha), branch_(branch) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
      throw DomainError("mass profile needs alpha > 0, got " + std::to_string(alpha));
  }

  double alpha() const { return alpha_; }
  Branch branch() const { return branch_; }

  double mass_at(double x) const {
    return branch_ == Branch::Monotone ? std::exp(-alpha_ * x) : std::exp(-alpha_ * std::abs(x));
  }

  /// Auxiliary coordinate mu(x) = int^x sqrt(m).
  double mu_at(double x) const {
    if (branch_ == Branch::Monotone) return (2.0 / alpha_) * std::exp(-0.5 * alpha_ * x);
    const double magnitude = (2.0 / alpha_) * std::exp(-0.5 * alpha_ * std::abs(x));
    return x > 0.0 ? -magnitude : magnitude;
  }

  /// |mu(x)|, the base of every half-integer power in the eigenfunctions.
  double mu_magnitude(double x) const { return std::abs(mu_at(x)); }

  /// Inverse of mu on the monotone branch.
  double x_of_mu(double mu) const {
    if (branch_ != Branch::Monotone) throw DomainError("x_of_mu is defined on the monotone branch only");
    if (!(mu > 0.0)) throw DomainError("x_of_mu needs mu > 0, got " + std::to_string(mu));
    return -(2.0 / alpha_) * std::log(0.5 * alpha_ * mu);
  }

  /// m'(x)/m(x).
  double log_mass_slope(double x) const {
    if (branch_ == Branch::Monotone) return -alpha_;
    return x > 0.0 ? -alpha_ : (x < 0.0 ? alpha_ : 0.0);
  }

  /// (1/8m)[m''/m - (7/4)(m'/m)^2]; equals -(3 alpha^2/32)/m away from x = 0.
  double mass_bracket(double x) const { return -(3.0 * alpha_ * alpha_ / 32.0) / mass_at(x); }

 private:
  double alpha_;
  Branch branch_;
};

}  // namespace pdem
