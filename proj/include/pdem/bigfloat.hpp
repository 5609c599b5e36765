#pragma once

#include <mpfr.h>

#include <cmath>
#include <compare>
#include <string>
#include <utility>

#include "pdem/errors.hpp"

namespace pdem {

/// Decimal working precision of the extended float type.
struct PrecisionConfig {
  int working_digits = 16;

  static PrecisionConfig digits(int d) {
    if (d < 16) throw DomainError("working_digits must be >= 16, got " + std::to_string(d));
    return PrecisionConfig{d};
  }

  mpfr_prec_t bits() const {
    // 3.3219... bits per decimal digit, plus a few guard bits.
    return static_cast<mpfr_prec_t>(std::ceil(working_digits * 3.321928094887362)) + 8;
  }
};

namespace detail {
inline mpfr_prec_t& thread_precision_bits() {
  thread_local mpfr_prec_t bits = PrecisionConfig{}.bits();
  return bits;
}
}  // namespace detail

/// Sets the precision used for BigFloat values created on this thread
/// (from literals, doubles, or default construction) until destroyed.
class PrecisionScope {
 public:
  explicit PrecisionScope(PrecisionConfig cfg) : saved_(detail::thread_precision_bits()) {
    detail::thread_precision_bits() = cfg.bits();
  }
  ~PrecisionScope() { detail::thread_precision_bits() = saved_; }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  mpfr_prec_t saved_;
};

/// Value-semantic MPFR float. Binary operations round to the wider operand.
class BigFloat {
 public:
  BigFloat() { mpfr_init2(v_, detail::thread_precision_bits()); mpfr_set_zero(v_, 1); }
  BigFloat(double d) { mpfr_init2(v_, detail::thread_precision_bits()); mpfr_set_d(v_, d, MPFR_RNDN); }
  BigFloat(int i) { mpfr_init2(v_, detail::thread_precision_bits()); mpfr_set_si(v_, i, MPFR_RNDN); }
  BigFloat(long i) { mpfr_init2(v_, detail::thread_precision_bits()); mpfr_set_si(v_, i, MPFR_RNDN); }
  BigFloat(unsigned long i) { mpfr_init2(v_, detail::thread_precision_bits()); mpfr_set_ui(v_, i, MPFR_RNDN); }

  BigFloat(const BigFloat& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  mpfr_prec_t precision_bits() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  explicit operator double() const { return to_double(); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  /// Decimal string with `digits` significant digits.
  std::string to_string(int digits) const {
    char* out = nullptr;
    mpfr_asprintf(&out, "%.*Rg", digits, v_);
    std::string s(out);
    mpfr_free_str(out);
    return s;
  }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  BigFloat& operator+=(const BigFloat& o) { widen(o); mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigFloat& operator-=(const BigFloat& o) { widen(o); mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigFloat& operator*=(const BigFloat& o) { widen(o); mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigFloat& operator/=(const BigFloat& o) { widen(o); mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

  friend BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }
  friend BigFloat operator-(BigFloat a, const BigFloat& b) { return a -= b; }
  friend BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
  friend BigFloat operator/(BigFloat a, const BigFloat& b) { return a /= b; }
  friend BigFloat operator-(BigFloat a) { mpfr_neg(a.v_, a.v_, MPFR_RNDN); return a; }

  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b) {
    if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
    const int c = mpfr_cmp(a.v_, b.v_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }

  friend BigFloat exp(const BigFloat& a) { BigFloat r(a, 0); mpfr_exp(r.v_, a.v_, MPFR_RNDN); return r; }
  friend BigFloat log(const BigFloat& a) { BigFloat r(a, 0); mpfr_log(r.v_, a.v_, MPFR_RNDN); return r; }
  friend BigFloat sqrt(const BigFloat& a) { BigFloat r(a, 0); mpfr_sqrt(r.v_, a.v_, MPFR_RNDN); return r; }
  friend BigFloat abs(const BigFloat& a) { BigFloat r(a, 0); mpfr_abs(r.v_, a.v_, MPFR_RNDN); return r; }
  friend BigFloat pow(const BigFloat& a, const BigFloat& b) {
    BigFloat r(a, 0);
    r.widen(b);
    mpfr_pow(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend double log10_abs(const BigFloat& a) {
    long e = 0;
    const double m = mpfr_get_d_2exp(&e, a.v_, MPFR_RNDN);
    return std::log10(std::abs(m)) + static_cast<double>(e) * 0.30102999566398120;
  }

  /// log|Gamma(a)| and the sign of Gamma(a). Throws PoleError at nonpositive integers.
  friend std::pair<BigFloat, int> lgamma_signed(const BigFloat& a) {
    if (mpfr_integer_p(a.v_) && mpfr_sgn(a.v_) <= 0)
      throw PoleError("Gamma pole at nonpositive integer " + a.to_string(17));
    BigFloat r(a, 0);
    int s = 1;
    mpfr_lgamma(r.v_, &s, a.v_, MPFR_RNDN);
    return {std::move(r), s < 0 ? -1 : 1};
  }

  static BigFloat pi() {
    BigFloat r;
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }

 private:
  // Uninitialised value with the precision of `like`.
  BigFloat(const BigFloat& like, int) { mpfr_init2(v_, mpfr_get_prec(like.v_)); }

  void widen(const BigFloat& o) {
    if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  }

  mpfr_t v_;
};

inline double to_double(double x) { return x; }
inline double to_double(const BigFloat& x) { return x.to_double(); }

}  // namespace pdem
