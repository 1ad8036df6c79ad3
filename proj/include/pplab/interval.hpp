#pragma once

// Arbitrary-precision floats and outward-rounded intervals on top of MPFR.
// Every interval operation rounds its lower endpoint toward -inf and its
// upper endpoint toward +inf, so the true value is always enclosed.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "pplab/error.hpp"
#include "pplab/rational.hpp"

namespace pplab {

using Precision = mpfr_prec_t;

inline void check_precision(Precision p) {
  if (p < MPFR_PREC_MIN || p > MPFR_PREC_MAX || p > (Precision{1} << 26)) {
    fail(ErrorCode::PrecisionUnrepresentable, "precision " + std::to_string(p) + " bits");
  }
}

class BigFloat {
 public:
  explicit BigFloat(Precision p = 64) {
    check_precision(p);
    mpfr_init2(v_, p);
    mpfr_set_zero(v_, 1);
  }
  BigFloat(const BigFloat& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& other) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
  }
  BigFloat& operator=(const BigFloat& other) {
    if (this != &other) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  Precision precision() const { return mpfr_get_prec(v_); }

  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(v_, rnd); }
  long double to_long_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_ld(v_, rnd); }

  /// Exact value as a rational (MPFR numbers are dyadic).
  Rational to_rational() const {
    Rational out;
    if (mpfr_zero_p(v_)) return out;
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v_);
    out = m;
    if (e >= 0) {
      mpq_mul_2exp(out.get_mpq_t(), out.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    } else {
      mpq_div_2exp(out.get_mpq_t(), out.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    }
    out.canonicalize();
    return out;
  }

  /// Decimal text with `digits` significant digits.
  std::string to_string(int digits = 20) const {
    if (mpfr_zero_p(v_)) return "0";
    char* buf = nullptr;
    std::string fmt = "%." + std::to_string(digits) + "Rg";
    mpfr_asprintf(&buf, fmt.c_str(), v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }

 private:
  mpfr_t v_;
};

inline int compare(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.get(), b.get()); }

class Interval {
 public:
  explicit Interval(Precision p = 64) : lo_(p), hi_(p) {}

  static Interval point(const Rational& q, Precision p) {
    Interval out(p);
    mpfr_set_q(out.lo_.get(), q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(out.hi_.get(), q.get_mpq_t(), MPFR_RNDU);
    return out;
  }
  static Interval point(const BigInt& z, Precision p) {
    Interval out(p);
    mpfr_set_z(out.lo_.get(), z.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(out.hi_.get(), z.get_mpz_t(), MPFR_RNDU);
    return out;
  }
  static Interval point(long v, Precision p) {
    Interval out(p);
    mpfr_set_si(out.lo_.get(), v, MPFR_RNDD);
    mpfr_set_si(out.hi_.get(), v, MPFR_RNDU);
    return out;
  }
  static Interval from_double(double v, Precision p) {
    Interval out(p);
    mpfr_set_d(out.lo_.get(), v, MPFR_RNDD);
    mpfr_set_d(out.hi_.get(), v, MPFR_RNDU);
    return out;
  }
  static Interval hull(const BigFloat& a, const BigFloat& b, Precision p) {
    Interval out(p);
    mpfr_min(out.lo_.get(), a.get(), b.get(), MPFR_RNDD);
    mpfr_max(out.hi_.get(), a.get(), b.get(), MPFR_RNDU);
    return out;
  }

  static Interval pi(Precision p) {
    Interval out(p);
    mpfr_const_pi(out.lo_.get(), MPFR_RNDD);
    mpfr_const_pi(out.hi_.get(), MPFR_RNDU);
    return out;
  }
  static Interval euler_e(Precision p) {
    Interval out(p);
    mpfr_set_ui(out.lo_.get(), 1, MPFR_RNDN);
    mpfr_set_ui(out.hi_.get(), 1, MPFR_RNDN);
    mpfr_exp(out.lo_.get(), out.lo_.get(), MPFR_RNDD);
    mpfr_exp(out.hi_.get(), out.hi_.get(), MPFR_RNDU);
    return out;
  }
  static Interval log_of(std::uint64_t n, Precision p) {
    Interval out = point(to_bigint(n), p + 8);
    Interval res(p);
    mpfr_log(res.lo_.get(), out.lo_.get(), MPFR_RNDD);
    mpfr_log(res.hi_.get(), out.hi_.get(), MPFR_RNDU);
    return res;
  }

  const BigFloat& lower() const { return lo_; }
  const BigFloat& upper() const { return hi_; }
  BigFloat& lower() { return lo_; }
  BigFloat& upper() { return hi_; }
  Precision precision() const { return lo_.precision(); }

  bool is_point() const { return mpfr_equal_p(lo_.get(), hi_.get()) != 0; }
  bool strictly_positive() const { return mpfr_sgn(lo_.get()) > 0; }
  bool strictly_negative() const { return mpfr_sgn(hi_.get()) < 0; }
  bool contains_zero() const { return mpfr_sgn(lo_.get()) <= 0 && mpfr_sgn(hi_.get()) >= 0; }

  bool contains(const Rational& q) const {
    return mpfr_cmp_q(lo_.get(), q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_.get(), q.get_mpq_t()) >= 0;
  }
  bool contains(const Interval& other) const {
    return mpfr_lessequal_p(lo_.get(), other.lo_.get()) &&
           mpfr_greaterequal_p(hi_.get(), other.hi_.get());
  }

  /// Upper bound on hi - lo.
  BigFloat width() const {
    BigFloat w(precision());
    mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    return w;
  }
  double width_double() const { return width().to_double(MPFR_RNDU); }

  BigFloat midpoint() const {
    BigFloat m(precision() + 1);
    mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
    mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
    return m;
  }
  double mid_double() const { return midpoint().to_double(); }

  /// Upper bound on max(|lo|, |hi|).
  BigFloat magnitude() const {
    BigFloat a(precision()), b(precision());
    mpfr_abs(a.get(), lo_.get(), MPFR_RNDU);
    mpfr_abs(b.get(), hi_.get(), MPFR_RNDU);
    return compare(a, b) >= 0 ? a : b;
  }

  /// The floor of every point of the interval, when they all agree.
  std::optional<BigInt> decided_floor() const {
    BigInt a, b;
    mpfr_get_z(a.get_mpz_t(), lo_.get(), MPFR_RNDD);
    mpfr_get_z(b.get_mpz_t(), hi_.get(), MPFR_RNDD);
    if (a == b) return a;
    return std::nullopt;
  }

  /// Binary exponent of the largest endpoint magnitude (0 for the zero interval).
  long magnitude_exponent() const {
    BigFloat m = magnitude();
    if (m.is_zero()) return 0;
    return static_cast<long>(mpfr_get_exp(m.get()));
  }

  friend Interval operator+(const Interval& a, const Interval& b) {
    Interval out(std::max(a.precision(), b.precision()));
    mpfr_add(out.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_add(out.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return out;
  }
  friend Interval operator-(const Interval& a, const Interval& b) {
    Interval out(std::max(a.precision(), b.precision()));
    mpfr_sub(out.lo_.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
    mpfr_sub(out.hi_.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
    return out;
  }
  friend Interval operator-(const Interval& a) {
    Interval out(a.precision());
    mpfr_neg(out.lo_.get(), a.hi_.get(), MPFR_RNDD);
    mpfr_neg(out.hi_.get(), a.lo_.get(), MPFR_RNDU);
    return out;
  }
  friend Interval operator*(const Interval& a, const Interval& b) {
    const Precision p = std::max(a.precision(), b.precision());
    Interval out(p);
    if (a.strictly_positive() && b.strictly_positive()) {
      mpfr_mul(out.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
      mpfr_mul(out.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
      return out;
    }
    BigFloat t(p);
    bool first = true;
    for (const BigFloat* x : {&a.lo_, &a.hi_}) {
      for (const BigFloat* y : {&b.lo_, &b.hi_}) {
        mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDD);
        if (first || mpfr_less_p(t.get(), out.lo_.get())) mpfr_set(out.lo_.get(), t.get(), MPFR_RNDD);
        mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDU);
        if (first || mpfr_greater_p(t.get(), out.hi_.get())) mpfr_set(out.hi_.get(), t.get(), MPFR_RNDU);
        first = false;
      }
    }
    return out;
  }
  friend Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) fail(ErrorCode::DomainError, "interval division by an interval containing 0");
    const Precision p = std::max(a.precision(), b.precision());
    Interval inv(p);
    mpfr_ui_div(inv.lo_.get(), 1, b.hi_.get(), MPFR_RNDD);
    mpfr_ui_div(inv.hi_.get(), 1, b.lo_.get(), MPFR_RNDU);
    return a * inv;
  }

  /// Multiplication by an exact rational.
  Interval scaled(const Rational& q) const {
    Interval out(precision());
    if (sgn(q) >= 0) {
      mpfr_mul_q(out.lo_.get(), lo_.get(), q.get_mpq_t(), MPFR_RNDD);
      mpfr_mul_q(out.hi_.get(), hi_.get(), q.get_mpq_t(), MPFR_RNDU);
    } else {
      mpfr_mul_q(out.lo_.get(), hi_.get(), q.get_mpq_t(), MPFR_RNDD);
      mpfr_mul_q(out.hi_.get(), lo_.get(), q.get_mpq_t(), MPFR_RNDU);
    }
    return out;
  }

  /// x^(num/den) for an interval of positive reals and a positive rational
  /// exponent; both steps are monotone increasing, so endpoints map to
  /// endpoints.
  Interval pow_rational(const Rational& e, Precision p) const {
    if (!strictly_positive()) fail(ErrorCode::DomainError, "rational power of a non-positive interval");
    if (sgn(e) <= 0) fail(ErrorCode::DomainError, "rational power needs a positive exponent");
    if (!e.get_num().fits_ulong_p() || !e.get_den().fits_ulong_p()) {
      fail(ErrorCode::DomainError, "exponent too large: " + to_fraction_text(e));
    }
    const unsigned long num = e.get_num().get_ui();
    const unsigned long den = e.get_den().get_ui();
    Interval out(p);
    mpfr_pow_ui(out.lo_.get(), lo_.get(), num, MPFR_RNDD);
    mpfr_pow_ui(out.hi_.get(), hi_.get(), num, MPFR_RNDU);
    if (den != 1) {
      mpfr_rootn_ui(out.lo_.get(), out.lo_.get(), den, MPFR_RNDD);
      mpfr_rootn_ui(out.hi_.get(), out.hi_.get(), den, MPFR_RNDU);
    }
    return out;
  }

  /// Re-rounds the endpoints outward to precision p.
  Interval with_precision(Precision p) const {
    Interval out(p);
    mpfr_set(out.lo_.get(), lo_.get(), MPFR_RNDD);
    mpfr_set(out.hi_.get(), hi_.get(), MPFR_RNDU);
    return out;
  }

  /// Intersection; throws DomainError when the two enclosures are disjoint,
  /// which would mean one of them was not a valid enclosure.
  Interval intersect(const Interval& other) const {
    Interval out(std::max(precision(), other.precision()));
    mpfr_max(out.lo_.get(), lo_.get(), other.lo_.get(), MPFR_RNDD);
    mpfr_min(out.hi_.get(), hi_.get(), other.hi_.get(), MPFR_RNDU);
    if (mpfr_greater_p(out.lo_.get(), out.hi_.get())) {
      fail(ErrorCode::DomainError, "disjoint enclosures");
    }
    return out;
  }

  std::string to_string(int digits = 20) const {
    return "[" + lo_.to_string(digits) + ", " + hi_.to_string(digits) + "]";
  }

 private:
  BigFloat lo_;
  BigFloat hi_;
};

/// Enclosure of the distance from every point of `t` to the nearest integer.
/// Returns [lo, hi] with 0 <= lo <= hi <= 1/2.
inline Interval nearest_integer_distance(const Interval& t) {
  const Precision p = t.precision();
  BigFloat mid = t.midpoint();
  BigInt n;
  mpfr_get_z(n.get_mpz_t(), mid.get(), MPFR_RNDN);
  Interval r = t - Interval::point(n, p + 2);
  // r is close to [-1/2, 1/2]; distance is |r| clipped to 1/2.
  Interval out(p);
  BigFloat wrap(p);
  if (mpfr_sgn(r.lower().get()) >= 0) {
    mpfr_set(out.lower().get(), r.lower().get(), MPFR_RNDD);
    mpfr_ui_sub(wrap.get(), 1, r.upper().get(), MPFR_RNDD);
    mpfr_min(out.lower().get(), out.lower().get(), wrap.get(), MPFR_RNDD);
    mpfr_set(out.upper().get(), r.upper().get(), MPFR_RNDU);
  } else if (mpfr_sgn(r.upper().get()) <= 0) {
    mpfr_neg(out.lower().get(), r.upper().get(), MPFR_RNDD);
    mpfr_add_ui(wrap.get(), r.lower().get(), 1, MPFR_RNDD);
    mpfr_min(out.lower().get(), out.lower().get(), wrap.get(), MPFR_RNDD);
    mpfr_neg(out.upper().get(), r.lower().get(), MPFR_RNDU);
  } else {
    mpfr_set_zero(out.lower().get(), 1);
    BigFloat a(p), b(p);
    mpfr_neg(a.get(), r.lower().get(), MPFR_RNDU);
    mpfr_set(b.get(), r.upper().get(), MPFR_RNDU);
    mpfr_max(out.upper().get(), a.get(), b.get(), MPFR_RNDU);
  }
  BigFloat half(p);
  mpfr_set_d(half.get(), 0.5, MPFR_RNDN);
  if (mpfr_greater_p(out.upper().get(), half.get())) mpfr_set(out.upper().get(), half.get(), MPFR_RNDU);
  if (mpfr_sgn(out.lower().get()) < 0) mpfr_set_zero(out.lower().get(), 1);
  return out;
}

}  // namespace pplab
