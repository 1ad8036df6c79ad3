#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "pplab/error.hpp"

namespace pplab {

using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline BigInt floor_of(const Rational& r) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

inline BigInt ceil_of(const Rational& r) {
  BigInt out;
  mpz_cdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

inline bool is_integral(const Rational& r) { return r.get_den() == 1; }

inline BigInt to_bigint(std::uint64_t v) {
  BigInt out;
  mpz_import(out.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return out;
}

inline std::uint64_t to_u64(const BigInt& v) {
  if (sgn(v) < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 64) {
    fail(ErrorCode::OutOfRange, "integer does not fit in 64 bits: " + v.get_str());
  }
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, v.get_mpz_t());
  return out;
}

inline std::size_t bit_length(const BigInt& v) {
  return sgn(v) == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
}

inline BigInt pow_int(const BigInt& base, unsigned long e) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

inline Rational pow_int(const Rational& base, unsigned long e) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
  out.canonicalize();
  return out;
}

/// Exact fractions are always rendered as "p/q" (or "p" when q = 1).
inline std::string to_fraction_text(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

namespace detail {

inline bool parse_unsigned_digits(std::string_view s, BigInt& out) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  out = BigInt(std::string(s), 10);
  return true;
}

// [sign] digits [. digits] [(e|E) [sign] digits]
inline bool parse_decimal(std::string_view s, Rational& out) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exp10 = 0;
  if (auto epos = s.find_first_of("eE"); epos != std::string_view::npos) {
    std::string_view e = s.substr(epos + 1);
    s = s.substr(0, epos);
    bool eneg = false;
    if (!e.empty() && (e.front() == '+' || e.front() == '-')) {
      eneg = e.front() == '-';
      e.remove_prefix(1);
    }
    BigInt ev;
    if (!parse_unsigned_digits(e, ev) || !ev.fits_slong_p() || ev > 100000) return false;
    exp10 = eneg ? -ev.get_si() : ev.get_si();
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot);
    std::string_view fp = s.substr(dot + 1);
    if (ip.empty() && fp.empty()) return false;
    BigInt tmp;
    if (!ip.empty() && !parse_unsigned_digits(ip, tmp)) return false;
    if (!fp.empty() && !parse_unsigned_digits(fp, tmp)) return false;
    digits = std::string(ip) + std::string(fp);
    exp10 -= static_cast<long>(fp.size());
  } else {
    BigInt tmp;
    if (!parse_unsigned_digits(s, tmp)) return false;
    digits = std::string(s);
  }
  if (digits.empty()) digits = "0";
  Rational value{BigInt(digits, 10)};
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 < 0) {
    value /= Rational(scale);
  } else {
    value *= Rational(scale);
  }
  value.canonicalize();
  out = negative ? Rational(-value) : value;
  return true;
}

}  // namespace detail

/// Parses "3", "-2.5", "1e-3" or "9/2" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  std::string_view s = trim(text);
  Rational out;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Rational num, den;
    if (!detail::parse_decimal(trim(s.substr(0, slash)), num) ||
        !detail::parse_decimal(trim(s.substr(slash + 1)), den) || sgn(den) == 0) {
      fail(ErrorCode::MalformedNumber, "cannot parse rational '" + std::string(text) + "'");
    }
    out = num / den;
    out.canonicalize();
    return out;
  }
  if (!detail::parse_decimal(s, out)) {
    fail(ErrorCode::MalformedNumber, "cannot parse number '" + std::string(text) + "'");
  }
  return out;
}

inline BigInt parse_integer(std::string_view text) {
  Rational r = parse_rational(text);
  if (!is_integral(r)) {
    fail(ErrorCode::MalformedNumber, "expected an integer, got '" + std::string(text) + "'");
  }
  return r.get_num();
}

}  // namespace pplab
