#pragma once

#include <cctype>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "pplab/error.hpp"
#include "pplab/interval.hpp"
#include "pplab/rational.hpp"

namespace pplab {

/// A real number that can be enclosed to any requested precision. Rational
/// values also keep their exact form so callers can take exact shortcuts.
class CertifiedReal {
 public:
  using Evaluator = std::function<Interval(Precision)>;

  CertifiedReal() : CertifiedReal(Rational(0)) {}

  CertifiedReal(const Rational& q)  // NOLINT(google-explicit-constructor)
      : text_(to_fraction_text(q)), exact_(q) {
    Rational copy = q;
    eval_ = [copy](Precision p) { return Interval::point(copy, p); };
  }

  CertifiedReal(std::string text, Evaluator eval)
      : text_(std::move(text)), eval_(std::move(eval)) {}

  /// Enclosure with endpoints at precision p. Composite values are evaluated
  /// with guard bits internally, so the width is a few ulps at p.
  Interval enclose(Precision p) const { return eval_(p); }

  const std::optional<Rational>& exact() const { return exact_; }
  bool is_exact() const { return exact_.has_value(); }
  const std::string& text() const { return text_; }

  double approx() const { return enclose(64).mid_double(); }

  static CertifiedReal pi() {
    return {"pi", [](Precision p) { return Interval::pi(p); }};
  }
  static CertifiedReal euler_e() {
    return {"e", [](Precision p) { return Interval::euler_e(p); }};
  }
  static CertifiedReal sqrt_of(const Rational& r) { return power(r, Rational(1, 2)); }
  static CertifiedReal golden_ratio() {
    CertifiedReal s = sqrt_of(5);
    CertifiedReal out = (CertifiedReal(1) + s) * CertifiedReal(Rational(1, 2));
    out.text_ = "phi";
    return out;
  }

  /// base^e for a positive rational base; exact whenever the root is.
  static CertifiedReal power(const Rational& base, const Rational& e) {
    if (sgn(e) == 0) return CertifiedReal(Rational(1));
    if (sgn(base) <= 0) {
      if (sgn(base) == 0 && sgn(e) > 0) return CertifiedReal(Rational(0));
      if (is_integral(e)) return CertifiedReal(int_power(base, e));
      fail(ErrorCode::DomainError, "non-integral power of a non-positive number");
    }
    if (auto exact = exact_power(base, e)) return CertifiedReal(*exact);
    std::string text = "(" + to_fraction_text(base) + ")^(" + to_fraction_text(e) + ")";
    const bool negative = sgn(e) < 0;
    Rational pos = negative ? Rational(-e) : e;
    Rational b = base;
    return {text, [b, pos, negative](Precision p) {
              Interval x = Interval::point(b, p + 16).pow_rational(pos, p + 16);
              if (negative) x = Interval::point(1L, p + 16) / x;
              return x.with_precision(p);
            }};
  }

  friend CertifiedReal operator+(const CertifiedReal& a, const CertifiedReal& b) {
    return combine(a, b, "+", [](const Interval& x, const Interval& y) { return x + y; },
                   [](const Rational& x, const Rational& y) { return Rational(x + y); });
  }
  friend CertifiedReal operator-(const CertifiedReal& a, const CertifiedReal& b) {
    return combine(a, b, "-", [](const Interval& x, const Interval& y) { return x - y; },
                   [](const Rational& x, const Rational& y) { return Rational(x - y); });
  }
  friend CertifiedReal operator*(const CertifiedReal& a, const CertifiedReal& b) {
    return combine(a, b, "*", [](const Interval& x, const Interval& y) { return x * y; },
                   [](const Rational& x, const Rational& y) { return Rational(x * y); });
  }
  friend CertifiedReal operator/(const CertifiedReal& a, const CertifiedReal& b) {
    if (b.is_exact() && sgn(*b.exact()) == 0) fail(ErrorCode::DomainError, "division by zero");
    return combine(a, b, "/", [](const Interval& x, const Interval& y) { return x / y; },
                   [](const Rational& x, const Rational& y) { return Rational(x / y); });
  }
  friend CertifiedReal operator-(const CertifiedReal& a) { return CertifiedReal(0) - a; }

  /// Rational power of a positive (or exact) real.
  CertifiedReal pow(const Rational& e) const {
    if (exact_) return power(*exact_, e);
    if (sgn(e) == 0) return CertifiedReal(Rational(1));
    const bool negative = sgn(e) < 0;
    Rational pos = negative ? Rational(-e) : e;
    Evaluator inner = eval_;
    return {"(" + text_ + ")^(" + to_fraction_text(e) + ")",
            [inner, pos, negative](Precision p) {
              const Precision w = p + 16 + static_cast<Precision>(pos.get_num().get_ui()) * 2;
              Interval x = inner(w).pow_rational(pos, w);
              if (negative) x = Interval::point(1L, w) / x;
              return x.with_precision(p);
            }};
  }

 private:
  static Rational int_power(const Rational& base, const Rational& e) {
    if (!e.get_num().fits_slong_p()) fail(ErrorCode::DomainError, "exponent too large");
    long n = e.get_num().get_si();
    Rational r = pow_int(base, static_cast<unsigned long>(n < 0 ? -n : n));
    if (n < 0) {
      if (sgn(r) == 0) fail(ErrorCode::DomainError, "division by zero");
      r = 1 / r;
    }
    return r;
  }

  // base^(a/b) is rational iff num and den of base are perfect b-th powers.
  static std::optional<Rational> exact_power(const Rational& base, const Rational& e) {
    if (!e.get_den().fits_ulong_p()) return std::nullopt;
    const unsigned long den = e.get_den().get_ui();
    BigInt rn, rd;
    if (mpz_root(rn.get_mpz_t(), base.get_num_mpz_t(), den) == 0) return std::nullopt;
    if (mpz_root(rd.get_mpz_t(), base.get_den_mpz_t(), den) == 0) return std::nullopt;
    Rational root(rn, rd);
    root.canonicalize();
    return int_power(root, Rational(e.get_num()));
  }

  template <typename IntervalOp, typename ExactOp>
  static CertifiedReal combine(const CertifiedReal& a, const CertifiedReal& b, const char* op,
                               IntervalOp iop, ExactOp eop) {
    if (a.exact_ && b.exact_) {
      Rational r = eop(*a.exact_, *b.exact_);
      r.canonicalize();
      return CertifiedReal(r);
    }
    Evaluator ea = a.eval_;
    Evaluator eb = b.eval_;
    return {"(" + a.text_ + op + b.text_ + ")", [ea, eb, iop](Precision p) {
              // Cancellation in sums can cost bits; callers that need a
              // narrow enclosure escalate p themselves.
              return iop(ea(p + 16), eb(p + 16)).with_precision(p);
            }};
  }

  std::string text_;
  Evaluator eval_;
  std::optional<Rational> exact_;
};

namespace detail {

// expr   := term (('+'|'-') term)*
// term   := factor (('*'|'/') factor)*
// factor := ['-'|'+'] power
// power  := atom ['^' factor]
// atom   := number | name | 'sqrt' '(' expr ')' | '(' expr ')'
class RealParser {
 public:
  explicit RealParser(std::string_view s) : s_(s) {}

  CertifiedReal parse() {
    CertifiedReal v = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected trailing input");
    return v;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::MalformedNumber,
         "cannot parse real expression '" + std::string(s_) + "': " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  CertifiedReal expr() {
    CertifiedReal v = term();
    for (;;) {
      if (eat('+')) {
        v = v + term();
      } else if (eat('-')) {
        v = v - term();
      } else {
        return v;
      }
    }
  }
  CertifiedReal term() {
    CertifiedReal v = factor();
    for (;;) {
      if (eat('*')) {
        v = v * factor();
      } else if (eat('/')) {
        v = v / factor();
      } else {
        return v;
      }
    }
  }
  CertifiedReal factor() {
    if (eat('-')) return -factor();
    if (eat('+')) return factor();
    return power();
  }
  CertifiedReal power() {
    CertifiedReal base = atom();
    if (eat('^')) {
      CertifiedReal e = factor();
      if (!e.is_exact()) error("exponents must be rational");
      return base.pow(*e.exact());
    }
    return base;
  }
  CertifiedReal atom() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of input");
    if (eat('(')) {
      CertifiedReal v = expr();
      if (!eat(')')) error("missing ')'");
      return v;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string_view name = s_.substr(start, pos_ - start);
      if (name == "pi") return CertifiedReal::pi();
      if (name == "e") return CertifiedReal::euler_e();
      if (name == "phi") return CertifiedReal::golden_ratio();
      if (name == "sqrt") {
        if (!eat('(')) error("sqrt needs '('");
        CertifiedReal v = expr();
        if (!eat(')')) error("missing ')'");
        return v.pow(Rational(1, 2));
      }
      if (name.size() > 4 && name.substr(0, 4) == "sqrt") {
        Rational r;
        if (!detail::parse_decimal(name.substr(4), r)) error("bad sqrtN constant");
        CertifiedReal v = CertifiedReal::sqrt_of(r);
        return v;
      }
      error("unknown name '" + std::string(name) + "'");
    }
    error(std::string("unexpected character '") + c + "'");
  }
  CertifiedReal number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
      ++pos_;
    }
    // scientific suffix only when followed by a digit or sign+digit, so the
    // constant e stays usable as in "2e" -> rejected but "2*e" accepted
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
      if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
        pos_ = q;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    Rational r;
    if (!detail::parse_decimal(s_.substr(start, pos_ - start), r)) error("bad number");
    return CertifiedReal(r);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses real-valued inputs: rationals and decimals ("9/2", "1e-3"), named
/// constants (pi, e, phi, sqrt2, sqrt3, ...), sqrt(...), and the operators
/// + - * / ^ with rational exponents ("10^-6", "3*sqrt(3)").
inline CertifiedReal parse_real(std::string_view text) {
  CertifiedReal out = detail::RealParser(text).parse();
  return out;
}

}  // namespace pplab
