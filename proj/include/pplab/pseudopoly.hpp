#pragma once

// Pseudo-polynomials f(x) = sum_j c_j x^{e_j} with positive rational
// coefficients and rational exponents >= 1, their polynomial / pseudo split,
// property (F), certified evaluation and certified floors.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pplab/certified_real.hpp"
#include "pplab/error.hpp"
#include "pplab/interval.hpp"
#include "pplab/rational.hpp"

namespace pplab {

struct Term {
  Rational coefficient;
  Rational exponent;

  bool operator==(const Term& other) const {
    return coefficient == other.coefficient && exponent == other.exponent;
  }
};

struct PolySplit;
class PseudoPolynomial;
inline PolySplit split(const PseudoPolynomial& f);

class PseudoPolynomial {
 public:
  /// The empty sum; only `build` produces a valid pseudo-polynomial.
  PseudoPolynomial() = default;

  /// Validates and sorts by exponent. With `strict`, at least one exponent
  /// must be non-integral.
  static PseudoPolynomial build(std::vector<Term> terms, bool strict) {
    if (terms.empty()) fail(ErrorCode::EmptyTermList, "a pseudo-polynomial needs at least one term");
    for (auto& t : terms) {
      t.coefficient.canonicalize();
      t.exponent.canonicalize();
      if (sgn(t.coefficient) <= 0) {
        fail(ErrorCode::NonPositiveCoefficient, "coefficient " + to_fraction_text(t.coefficient));
      }
      if (t.exponent < 1) fail(ErrorCode::ExponentBelowOne, "exponent " + to_fraction_text(t.exponent));
    }
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
    for (std::size_t i = 1; i < terms.size(); ++i) {
      if (terms[i].exponent == terms[i - 1].exponent) {
        fail(ErrorCode::DuplicateExponent, "exponent " + to_fraction_text(terms[i].exponent));
      }
    }
    if (strict && std::none_of(terms.begin(), terms.end(),
                               [](const Term& t) { return !is_integral(t.exponent); })) {
      fail(ErrorCode::NoNonIntegralExponent, "strict mode requires a non-integral exponent");
    }
    return PseudoPolynomial(std::move(terms));
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Largest exponent (0 for the empty part of a split).
  Rational degree() const { return terms_.empty() ? Rational(0) : terms_.back().exponent; }

  std::string to_string() const {
    std::string out;
    for (const auto& t : terms_) {
      if (!out.empty()) out += " + ";
      out += to_fraction_text(t.coefficient) + "*x^" + to_fraction_text(t.exponent);
    }
    return out.empty() ? "0" : out;
  }

  bool operator==(const PseudoPolynomial& other) const { return terms_ == other.terms_; }

 private:
  friend PolySplit split(const PseudoPolynomial& f);
  explicit PseudoPolynomial(std::vector<Term> terms) : terms_(std::move(terms)) {}

  std::vector<Term> terms_;
};

inline PseudoPolynomial build_pseudo(std::vector<Term> terms, bool strict) {
  return PseudoPolynomial::build(std::move(terms), strict);
}

/// f = P + phi: integral exponents go to P, the rest to phi. Either part may
/// be empty.
struct PolySplit {
  PseudoPolynomial poly_part;
  PseudoPolynomial pseudo_part;
};

inline PolySplit split(const PseudoPolynomial& f) {
  std::vector<Term> poly, pseudo;
  for (const auto& t : f.terms()) {
    (is_integral(t.exponent) ? poly : pseudo).push_back(t);
  }
  return PolySplit{PseudoPolynomial(std::move(poly)), PseudoPolynomial(std::move(pseudo))};
}

enum class FCondition { DegreeAtLeast12, PseudoDegreeAbove4, PolyDegreeAbovePseudo, PolyIsFull };

constexpr std::string_view to_string(FCondition c) {
  switch (c) {
    case FCondition::DegreeAtLeast12: return "k >= 12";
    case FCondition::PseudoDegreeAbove4: return "theta > 4";
    case FCondition::PolyDegreeAbovePseudo: return "k > theta";
    case FCondition::PolyIsFull: return "P is full";
  }
  return "?";
}

struct PropertyFReport {
  long k = 0;
  Rational theta;
  bool is_full = false;
  bool holds = false;
  std::vector<FCondition> violated_conditions;
};

inline PropertyFReport check_property_f(const PseudoPolynomial& f) {
  const PolySplit parts = split(f);
  if (parts.poly_part.empty()) fail(ErrorCode::MissingPolynomialPart, f.to_string());
  if (parts.pseudo_part.empty()) fail(ErrorCode::MissingPseudoPart, f.to_string());

  PropertyFReport r;
  const BigInt k = parts.poly_part.degree().get_num();
  if (!k.fits_slong_p()) fail(ErrorCode::OutOfRange, "polynomial degree too large");
  r.k = k.get_si();
  r.theta = parts.pseudo_part.degree();
  // full: every power x^1..x^k is present (coefficients are positive by construction)
  r.is_full = parts.poly_part.size() == static_cast<std::size_t>(r.k);

  if (r.k < 12) r.violated_conditions.push_back(FCondition::DegreeAtLeast12);
  if (!(r.theta > 4)) r.violated_conditions.push_back(FCondition::PseudoDegreeAbove4);
  if (!(Rational(r.k) > r.theta)) r.violated_conditions.push_back(FCondition::PolyDegreeAbovePseudo);
  if (!r.is_full) r.violated_conditions.push_back(FCondition::PolyIsFull);
  r.holds = r.violated_conditions.empty();
  return r;
}

/// Pseudo-polynomial text: "coeff*x^expo" monomials joined by '+', with
/// decimal or fractional numbers, e.g. "1*x^12 + 3/2*x^9/2". The coefficient
/// and "^expo" may be omitted ("x", "2x^3", "x^(5/2)").
inline PseudoPolynomial parse_pseudo(std::string_view text, bool strict) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  auto bad = [&](const std::string& why) {
    fail(ErrorCode::MalformedPolynomial, "'" + std::string(text) + "': " + why);
  };
  if (s.empty()) bad("empty");
  std::vector<Term> terms;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t plus = s.find('+', start);
    // a '+' directly after 'e'/'E' inside a number belongs to an exponent
    while (plus != std::string::npos && plus > 0 && (s[plus - 1] == 'e' || s[plus - 1] == 'E')) {
      plus = s.find('+', plus + 1);
    }
    std::string mono = s.substr(start, plus == std::string::npos ? std::string::npos : plus - start);
    if (mono.empty()) bad("empty monomial");
    std::size_t xpos = mono.find('x');
    if (xpos == std::string::npos) bad("monomial '" + mono + "' has no x");
    std::string coeff = mono.substr(0, xpos);
    std::string rest = mono.substr(xpos + 1);
    if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
    Term t;
    try {
      t.coefficient = coeff.empty() ? Rational(1) : parse_rational(coeff);
      if (rest.empty()) {
        t.exponent = 1;
      } else {
        if (rest.front() != '^') bad("expected '^' after x in '" + mono + "'");
        rest.erase(0, 1);
        if (rest.size() >= 2 && rest.front() == '(' && rest.back() == ')') rest = rest.substr(1, rest.size() - 2);
        t.exponent = parse_rational(rest);
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::MalformedNumber) bad(e.what());
      throw;
    }
    terms.push_back(t);
    if (plus == std::string::npos) break;
    start = plus + 1;
  }
  return build_pseudo(std::move(terms), strict);
}

namespace detail {

constexpr Precision kEvalGuardBits = 16;

// Exact value of c * x^(a/b) when x is a perfect b-th power.
inline std::optional<Rational> exact_term(const Term& t, const BigInt& x) {
  const unsigned long den = t.exponent.get_den().get_ui();
  const unsigned long num = t.exponent.get_num().get_ui();
  BigInt root;
  if (den == 1) {
    root = x;
  } else if (mpz_root(root.get_mpz_t(), x.get_mpz_t(), den) == 0) {
    return std::nullopt;
  }
  Rational v(pow_int(root, num));
  return Rational(v * t.coefficient);
}

inline Interval term_enclosure(const Term& t, const Interval& x, Precision w) {
  return x.pow_rational(t.exponent, w).scaled(t.coefficient);
}

inline Interval term_enclosure(const Term& t, const BigInt& x, Precision w) {
  const unsigned long den = t.exponent.get_den().get_ui();
  const unsigned long num = t.exponent.get_num().get_ui();
  Interval v = Interval::point(pow_int(x, num), w);
  if (den != 1) {
    mpfr_rootn_ui(v.lower().get(), v.lower().get(), den, MPFR_RNDD);
    mpfr_rootn_ui(v.upper().get(), v.upper().get(), den, MPFR_RNDU);
  }
  return v.scaled(t.coefficient);
}

inline void check_exponents_fit(const PseudoPolynomial& f) {
  for (const auto& t : f.terms()) {
    if (!t.exponent.get_num().fits_ulong_p() || !t.exponent.get_den().fits_ulong_p()) {
      fail(ErrorCode::PrecisionUnrepresentable, "exponent " + to_fraction_text(t.exponent));
    }
  }
}

}  // namespace detail

/// Enclosure of f(x) at a stated precision. Endpoints carry
/// precision_bits + 16 guard bits, so the relative width stays far below
/// 2^(4 - precision_bits).
struct CertifiedInterval {
  Interval enclosure;
  Precision precision_bits = 0;

  const BigFloat& lower() const { return enclosure.lower(); }
  const BigFloat& upper() const { return enclosure.upper(); }
};

inline CertifiedInterval eval_certified(const PseudoPolynomial& f, const Rational& x,
                                        Precision precision_bits) {
  if (sgn(x) <= 0) fail(ErrorCode::DomainError, "x must be positive");
  if (precision_bits < 64) fail(ErrorCode::PrecisionUnrepresentable, "precision below 64 bits");
  check_precision(precision_bits + detail::kEvalGuardBits);
  detail::check_exponents_fit(f);
  const Precision w = precision_bits + detail::kEvalGuardBits;
  Interval sum = Interval::point(0L, w);
  if (x.get_den() == 1) {
    for (const auto& t : f.terms()) sum = sum + detail::term_enclosure(t, x.get_num(), w);
  } else {
    Interval xi = Interval::point(x, w);
    for (const auto& t : f.terms()) sum = sum + detail::term_enclosure(t, xi, w);
  }
  return {std::move(sum), precision_bits};
}

inline CertifiedInterval eval_certified(const PseudoPolynomial& f, const BigInt& x,
                                        Precision precision_bits) {
  return eval_certified(f, Rational(x), precision_bits);
}

/// f(x) exactly when every term is rational at the integer x.
inline std::optional<Rational> eval_exact(const PseudoPolynomial& f, const BigInt& x) {
  detail::check_exponents_fit(f);
  Rational sum(0);
  for (const auto& t : f.terms()) {
    auto v = detail::exact_term(t, x);
    if (!v) return std::nullopt;
    sum += *v;
  }
  sum.canonicalize();
  return sum;
}

constexpr Precision kDefaultPrecisionCap = 16384;
constexpr Precision kInitialFloorPrecision = 64;

/// Cap for floor certification; PPLAB_PRECISION_CAP overrides the default.
inline Precision default_precision_cap() {
  if (const char* env = std::getenv("PPLAB_PRECISION_CAP")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 64) return static_cast<Precision>(v);
  }
  return kDefaultPrecisionCap;
}

struct FloorCertificate {
  BigInt value;
  bool exact = false;            ///< decided by exact rational arithmetic
  Precision certifying_bits = 0;  ///< precision of the deciding enclosure (0 when exact)
};

/// floor(f(x)) for an integer x >= 1. Exact values are detected
/// symbolically first; otherwise precision doubles from 64 bits until the
/// enclosure fixes the floor. With positive coefficients f(x) is rational
/// only when every term is, so the escalation terminates for all other
/// inputs once the cap is large enough.
inline FloorCertificate floor_certified(const PseudoPolynomial& f, const BigInt& x,
                                        Precision precision_cap_bits = kDefaultPrecisionCap) {
  if (x < 1) fail(ErrorCode::DomainError, "x must be >= 1");
  if (auto exact = eval_exact(f, x)) return {floor_of(*exact), true, 0};
  for (Precision p = kInitialFloorPrecision; p <= precision_cap_bits; p *= 2) {
    CertifiedInterval iv = eval_certified(f, x, p);
    if (auto n = iv.enclosure.decided_floor()) return {*n, false, p};
  }
  fail(ErrorCode::AmbiguousFloor, "floor of f(" + x.get_str() + ") undecided at " +
                                      std::to_string(precision_cap_bits) + " bits");
}

inline FloorCertificate floor_certified(const PseudoPolynomial& f, std::uint64_t x,
                                        Precision precision_cap_bits = kDefaultPrecisionCap) {
  return floor_certified(f, to_bigint(x), precision_cap_bits);
}

struct DiffValue {
  BigFloat value;      ///< nearest at the requested precision
  Interval enclosure;  ///< certified, narrower than one ulp of value
};

/// f_h(u, v) = f(u(v + h)) - f(uv), the difference taken in the second
/// variable.
inline DiffValue diff_value(const PseudoPolynomial& f, const Rational& u, const Rational& v,
                            const Rational& h, Precision precision_bits = 128) {
  if (sgn(u) <= 0 || sgn(v) <= 0) fail(ErrorCode::DomainError, "u and v must be positive");
  if (sgn(Rational(v + h)) <= 0) fail(ErrorCode::DomainError, "v + h must be positive");
  if (precision_bits < 64) fail(ErrorCode::PrecisionUnrepresentable, "precision below 64 bits");
  if (sgn(h) == 0) {
    return {BigFloat(precision_bits), Interval::point(0L, precision_bits)};
  }
  const Rational a = u * (v + h);
  const Rational b = u * v;
  Precision p = precision_bits;
  for (int round = 0; round < 16; ++round, p *= 2) {
    Interval d = eval_certified(f, a, p).enclosure - eval_certified(f, b, p).enclosure;
    BigFloat value(precision_bits);
    mpfr_set(value.get(), d.midpoint().get(), MPFR_RNDN);
    // accept once the enclosure is within one ulp of the rounded value
    BigFloat ulp(precision_bits + 8);
    if (value.is_zero()) {
      mpfr_set_ui_2exp(ulp.get(), 1, -precision_bits, MPFR_RNDN);
    } else {
      mpfr_set_ui_2exp(ulp.get(), 1, mpfr_get_exp(value.get()) - precision_bits, MPFR_RNDN);
    }
    if (mpfr_lessequal_p(d.width().get(), ulp.get())) return {std::move(value), std::move(d)};
  }
  fail(ErrorCode::PrecisionUnrepresentable, "difference could not be resolved");
}

}  // namespace pplab
