#pragma once

// Exact-rational exponent bookkeeping: the technical parameters tau1, rho*,
// rho(f), the Type I split c, the Type II threshold B(eps), the differencing
// lengths tau, frequency-band classification and the choice of the
// differentiation / Weyl index j.

#include <algorithm>
#include <string>
#include <string_view>
#include <utility>

#include "pplab/error.hpp"
#include "pplab/rational.hpp"

namespace pplab {

/// Power savings (exponent of X subtracted from 1) stated for each
/// exponential-sum estimate, kept verbatim for the bound library.
struct StatedSavings {
  Rational type1_total;        // 2 rho* / (k (k-1)^2), also the high-frequency Type I saving
  Rational type1_mid;          // 1 / (5 k (k-1))
  Rational type2_total;        // 1/(3k(k+1)^2) - 1/(5k^2(k-1)(k+1)^2); note the positive loss term
  Rational type2_high;         // 2 / ((k+1)(3k/2 + 5/2)^2)
  Rational type2_transition;   // 1 / (10 k (k-1))
  Rational type2_low;          // 1 / (6 k (k-1))
};

struct ExponentBundle {
  long k = 0;
  Rational theta;
  Rational tau1;
  Rational rho_star;
  Rational rho;
  /// Saving in the prime exponential sum estimate, read as 3 rho(f). This is
  /// an interpretation: the estimate is written with an unsubscripted rho.
  Rational rho_lemma;
  Rational c_split;
  Rational tau_typeI_smallM;
  Rational tau_typeI_largeM;
  Rational tau_typeII_low;
  Rational tau_typeII_high_base;
  Rational tau_typeII_transition;  // 1/(5k(k-1)) with eps = 0
  StatedSavings savings;
  /// k >= 12, theta > 4 and k > theta (fullness of P is a property of f, not
  /// of the degrees).
  bool degrees_allow_f = false;
  bool all_positive = false;

  /// B(eps) = 2/3 - 1/(5k(k-1)) - eps.
  Rational b_threshold(const Rational& eps = Rational(0)) const {
    Rational b = Rational(2, 3) - Rational(1, 5 * k * (k - 1)) - eps;
    b.canonicalize();
    return b;
  }

  /// Lower end of the admissible frequency window, -23k/30.
  Rational window_low() const {
    Rational w(-23 * k, 30);
    w.canonicalize();
    return w;
  }
  Rational window_high() const { return Rational(1, 2); }
};

inline ExponentBundle compute_bundle(long k, const Rational& theta) {
  if (k <= 1) fail(ErrorCode::DegenerateDegrees, "k must be at least 2, got " + std::to_string(k));
  if (!(theta > 1)) fail(ErrorCode::DegenerateDegrees, "theta must exceed 1, got " + to_fraction_text(theta));
  auto q = [](Rational r) {
    r.canonicalize();
    return r;
  };
  const Rational K(k);
  ExponentBundle b;
  b.k = k;
  b.theta = theta;
  b.tau1 = q(Rational(1) / (K * (K - 1)));
  b.rho_star = q(std::min(Rational((theta - 1) / K - b.tau1), Rational(Rational(1, 4) - b.tau1)));
  const Rational inner = K * Rational(3, 2) + Rational(5, 2);
  const Rational branch_high = q(Rational(2) / ((K + 1) * inner * inner));
  const Rational branch_type1 = q(b.rho_star / (K * (K - 1) * (K - 1)));
  b.rho = q(Rational(1, 3) * std::min(branch_high, branch_type1));
  b.rho_lemma = q(3 * b.rho);
  b.c_split = q(std::min(Rational((theta - 1) / K), Rational(Rational(1, 2) + b.rho_star)));
  // undefined for k = 2; left at 0 there
  if (k > 2) b.tau_typeI_smallM = q(Rational(2) / (5 * (K - 1) * (K - 2)));
  b.tau_typeI_largeM = q(Rational(2) / (5 * K * (K - 1)));
  b.tau_typeII_low = q(Rational(2) / (3 * K * (K - 1)));
  b.tau_typeII_high_base = q(Rational(2) / (3 * K * (K + 1)));
  b.tau_typeII_transition = q(Rational(1) / (5 * K * (K - 1)));

  b.savings.type1_total = q(2 * b.rho_star / (K * (K - 1) * (K - 1)));
  b.savings.type1_mid = q(Rational(1) / (5 * K * (K - 1)));
  b.savings.type2_total =
      q(Rational(1) / (3 * K * (K + 1) * (K + 1)) - Rational(1) / (5 * K * K * (K - 1) * (K + 1) * (K + 1)));
  b.savings.type2_high = branch_high;
  b.savings.type2_transition = q(Rational(1) / (10 * K * (K - 1)));
  b.savings.type2_low = q(Rational(1) / (6 * K * (K - 1)));

  b.degrees_allow_f = k >= 12 && theta > 4 && K > theta;
  const Rational c = b.c_split;
  const Rational B0 = b.b_threshold();
  b.all_positive = sgn(b.tau1) > 0 && sgn(b.rho_star) > 0 && sgn(b.rho) > 0 && sgn(c) > 0 && sgn(B0) > 0;
  return b;
}

enum class Family { TypeI, TypeII };
enum class Band { High, Mid, Low };

constexpr std::string_view to_string(Family f) { return f == Family::TypeI ? "TypeI" : "TypeII"; }
constexpr std::string_view to_string(Band b) {
  switch (b) {
    case Band::High: return "High";
    case Band::Mid: return "Mid";
    case Band::Low: return "Low";
  }
  return "?";
}

/// A frequency y = X^beta placed in one band. alpha is defined by
/// y X^theta = X^alpha. Type I has two bands: High and Mid, the latter
/// covering intermediate and small frequencies together.
struct FrequencyRegime {
  Family family = Family::TypeI;
  Band band = Band::High;
  Rational alpha;
  Rational beta;
  std::pair<Rational, Rational> bounds_checked;  ///< [first, second) in exponents of X
};

/// Band boundaries belong to the higher-frequency band.
inline FrequencyRegime classify_frequency(const Rational& y_exponent, const ExponentBundle& bundle,
                                          Family family) {
  const Rational lo = bundle.window_low();
  const Rational hi = bundle.window_high();
  if (y_exponent < lo || y_exponent > hi) {
    fail(ErrorCode::OutOfRange, "y exponent " + to_fraction_text(y_exponent) + " outside [" +
                                    to_fraction_text(lo) + ", " + to_fraction_text(hi) + "]");
  }
  FrequencyRegime r;
  r.family = family;
  r.beta = y_exponent;
  r.alpha = y_exponent + bundle.theta;
  r.alpha.canonicalize();
  auto q = [](Rational x) {
    x.canonicalize();
    return x;
  };
  if (family == Family::TypeI) {
    const Rational high_start = q(-bundle.theta + bundle.rho_star);
    if (y_exponent >= high_start) {
      r.band = Band::High;
      r.bounds_checked = {std::max(high_start, lo), hi};
    } else {
      r.band = Band::Mid;
      r.bounds_checked = {lo, high_start};
    }
  } else {
    const Rational high_start = q(-bundle.theta + bundle.b_threshold());
    const Rational mid_start = q(-bundle.theta);
    if (y_exponent >= high_start) {
      r.band = Band::High;
      r.bounds_checked = {std::max(high_start, lo), hi};
    } else if (y_exponent >= mid_start) {
      r.band = Band::Mid;
      r.bounds_checked = {std::max(mid_start, lo), high_start};
    } else {
      r.band = Band::Low;
      r.bounds_checked = {lo, mid_start};
    }
  }
  return r;
}

/// Index-selection rules. The High rules choose the derivative-test level,
/// the Mid/Low rules choose which coefficient of the differenced polynomial
/// gets a Dirichlet approximation.
enum class JRule {
  TypeIHigh,    // max(k+1, ceil(5 alpha / 2) + 2)
  TypeIIHigh,   // max(k+1, ceil(3 (alpha + tau) / 2) + 1)
  TypeIMid,     // ceil(-beta + 2 tau) + 1
  TypeIIMid,    // ceil(-beta) + 1
  TypeIILow,    // ceil(-beta + tau) + 1
};

inline JRule rule_for(const FrequencyRegime& r) {
  if (r.family == Family::TypeI) return r.band == Band::High ? JRule::TypeIHigh : JRule::TypeIMid;
  switch (r.band) {
    case Band::High: return JRule::TypeIIHigh;
    case Band::Mid: return JRule::TypeIIMid;
    case Band::Low: return JRule::TypeIILow;
  }
  return JRule::TypeIIHigh;
}

inline bool is_claim_rule(JRule rule) {
  return rule == JRule::TypeIMid || rule == JRule::TypeIIMid || rule == JRule::TypeIILow;
}

/// j for a rule, from the regime's alpha / beta. Claim rules must land in
/// [2, k]; otherwise JOutOfClaimRange.
inline long select_j(JRule rule, const Rational& alpha, const Rational& beta, const Rational& tau, long k) {
  auto ceil_long = [](const Rational& r) {
    BigInt c = ceil_of(r);
    if (!c.fits_slong_p()) fail(ErrorCode::OutOfRange, "index overflow");
    return c.get_si();
  };
  long j = 0;
  switch (rule) {
    case JRule::TypeIHigh: j = std::max(k + 1, ceil_long(Rational(5, 2) * alpha) + 2); break;
    case JRule::TypeIIHigh: j = std::max(k + 1, ceil_long(Rational(3, 2) * (alpha + tau)) + 1); break;
    case JRule::TypeIMid: j = ceil_long(-beta + 2 * tau) + 1; break;
    case JRule::TypeIIMid: j = ceil_long(-beta) + 1; break;
    case JRule::TypeIILow: j = ceil_long(-beta + tau) + 1; break;
  }
  if (is_claim_rule(rule) && (j < 2 || j > k)) {
    fail(ErrorCode::JOutOfClaimRange,
         "j = " + std::to_string(j) + " outside [2, " + std::to_string(k) + "] for beta = " +
             to_fraction_text(beta));
  }
  return j;
}

inline long select_j(const FrequencyRegime& regime, const Rational& tau, const ExponentBundle& bundle) {
  return select_j(rule_for(regime), regime.alpha, regime.beta, tau, bundle.k);
}

/// The differencing exponent tau each regime uses by default (H = X^tau).
inline Rational default_tau(const FrequencyRegime& regime, const ExponentBundle& bundle) {
  switch (rule_for(regime)) {
    case JRule::TypeIHigh: return Rational(0);
    case JRule::TypeIMid: return bundle.tau_typeI_largeM;
    case JRule::TypeIIHigh: return bundle.tau_typeII_high_base;
    case JRule::TypeIIMid: return bundle.tau_typeII_transition;
    case JRule::TypeIILow: return bundle.tau_typeII_low;
  }
  return Rational(0);
}

}  // namespace pplab
