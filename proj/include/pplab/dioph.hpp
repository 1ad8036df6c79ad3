#pragma once

// Continued fractions with certified partial quotients, Dirichlet
// approximation, and sampled checks of the four Diophantine claims used in
// the mid/low-frequency estimates.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "pplab/certified_real.hpp"
#include "pplab/error.hpp"
#include "pplab/exponents.hpp"
#include "pplab/interval.hpp"
#include "pplab/pseudopoly.hpp"
#include "pplab/rational.hpp"

namespace pplab {

/// a/q in lowest terms with err an upper bound on |q x - a|.
struct RationalApprox {
  BigInt a;
  BigInt q{1};
  double err = 0;  ///< rounded upward
  int side = 0;    ///< sign of q x - a; 0 when exact
};

namespace detail {

inline double upper_double(const Rational& r) {
  BigFloat f(53);
  mpfr_set_q(f.get(), r.get_mpq_t(), MPFR_RNDU);
  return f.to_double(MPFR_RNDU);
}

inline Rational abs_q(const Rational& r) { return sgn(r) < 0 ? Rational(-r) : r; }

// Next partial quotient of r, replacing r by 1/(r - a); nullopt when the
// expansion ends.
inline std::optional<BigInt> cf_step(Rational& r, bool& done) {
  if (done) return std::nullopt;
  BigInt a = floor_of(r);
  Rational frac = r - Rational(a);
  if (sgn(frac) == 0) {
    done = true;
  } else {
    r = 1 / frac;
    r.canonicalize();
  }
  return a;
}

struct ConvergentState {
  BigInt p_prev{1}, q_prev{0};  // p_{n-1}, q_{n-1}
  BigInt p_prev2{0}, q_prev2{1};  // p_{n-2}, q_{n-2}

  void push(const BigInt& a) {
    BigInt p = a * p_prev + p_prev2;
    BigInt q = a * q_prev + q_prev2;
    p_prev2 = p_prev;
    q_prev2 = q_prev;
    p_prev = p;
    q_prev = q;
  }
};

inline RationalApprox approx_from(const BigInt& a, const BigInt& q, const Rational& lo, const Rational& hi) {
  const Rational e_lo = Rational(q) * lo - Rational(a);
  const Rational e_hi = Rational(q) * hi - Rational(a);
  RationalApprox out;
  out.a = a;
  out.q = q;
  out.err = upper_double(std::max(abs_q(e_lo), abs_q(e_hi)));
  if (sgn(e_lo) > 0 && sgn(e_hi) > 0) out.side = 1;
  if (sgn(e_lo) < 0 && sgn(e_hi) < 0) out.side = -1;
  return out;
}

inline std::vector<RationalApprox> cf_exact(const Rational& x, const BigInt& max_q) {
  std::vector<RationalApprox> out;
  Rational r = x;
  bool done = false;
  ConvergentState st;
  while (auto a = cf_step(r, done)) {
    st.push(*a);
    if (st.q_prev > max_q) break;
    out.push_back(approx_from(st.p_prev, st.q_prev, x, x));
  }
  return out;
}

}  // namespace detail

/// All convergents p/q of x with q <= max_q. Partial quotients are taken
/// only where both ends of the enclosure of x agree; precision doubles until
/// the expansion is decided past max_q or the cap is reached.
inline std::vector<RationalApprox> continued_fraction(const CertifiedReal& x, const BigInt& max_q,
                                                      Precision cap = 1 << 16) {
  if (max_q < 1) fail(ErrorCode::DomainError, "max_q must be at least 1");
  if (x.is_exact()) return detail::cf_exact(*x.exact(), max_q);

  const Precision start = std::max<Precision>(64, 2 * static_cast<Precision>(bit_length(max_q)) + 64);
  for (Precision p = start; p <= cap; p *= 2) {
    Interval iv = x.enclose(p);
    const Rational lo = iv.lower().to_rational();
    const Rational hi = iv.upper().to_rational();
    Rational rl = lo, rh = hi;
    bool dl = false, dh = false;
    detail::ConvergentState st;
    std::vector<RationalApprox> out;
    bool decided = false;
    for (;;) {
      auto al = detail::cf_step(rl, dl);
      auto ah = detail::cf_step(rh, dh);
      // a terminating endpoint expansion cannot certify the next quotient
      if (!al || !ah || *al != *ah || dl || dh) break;
      st.push(*al);
      if (st.q_prev > max_q) {
        decided = true;
        break;
      }
      out.push_back(detail::approx_from(st.p_prev, st.q_prev, lo, hi));
    }
    if (decided) return out;
  }
  fail(ErrorCode::PrecisionExhausted,
       "continued fraction of " + x.text() + " undecided at " + std::to_string(cap) + " bits");
}

/// Last convergent with q <= Q; satisfies q <= Q and |q x - a| < 1/Q.
inline RationalApprox dirichlet_approx(const CertifiedReal& x, const Rational& Q, Precision cap = 1 << 16) {
  if (Q < 1) fail(ErrorCode::DomainError, "Q must be at least 1");
  auto cf = continued_fraction(x, floor_of(Q), cap);
  return cf.back();
}

enum class ClaimId { C41, C42, C53, C54 };

constexpr std::string_view to_string(ClaimId c) {
  switch (c) {
    case ClaimId::C41: return "C41";
    case ClaimId::C42: return "C42";
    case ClaimId::C53: return "C53";
    case ClaimId::C54: return "C54";
  }
  return "?";
}

inline ClaimId parse_claim_id(std::string_view s) {
  if (s == "C41") return ClaimId::C41;
  if (s == "C42") return ClaimId::C42;
  if (s == "C53") return ClaimId::C53;
  if (s == "C54") return ClaimId::C54;
  fail(ErrorCode::MalformedNumber, "unknown claim '" + std::string(s) + "'");
}

struct ClaimInstance {
  ClaimId claim_id = ClaimId::C41;
  long k = 12;
  Rational theta{9, 2};
  long j = 0;  ///< 0 selects j from the claim's rule
  CertifiedReal coefficient = CertifiedReal(Rational(1));
  BigInt m{1};
  BigInt h{1};
  Rational y_exponent;
  BigInt X{1000};
};

struct ClaimReport {
  ClaimInstance instance;
  long j = 0;
  RationalApprox approx;
  Rational Q_used;
  bool scaled_down = false;  ///< Q was capped to stay within working precision
  Rational q_lower_target;
  Rational q_upper_target;
  bool lower_ok = false;
  bool dirichlet_ok = false;
  double ratio = 0;
  double alpha_target = 0;
};

constexpr unsigned long kMaxDirichletBits = 4096;

/// Half-open window [first, second) of admissible y exponents for a claim.
inline std::pair<Rational, Rational> claim_window(ClaimId id, const ExponentBundle& b) {
  auto q = [](Rational r) {
    r.canonicalize();
    return r;
  };
  switch (id) {
    case ClaimId::C41:
    case ClaimId::C42: return {b.window_low(), q(-b.theta + b.rho_star)};
    case ClaimId::C53: return {q(-b.theta), q(-b.theta + b.b_threshold())};
    case ClaimId::C54: return {b.window_low(), q(-b.theta)};
  }
  return {};
}

inline long claim_j(ClaimId id, const Rational& beta, const ExponentBundle& b) {
  switch (id) {
    case ClaimId::C41: return b.k;
    case ClaimId::C42: return select_j(JRule::TypeIMid, Rational(0), beta, b.tau_typeI_largeM, b.k);
    case ClaimId::C53: return select_j(JRule::TypeIIMid, Rational(0), beta, Rational(0), b.k);
    case ClaimId::C54: return select_j(JRule::TypeIILow, Rational(0), beta, b.tau_typeII_low, b.k);
  }
  return 0;
}

inline ClaimReport verify_claim(const ClaimInstance& inst) {
  if (inst.m < 1 || inst.h < 1 || inst.X < 1) fail(ErrorCode::DomainError, "m, h and X must be positive");
  const ExponentBundle b = compute_bundle(inst.k, inst.theta);
  const auto [wlo, whi] = claim_window(inst.claim_id, b);
  if (inst.y_exponent < wlo || inst.y_exponent >= whi) {
    fail(ErrorCode::WindowViolation, std::string(to_string(inst.claim_id)) + ": y exponent " +
                                         to_fraction_text(inst.y_exponent) + " outside [" +
                                         to_fraction_text(wlo) + ", " + to_fraction_text(whi) + ")");
  }
  ClaimReport rep;
  rep.instance = inst;
  rep.j = inst.j != 0 ? inst.j : claim_j(inst.claim_id, inst.y_exponent, b);
  if (rep.j < 2 || rep.j > inst.k) {
    fail(ErrorCode::JOutOfClaimRange, "j = " + std::to_string(rep.j) + " outside [2, k]");
  }

  const CertifiedReal y = CertifiedReal::power(Rational(inst.X), inst.y_exponent);
  Rational factor;
  unsigned long q_power = 0;
  if (inst.claim_id == ClaimId::C41) {
    factor = Rational(inst.k * pow_int(inst.m, static_cast<unsigned long>(inst.k)) * inst.h);
    q_power = static_cast<unsigned long>(inst.k - 2);
  } else {
    const auto j = static_cast<unsigned long>(rep.j);
    factor = Rational(pow_int(BigInt(inst.m + inst.h), j) - pow_int(inst.m, j));
    q_power = j - 1;
  }
  const CertifiedReal target = y * inst.coefficient * CertifiedReal(factor);
  rep.alpha_target = target.approx();

  const Rational Xm = Rational(inst.X) / Rational(inst.m);
  rep.q_lower_target = Xm;
  rep.q_upper_target = pow_int(Xm, q_power);
  rep.Q_used = rep.q_upper_target;
  if (rep.Q_used < 1) rep.Q_used = 1;
  if (bit_length(floor_of(rep.Q_used)) > kMaxDirichletBits) {
    rep.Q_used = Rational(pow_int(BigInt(2), kMaxDirichletBits));
    rep.scaled_down = true;
  }
  rep.approx = dirichlet_approx(target, rep.Q_used);
  rep.lower_ok = Rational(rep.approx.q) >= rep.q_lower_target;
  rep.ratio = Rational(Rational(rep.approx.q) / rep.q_lower_target).get_d();
  Rational err_exact;
  mpq_set_d(err_exact.get_mpq_t(), rep.approx.err);
  rep.dirichlet_ok = Rational(rep.approx.q) <= rep.Q_used && err_exact <= 1 / rep.Q_used;
  return rep;
}

struct ClaimSampling {
  long k = 12;
  Rational theta{9, 2};
  CertifiedReal coefficient = CertifiedReal::sqrt_of(3);
  std::uint64_t X_min = 1000;
  std::uint64_t X_max = 100000;
  std::uint64_t h_max = 10;
  long exponent_denominator = 60;
};

/// Seeded instances with y exponents drawn uniformly from the claim's window
/// on a grid of the given denominator.
inline std::vector<ClaimInstance> sample_claims(ClaimId id, std::size_t count, std::uint64_t seed,
                                                const ClaimSampling& s = {}) {
  const ExponentBundle b = compute_bundle(s.k, s.theta);
  const auto [wlo, whi] = claim_window(id, b);
  const BigInt lo_step = ceil_of(Rational(wlo * s.exponent_denominator));
  const BigInt hi_step = ceil_of(Rational(whi * s.exponent_denominator)) - 1;
  if (hi_step < lo_step) fail(ErrorCode::WindowViolation, "claim window contains no grid point");
  const std::uint64_t span = to_u64(BigInt(hi_step - lo_step)) + 1;

  std::mt19937_64 rng(seed);
  std::vector<ClaimInstance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    ClaimInstance inst;
    inst.claim_id = id;
    inst.k = s.k;
    inst.theta = s.theta;
    inst.coefficient = s.coefficient;
    const std::uint64_t X = s.X_min + rng() % (s.X_max - s.X_min + 1);
    inst.X = to_bigint(X);
    const auto m_max = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(X)));
    inst.m = to_bigint(1 + rng() % m_max);
    inst.h = to_bigint(1 + rng() % s.h_max);
    inst.y_exponent = Rational(lo_step + to_bigint(rng() % span), s.exponent_denominator);
    inst.y_exponent.canonicalize();
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace pplab
