#pragma once

// Exponential sums sum w_n e(t_n) with certified rounding bounds, the
// Weyl-van der Corput inequality as a checkable statement, and the
// theoretical bounds used for empirical comparison.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pplab/arith.hpp"
#include "pplab/certified_real.hpp"
#include "pplab/dioph.hpp"
#include "pplab/error.hpp"
#include "pplab/exponents.hpp"
#include "pplab/interval.hpp"
#include "pplab/parallel.hpp"
#include "pplab/pseudopoly.hpp"

namespace pplab {

constexpr std::uint64_t kMaxSumLength = 1'000'000'000;
constexpr std::uint64_t kMaxVonMangoldtX = 100'000'000;
constexpr Precision kDefaultSumPrecision = 128;

struct ExpSumResult {
  BigFloat re;
  BigFloat im;
  double magnitude = 0;
  std::uint64_t term_count = 0;
  double weight_mass = 0;  ///< sum of |w_n|
  double rounding_error_bound = 0;
  Precision working_precision = kDefaultSumPrecision;

  std::complex<double> value() const { return {re.to_double(), im.to_double()}; }
};

/// Enclosure of the phase t_n at a requested precision.
using PhaseFn = std::function<Interval(std::uint64_t n, Precision p)>;

/// Phase n -> y f(n).
inline PhaseFn make_phase(const PseudoPolynomial& f, const CertifiedReal& y) {
  if (y.is_exact() && sgn(*y.exact()) == 0) {
    return [](std::uint64_t, Precision p) { return Interval::point(0L, p); };
  }
  return [f, y](std::uint64_t n, Precision p) {
    return y.enclose(p) * eval_certified(f, to_bigint(n), std::max<Precision>(p, 64)).enclosure;
  };
}

namespace detail {

struct Weight {
  bool unit = true;
  BigFloat re;
  BigFloat im;
  double abs = 1;  ///< upper bound on |w|
  double err = 0;  ///< bound on |w - (re + i im)|
};

struct Partial {
  BigFloat re;
  BigFloat im;
  long double err = 0;
  long double mass = 0;
  std::uint64_t count = 0;
};

// t - round(t) narrowed to width <= 2^-p, escalating the phase precision.
inline Interval reduced_phase(const PhaseFn& phase, std::uint64_t n, Precision p) {
  Precision w = p + 16;
  Interval t = phase(n, w);
  const long E = t.magnitude_exponent();
  if (E > 0) {
    w = p + 32 + static_cast<Precision>(E);
    t = phase(n, w);
  }
  BigFloat limit(64);
  mpfr_set_ui_2exp(limit.get(), 1, -p, MPFR_RNDN);
  for (int round = 0; round < 8; ++round) {
    BigInt n0;
    mpfr_get_z(n0.get_mpz_t(), t.midpoint().get(), MPFR_RNDN);
    Interval r = t - Interval::point(n0, w);
    if (mpfr_lessequal_p(r.width().get(), limit.get())) return r;
    w *= 2;
    t = phase(n, w);
  }
  fail(ErrorCode::PrecisionExhausted, "phase at n = " + std::to_string(n) + " could not be reduced mod 1");
}

inline long double pow2(long e) { return std::ldexp(1.0L, static_cast<int>(e)); }

template <typename ArgFn, typename WeightFn>
ExpSumResult weighted_sum(std::uint64_t count, ArgFn&& arg, const PhaseFn& phase, WeightFn&& weight,
                          Precision p, unsigned threads) {
  if (p < 64) fail(ErrorCode::PrecisionUnrepresentable, "working precision below 64 bits");
  check_precision(p);
  const Precision acc = p + 16 + 2 * static_cast<Precision>(bit_length(to_bigint(count + 1)));
  const std::uint64_t chunks = (count + kChunkSize - 1) / kChunkSize;

  auto partials = run_chunks<Partial>(chunks, threads, [&](std::uint64_t c) {
    Partial part{BigFloat(acc), BigFloat(acc)};
    BigFloat two_pi(acc + 8), ang(acc + 8), s(acc), co(acc), tr(acc), ti(acc);
    mpfr_const_pi(two_pi.get(), MPFR_RNDN);
    mpfr_mul_2ui(two_pi.get(), two_pi.get(), 1, MPFR_RNDN);
    Weight w{true, BigFloat(acc), BigFloat(acc)};
    const std::uint64_t end = std::min(count, (c + 1) * kChunkSize);
    for (std::uint64_t i = c * kChunkSize; i < end; ++i) {
      const std::uint64_t n = arg(i);
      weight(i, acc, w);
      Interval r = reduced_phase(phase, n, p);
      mpfr_mul(ang.get(), r.midpoint().get(), two_pi.get(), MPFR_RNDN);
      mpfr_sin_cos(s.get(), co.get(), ang.get(), MPFR_RNDN);
      // |e(t) - e(mid)| <= pi * width; angle and sin/cos rounding <= 2^(5 - acc)
      const long double err_e = 3.1416L * static_cast<long double>(r.width_double()) + pow2(5 - acc);
      if (w.unit) {
        mpfr_add(part.re.get(), part.re.get(), co.get(), MPFR_RNDN);
        mpfr_add(part.im.get(), part.im.get(), s.get(), MPFR_RNDN);
        part.err += err_e;
      } else {
        mpfr_fmms(tr.get(), w.re.get(), co.get(), w.im.get(), s.get(), MPFR_RNDN);
        mpfr_fmma(ti.get(), w.re.get(), s.get(), w.im.get(), co.get(), MPFR_RNDN);
        mpfr_add(part.re.get(), part.re.get(), tr.get(), MPFR_RNDN);
        mpfr_add(part.im.get(), part.im.get(), ti.get(), MPFR_RNDN);
        part.err += w.abs * err_e + w.err * (1 + err_e) + 4 * w.abs * pow2(-acc);
      }
      part.mass += w.abs;
      ++part.count;
    }
    return part;
  });

  Partial total = tree_reduce<Partial>(
      std::move(partials),
      [acc](const Partial& a, const Partial& b) {
        Partial out{BigFloat(acc), BigFloat(acc)};
        mpfr_add(out.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
        mpfr_add(out.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
        out.err = a.err + b.err;
        out.mass = a.mass + b.mass;
        out.count = a.count + b.count;
        return out;
      },
      Partial{BigFloat(acc), BigFloat(acc)});

  ExpSumResult res;
  res.re = std::move(total.re);
  res.im = std::move(total.im);
  res.term_count = total.count;
  res.weight_mass = static_cast<double>(total.mass);
  res.working_precision = p;
  // every addition (terms and tree nodes) rounds by at most 2^(1-acc) * mass
  // in each component
  const long double adds = static_cast<long double>(count + chunks + 1);
  const long double bound = count == 0 ? 0.0L : (total.err + 2 * adds * pow2(1 - acc) * (total.mass + 1)) * 1.0001L;
  res.rounding_error_bound = static_cast<double>(bound);
  const double a = res.re.to_double(), b = res.im.to_double();
  res.magnitude = std::hypot(a, b);
  return res;
}

}  // namespace detail

/// sum_{n=lo}^{hi} e(phase(n)).
inline ExpSumResult exp_sum(const PhaseFn& phase, std::uint64_t lo, std::uint64_t hi,
                            Precision precision_bits = kDefaultSumPrecision, unsigned threads = 1) {
  const std::uint64_t count = hi >= lo ? hi - lo + 1 : 0;
  if (count > kMaxSumLength) fail(ErrorCode::RangeTooLong, "range length " + std::to_string(count) + " > 10^9");
  return detail::weighted_sum(
      count, [lo](std::uint64_t i) { return lo + i; }, phase, [](std::uint64_t, Precision, detail::Weight&) {},
      precision_bits, threads);
}

/// sum over primes p <= X of e(y f(p)).
inline ExpSumResult prime_exp_sum(const PseudoPolynomial& f, const CertifiedReal& y, std::uint64_t X,
                                  const PrimeTable& primes, Precision precision_bits = kDefaultSumPrecision,
                                  unsigned threads = 1) {
  if (primes.limit() < X) {
    fail(ErrorCode::PrimeTableTooSmall,
         "prime table limit " + std::to_string(primes.limit()) + " < X = " + std::to_string(X));
  }
  auto ps = primes.primes_upto(X);
  return detail::weighted_sum(
      ps.size(), [ps](std::uint64_t i) { return static_cast<std::uint64_t>(ps[i]); }, make_phase(f, y),
      [](std::uint64_t, Precision, detail::Weight&) {}, precision_bits, threads);
}

/// Prime powers p^e <= X in increasing order, with their base p.
inline std::vector<std::pair<std::uint64_t, std::uint32_t>> prime_powers_upto(std::uint64_t X) {
  PrimeTable t = sieve(X);
  std::vector<std::pair<std::uint64_t, std::uint32_t>> out;
  for (std::uint32_t p : t.primes()) {
    for (std::uint64_t q = p; q <= X; q *= p) {
      out.emplace_back(q, p);
      if (q > X / p) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// sum_{n <= X} Lambda(n) e(y f(n)).
inline ExpSumResult vonmangoldt_exp_sum(const PseudoPolynomial& f, const CertifiedReal& y, std::uint64_t X,
                                        Precision precision_bits = kDefaultSumPrecision, unsigned threads = 1) {
  if (X > kMaxVonMangoldtX) fail(ErrorCode::RangeTooLong, "X = " + std::to_string(X) + " > 10^8");
  const auto pp = prime_powers_upto(X);
  return detail::weighted_sum(
      pp.size(), [&pp](std::uint64_t i) { return pp[i].first; }, make_phase(f, y),
      [&pp](std::uint64_t i, Precision acc, detail::Weight& w) {
        w.unit = false;
        mpfr_set_prec(w.re.get(), acc);
        mpfr_set_ui(w.re.get(), pp[i].second, MPFR_RNDN);
        mpfr_log(w.re.get(), w.re.get(), MPFR_RNDN);
        mpfr_set_zero(w.im.get(), 1);
        w.abs = std::log(static_cast<double>(pp[i].second)) * (1 + 1e-12);
        w.err = w.abs * static_cast<double>(detail::pow2(-acc));
      },
      precision_bits, threads);
}

struct BilinearSpec {
  Family family = Family::TypeI;
  std::uint64_t M = 1;
  std::uint64_t N = 1;  ///< Type II only
  std::uint64_t X = 2;
  std::vector<std::complex<double>> a;  ///< a[m - 1]
  std::vector<std::complex<double>> b;  ///< b[n - 1], Type II only
  bool divisor_bounded = false;         ///< require |a_m| <= d_4(m)
  CertifiedReal y = CertifiedReal(Rational(0));
  PseudoPolynomial f;
};

/// Type I: sum_{m <= M} sum_{X/2 < mn <= X} a_m e(y f(mn)).
/// Type II: the same over M < m <= 2M, N < n <= 2N with weights a_m b_n.
inline ExpSumResult bilinear_sum(const BilinearSpec& spec, Precision precision_bits = kDefaultSumPrecision,
                                 unsigned threads = 1) {
  const bool type2 = spec.family == Family::TypeII;
  if (spec.M == 0 || spec.X < 2) fail(ErrorCode::SpecInvalid, "M must be positive and X at least 2");
  if (spec.f.empty()) fail(ErrorCode::SpecInvalid, "missing pseudo-polynomial");
  const std::uint64_t m_lo = type2 ? spec.M + 1 : 1;
  const std::uint64_t m_hi = std::min(type2 ? 2 * spec.M : spec.M, spec.X);
  if (spec.a.size() < m_hi) fail(ErrorCode::SpecInvalid, "coefficient sequence a is shorter than the m range");
  if (type2) {
    if (spec.N == 0) fail(ErrorCode::SpecInvalid, "N must be positive");
    if (spec.b.size() < 2 * spec.N) fail(ErrorCode::SpecInvalid, "coefficient sequence b is shorter than 2N");
  }
  if (spec.divisor_bounded) {
    for (std::uint64_t m = m_lo; m <= m_hi; ++m) {
      if (std::abs(spec.a[m - 1]) > static_cast<double>(divisor_count_k(m, 4))) {
        fail(ErrorCode::SpecInvalid, "|a_" + std::to_string(m) + "| exceeds d_4");
      }
    }
  }

  // n range per m, flattened through prefix offsets
  std::vector<std::uint64_t> ms, n_first, offsets{0};
  for (std::uint64_t m = m_lo; m <= m_hi; ++m) {
    // X/2 < mn  <=>  n > floor(X / (2m))
    std::uint64_t lo = spec.X / (2 * m) + 1;
    std::uint64_t hi = spec.X / m;
    if (type2) {
      lo = std::max(lo, spec.N + 1);
      hi = std::min(hi, 2 * spec.N);
    }
    if (hi < lo) continue;
    ms.push_back(m);
    n_first.push_back(lo);
    offsets.push_back(offsets.back() + (hi - lo + 1));
  }
  const std::uint64_t count = offsets.back();
  if (count > kMaxSumLength) fail(ErrorCode::RangeTooLong, "bilinear sum has too many terms");

  auto locate = [&](std::uint64_t i) {
    const auto it = std::upper_bound(offsets.begin(), offsets.end(), i);
    const std::size_t row = static_cast<std::size_t>(it - offsets.begin()) - 1;
    return std::make_pair(ms[row], n_first[row] + (i - offsets[row]));
  };
  return detail::weighted_sum(
      count,
      [&](std::uint64_t i) {
        auto [m, n] = locate(i);
        return m * n;
      },
      make_phase(spec.f, spec.y),
      [&](std::uint64_t i, Precision acc, detail::Weight& w) {
        auto [m, n] = locate(i);
        const std::complex<double> am = spec.a[m - 1];
        const std::complex<double> bn = type2 ? spec.b[n - 1] : std::complex<double>(1.0, 0.0);
        w.unit = false;
        mpfr_set_prec(w.re.get(), acc);
        mpfr_set_prec(w.im.get(), acc);
        BigFloat ar(acc), ai(acc), br(acc), bi(acc);
        mpfr_set_d(ar.get(), am.real(), MPFR_RNDN);
        mpfr_set_d(ai.get(), am.imag(), MPFR_RNDN);
        mpfr_set_d(br.get(), bn.real(), MPFR_RNDN);
        mpfr_set_d(bi.get(), bn.imag(), MPFR_RNDN);
        mpfr_fmms(w.re.get(), ar.get(), br.get(), ai.get(), bi.get(), MPFR_RNDN);
        mpfr_fmma(w.im.get(), ar.get(), bi.get(), ai.get(), br.get(), MPFR_RNDN);
        w.abs = std::abs(am) * std::abs(bn) * (1 + 1e-12);
        w.err = 2 * w.abs * static_cast<double>(detail::pow2(-acc));
      },
      precision_bits, threads);
}

struct BoundReport {
  double empirical = 0;
  double theoretical = 0;
  double ratio = 0;
  std::string bound_name;
  std::vector<std::pair<std::string, std::string>> parameters;
  bool holds = true;
};

/// |sum z_n|^2 <= (N+H)/(H+1) sum_{|h|<=H} (1 - |h|/(H+1)) |sum_n z_{n+h} conj(z_n)|.
inline BoundReport weyl_vdc_check(const std::vector<std::complex<double>>& z, std::size_t H) {
  const std::size_t N = z.size();
  if (H < 1 || H > N) fail(ErrorCode::HOutOfRange, "H must satisfy 1 <= H <= N");
  using C = std::complex<long double>;
  C total{};
  for (const auto& v : z) total += C(v);
  const long double lhs = std::norm(total);
  long double inner = 0;
  for (long h = -static_cast<long>(H); h <= static_cast<long>(H); ++h) {
    C corr{};
    for (long n = 0; n < static_cast<long>(N); ++n) {
      const long m = n + h;
      if (m < 0 || m >= static_cast<long>(N)) continue;
      corr += C(z[static_cast<std::size_t>(m)]) * std::conj(C(z[static_cast<std::size_t>(n)]));
    }
    inner += (1.0L - static_cast<long double>(std::labs(h)) / static_cast<long double>(H + 1)) * std::abs(corr);
  }
  const long double rhs =
      static_cast<long double>(N + H) / static_cast<long double>(H + 1) * inner;
  BoundReport rep;
  rep.bound_name = "weyl-van-der-corput";
  rep.empirical = static_cast<double>(lhs);
  rep.theoretical = static_cast<double>(rhs);
  rep.ratio = rhs > 0 ? static_cast<double>(lhs / rhs) : 0.0;
  rep.holds = lhs <= rhs * (1 + 1e-12L) + 1e-12L;
  rep.parameters = {{"N", std::to_string(N)}, {"H", std::to_string(H)}};
  return rep;
}

/// C X^(1+eps) [(F X^-j)^(1/(j(j-1))) + X^(-1/(j(j-1))) + F^(-2/(j^2(j-1)))].
inline double hb_derivative_bound(double F, double X, long j, double eps = 0, double C = 1) {
  if (j < 3 || !(F > 0) || !(X >= 2) || !(C > 0)) {
    fail(ErrorCode::BadParameters, "need j >= 3, F > 0, X >= 2, C > 0");
  }
  const long double jj = static_cast<long double>(j);
  const long double e1 = 1.0L / (jj * (jj - 1));
  const long double lF = std::log(static_cast<long double>(F));
  const long double lX = std::log(static_cast<long double>(X));
  const long double t1 = std::exp(e1 * (lF - jj * lX));
  const long double t2 = std::exp(-e1 * lX);
  const long double t3 = std::exp(-2.0L / (jj * jj * (jj - 1)) * lF);
  return static_cast<double>(C * std::exp((1 + eps) * lX) * (t1 + t2 + t3));
}

/// C X^(1+eps) (1/q + 1/X + q/X^j)^(1/(k(k-1))).
inline double bv_bound(const BigInt& q, double X, long j, long k, double eps = 0, double C = 1) {
  if (k < 3 || j < 2 || j > k || q < 1 || !(X > 0) || !(C > 0)) {
    fail(ErrorCode::BadParameters, "need 2 <= j <= k, k >= 3, q >= 1, X > 0, C > 0");
  }
  const long double lq = std::log(static_cast<long double>(q.get_d()));
  const long double lX = std::log(static_cast<long double>(X));
  const long double inner =
      std::exp(-lq) + std::exp(-lX) + std::exp(lq - static_cast<long double>(j) * lX);
  const long double kk = static_cast<long double>(k);
  return static_cast<double>(C * std::exp((1 + eps) * lX) * std::pow(inner, 1.0L / (kk * (kk - 1))));
}

enum class BoundStrategy { Dirichlet, Derivative };

inline BoundStrategy parse_strategy(std::string_view s) {
  if (s == "dirichlet" || s == "bv") return BoundStrategy::Dirichlet;
  if (s == "derivative" || s == "hb") return BoundStrategy::Derivative;
  fail(ErrorCode::MalformedNumber, "unknown strategy '" + std::string(s) + "'");
}

/// Empirical sum against a theoretical bound with parameters chosen as in
/// the estimates: the Dirichlet route picks j = ceil(-beta) + 1 (or k when
/// y = 0) and approximates y alpha_j; the derivative route takes
/// F = y X^theta and the Type I high-frequency j.
inline BoundReport bound_comparison(const PseudoPolynomial& f, const std::optional<Rational>& y_exponent,
                                    std::uint64_t X, BoundStrategy strategy, double C = 1, double eps = 0,
                                    Precision precision_bits = kDefaultSumPrecision, unsigned threads = 1) {
  if (X < 2) fail(ErrorCode::BadParameters, "X must be at least 2");
  const PolySplit parts = split(f);
  if (parts.poly_part.empty()) fail(ErrorCode::MissingPolynomialPart, "bound comparison needs a polynomial part");
  const long k = parts.poly_part.degree().get_num().get_si();
  const Rational Xq(to_bigint(X));
  const CertifiedReal y = y_exponent ? CertifiedReal::power(Xq, *y_exponent) : CertifiedReal(Rational(0));
  const std::string y_text = y_exponent ? "X^(" + to_fraction_text(*y_exponent) + ")" : "0";

  BoundReport rep;
  rep.parameters.emplace_back("X", std::to_string(X));
  rep.parameters.emplace_back("y", y_text);
  rep.parameters.emplace_back("k", std::to_string(k));
  rep.parameters.emplace_back("C", std::to_string(C));
  rep.parameters.emplace_back("eps", std::to_string(eps));

  if (strategy == BoundStrategy::Dirichlet) {
    rep.bound_name = "dirichlet";
    const long j = y_exponent ? select_j(JRule::TypeIIMid, Rational(0), *y_exponent, Rational(0), k) : k;
    Rational alpha_j(0);
    for (const auto& t : parts.poly_part.terms()) {
      if (t.exponent == j) alpha_j = t.coefficient;
    }
    const CertifiedReal target = y * CertifiedReal(alpha_j);
    Rational Q = pow_int(Xq, static_cast<unsigned long>(j - 1));
    if (bit_length(floor_of(Q)) > kMaxDirichletBits) Q = Rational(pow_int(BigInt(2), kMaxDirichletBits));
    const RationalApprox ap = dirichlet_approx(target, Q);
    const ExpSumResult s = exp_sum(make_phase(f, y), 1, X, precision_bits, threads);
    rep.empirical = s.magnitude;
    rep.theoretical = bv_bound(ap.q, static_cast<double>(X), j, k, eps, C);
    rep.parameters.emplace_back("j", std::to_string(j));
    rep.parameters.emplace_back("a", ap.a.get_str());
    rep.parameters.emplace_back("q", ap.q.get_str());
    rep.parameters.emplace_back("Q", to_fraction_text(Q));
  } else {
    rep.bound_name = "derivative";
    if (!y_exponent) fail(ErrorCode::BadParameters, "the derivative route needs y > 0");
    if (parts.pseudo_part.empty()) fail(ErrorCode::MissingPseudoPart, "the derivative route needs a pseudo part");
    const Rational theta = parts.pseudo_part.degree();
    Rational alpha = *y_exponent + theta;
    alpha.canonicalize();
    const long j = select_j(JRule::TypeIHigh, alpha, *y_exponent, Rational(0), k);
    const double F = std::pow(static_cast<double>(X), alpha.get_d());
    const ExpSumResult s = exp_sum(make_phase(f, y), X / 2 + 1, X, precision_bits, threads);
    rep.empirical = s.magnitude;
    rep.theoretical = hb_derivative_bound(F, static_cast<double>(X), j, eps, C);
    rep.parameters.emplace_back("j", std::to_string(j));
    rep.parameters.emplace_back("alpha", to_fraction_text(alpha));
    rep.parameters.emplace_back("F", std::to_string(F));
  }
  rep.ratio = rep.theoretical > 0 ? rep.empirical / rep.theoretical : 0;
  return rep;
}

}  // namespace pplab
