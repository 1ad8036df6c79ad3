#pragma once

// The minimum fractional-part search over primes, the large sieve witness
// search, the search for a prime p with m | floor(f(p)), power-law decay
// fitting, the desk-scale theorem check and the Case I sum demonstration.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pplab/arith.hpp"
#include "pplab/certified_real.hpp"
#include "pplab/error.hpp"
#include "pplab/expsum.hpp"
#include "pplab/exponents.hpp"
#include "pplab/interval.hpp"
#include "pplab/parallel.hpp"
#include "pplab/pseudopoly.hpp"
#include "pplab/rational.hpp"

namespace pplab {

struct SearchOptions {
  unsigned threads = 1;
  bool strict = false;  ///< rethrow AmbiguousFloor instead of counting it
  Precision cap = default_precision_cap();
};

struct MinSearchResult {
  std::uint64_t X = 0;
  std::uint64_t argmin_prime = 0;
  double min_distance = 0.5;
  std::string min_distance_text = "0.5";  ///< 20 significant digits
  BigInt floor_at_argmin;
  std::uint64_t evaluations = 0;
  std::uint64_t ambiguous_floors = 0;
  Precision precision_used = 0;
};

namespace detail {

struct PrimeDistance {
  std::uint64_t p = 0;
  bool ambiguous = false;
  BigInt floor;
  BigFloat distance{64};
  Precision precision = 0;
};

// ||xi n|| with at least 53 certified bits (absolute 2^-400 once the value is
// essentially zero).
inline std::pair<BigFloat, Precision> nearest_distance(const CertifiedReal& xi, const BigInt& n, Precision cap) {
  BigFloat out(64);
  if (sgn(n) == 0) return {out, 0};
  if (xi.is_exact()) {
    Rational t = *xi.exact() * Rational(n);
    t.canonicalize();
    Rational d = t - Rational(floor_of(Rational(t + Rational(1, 2))));
    if (sgn(d) < 0) d = -d;
    mpfr_set_q(out.get(), d.get_mpq_t(), MPFR_RNDN);
    return {out, 0};
  }
  const Precision base = static_cast<Precision>(bit_length(n));
  for (Precision w = base + 64; w <= base + cap; w += 64) {
    Interval t = xi.enclose(w) * Interval::point(n, w);
    Interval d = nearest_integer_distance(t);
    BigFloat tol(64);
    mpfr_mul_2si(tol.get(), d.upper().get(), -53, MPFR_RNDD);
    BigFloat floor_tol(64);
    mpfr_set_ui_2exp(floor_tol.get(), 1, -400, MPFR_RNDN);
    if (mpfr_lessequal_p(d.width().get(), tol.get()) || mpfr_lessequal_p(d.upper().get(), floor_tol.get())) {
      mpfr_set(out.get(), d.midpoint().get(), MPFR_RNDN);
      return {out, w};
    }
  }
  fail(ErrorCode::PrecisionExhausted, "distance for n = " + n.get_str() + " not resolved");
}

inline std::vector<PrimeDistance> prime_distances(const CertifiedReal& xi, const PseudoPolynomial& f,
                                                  std::span<const std::uint32_t> ps, const SearchOptions& opt) {
  const std::uint64_t chunks = (ps.size() + kChunkSize - 1) / kChunkSize;
  auto parts = run_chunks<std::vector<PrimeDistance>>(chunks, opt.threads, [&](std::uint64_t c) {
    std::vector<PrimeDistance> out;
    const std::size_t end = std::min<std::size_t>(ps.size(), (c + 1) * kChunkSize);
    for (std::size_t i = c * kChunkSize; i < end; ++i) {
      PrimeDistance d;
      d.p = ps[i];
      try {
        FloorCertificate fc = floor_certified(f, d.p, opt.cap);
        d.floor = fc.value;
        d.precision = fc.certifying_bits;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::AmbiguousFloor || opt.strict) throw;
        d.ambiguous = true;
      }
      if (!d.ambiguous) {
        auto [dist, w] = nearest_distance(xi, d.floor, opt.cap);
        d.distance = std::move(dist);
        d.precision = std::max(d.precision, w);
      }
      out.push_back(std::move(d));
    }
    return out;
  });
  std::vector<PrimeDistance> all;
  all.reserve(ps.size());
  for (auto& v : parts) {
    for (auto& d : v) all.push_back(std::move(d));
  }
  return all;
}

}  // namespace detail

/// Minimum of ||xi floor(f(p))|| over primes p <= X for every X in Xs, from
/// one pass over the primes up to max(Xs). Ties go to the smaller prime.
inline std::vector<MinSearchResult> min_fracpart_grid(const CertifiedReal& xi, const PseudoPolynomial& f,
                                                      std::vector<std::uint64_t> Xs, const PrimeTable& primes,
                                                      const SearchOptions& opt = {}) {
  if (Xs.empty()) return {};
  std::sort(Xs.begin(), Xs.end());
  if (Xs.front() < 2) fail(ErrorCode::DomainError, "X must be at least 2");
  if (primes.limit() < Xs.back()) fail(ErrorCode::PrimeTableTooSmall, "prime table does not reach X");
  const auto dists = detail::prime_distances(xi, f, primes.primes_upto(Xs.back()), opt);

  std::vector<MinSearchResult> out;
  MinSearchResult cur;
  const detail::PrimeDistance* best = nullptr;
  std::size_t i = 0;
  for (std::uint64_t X : Xs) {
    for (; i < dists.size() && dists[i].p <= X; ++i) {
      const auto& d = dists[i];
      ++cur.evaluations;
      cur.precision_used = std::max(cur.precision_used, d.precision);
      if (d.ambiguous) {
        ++cur.ambiguous_floors;
        continue;
      }
      if (!best || mpfr_less_p(d.distance.get(), best->distance.get())) best = &d;
    }
    cur.X = X;
    if (best) {
      cur.argmin_prime = best->p;
      cur.min_distance = best->distance.to_double();
      cur.min_distance_text = best->distance.to_string(20);
      cur.floor_at_argmin = best->floor;
    }
    out.push_back(cur);
  }
  return out;
}

inline MinSearchResult min_fracpart(const CertifiedReal& xi, const PseudoPolynomial& f, std::uint64_t X,
                                    const PrimeTable& primes, const SearchOptions& opt = {}) {
  return min_fracpart_grid(xi, f, {X}, primes, opt).front();
}

struct LargeSieveWitness {
  std::uint64_t m = 0;
  double magnitude = 0;
  double threshold = 0;  ///< N / (6M)
  bool hypothesis_ok = false;
};

/// Smallest m in [1, M] with |sum_j e(m x_j)| >= N/(6M), given
/// ||x_j|| >= 1/M for all j.
inline LargeSieveWitness large_sieve_witness(const std::vector<double>& x, std::uint64_t M) {
  if (x.empty() || M == 0) fail(ErrorCode::DomainError, "need N >= 1 and M >= 1");
  const Rational inv_m(1, static_cast<unsigned long>(M));
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!std::isfinite(x[j])) fail(ErrorCode::DomainError, "non-finite point");
    Rational v;
    mpq_set_d(v.get_mpq_t(), x[j]);
    Rational d = v - Rational(floor_of(Rational(v + Rational(1, 2))));
    if (sgn(d) < 0) d = -d;
    if (d < inv_m) {
      fail(ErrorCode::HypothesisViolated,
           "||x_" + std::to_string(j + 1) + "|| < 1/" + std::to_string(M));
    }
  }
  LargeSieveWitness w;
  w.hypothesis_ok = true;
  const long double N = static_cast<long double>(x.size());
  const long double threshold = N / (6.0L * static_cast<long double>(M));
  w.threshold = static_cast<double>(threshold);
  constexpr long double two_pi = 6.283185307179586476925286766559L;
  for (std::uint64_t m = 1; m <= M; ++m) {
    long double re = 0, im = 0;
    for (double xj : x) {
      // m x_j is exact in long double for m < 2^11
      long double t = static_cast<long double>(m) * static_cast<long double>(xj);
      t -= std::floor(t);
      re += std::cos(two_pi * t);
      im += std::sin(two_pi * t);
    }
    const long double mag = std::hypot(re, im);
    if (mag >= threshold) {
      w.m = m;
      w.magnitude = static_cast<double>(mag);
      return w;
    }
  }
  fail(ErrorCode::WitnessNotFound, "no m <= " + std::to_string(M) + " reaches N/(6M)");
}

/// N points with ||x_j|| >= 1/M, drawn on the grid a / (M 2^20).
inline std::vector<double> random_sieve_points(std::size_t N, std::uint64_t M, std::mt19937_64& rng) {
  if (M < 2) fail(ErrorCode::DomainError, "M must be at least 2 for the hypothesis to be satisfiable");
  const std::uint64_t scale = std::uint64_t{1} << 20;
  const std::uint64_t D = M * scale;
  const Rational inv_m(1, static_cast<unsigned long>(M));
  std::vector<double> out;
  out.reserve(N);
  while (out.size() < N) {
    const std::uint64_t a = scale + rng() % (D - 2 * scale + 1);
    const double v = static_cast<double>(a) / static_cast<double>(D);
    Rational q;
    mpq_set_d(q.get_mpq_t(), v);
    Rational d = q - Rational(floor_of(Rational(q + Rational(1, 2))));
    if (sgn(d) < 0) d = -d;
    if (d >= inv_m) out.push_back(v);
  }
  return out;
}

struct MultipleSearchResult {
  bool found = false;
  std::uint64_t m = 0;
  std::uint64_t limit = 0;
  std::uint64_t p = 0;
  BigInt floor_value;
  std::uint64_t primes_checked = 0;
};

/// Smallest prime p <= limit with m | floor(f(p)).
inline MultipleSearchResult multiple_search(std::uint64_t m, const PseudoPolynomial& f, std::uint64_t limit,
                                            const PrimeTable* primes = nullptr,
                                            Precision cap = default_precision_cap()) {
  if (m < 2) fail(ErrorCode::DomainError, "m must be at least 2");
  if (limit < 2) fail(ErrorCode::DomainError, "limit must be at least 2");
  PrimeTable local;
  if (!primes || primes->limit() < limit) {
    local = sieve(limit);
    primes = &local;
  }
  MultipleSearchResult r;
  r.m = m;
  r.limit = limit;
  const BigInt mz = to_bigint(m);
  for (std::uint32_t p : primes->primes_upto(limit)) {
    ++r.primes_checked;
    const FloorCertificate fc = floor_certified(f, static_cast<std::uint64_t>(p), cap);
    if (mpz_divisible_p(fc.value.get_mpz_t(), mz.get_mpz_t())) {
      r.found = true;
      r.p = p;
      r.floor_value = fc.value;
      return r;
    }
  }
  return r;
}

struct DecayFit {
  std::vector<std::pair<double, double>> grid;
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  std::optional<Rational> rho_predicted;
};

/// Least squares of log(min_distance) against log(X).
inline DecayFit decay_fit(const std::vector<std::pair<double, double>>& points,
                          std::optional<Rational> rho_predicted = std::nullopt) {
  if (points.size() < 3) fail(ErrorCode::DegenerateFit, "need at least 3 points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].first > 0) || !(points[i].second > 0)) {
      fail(ErrorCode::DegenerateFit, "X and min_distance must be positive");
    }
    if (i > 0 && !(points[i].first > points[i - 1].first)) {
      fail(ErrorCode::DegenerateFit, "X must be strictly increasing");
    }
  }
  const long double n = static_cast<long double>(points.size());
  long double sx = 0, sy = 0;
  for (const auto& [X, d] : points) {
    sx += std::log(static_cast<long double>(X));
    sy += std::log(static_cast<long double>(d));
  }
  const long double mx = sx / n, my = sy / n;
  long double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [X, d] : points) {
    const long double u = std::log(static_cast<long double>(X)) - mx;
    const long double v = std::log(static_cast<long double>(d)) - my;
    sxx += u * u;
    sxy += u * v;
    syy += v * v;
  }
  if (sxx == 0) fail(ErrorCode::DegenerateFit, "zero variance in log X");
  DecayFit fit;
  fit.grid = points;
  const long double slope = sxy / sxx;
  fit.slope = static_cast<double>(slope);
  fit.intercept = static_cast<double>(my - slope * mx);
  fit.r_squared = syy == 0 ? 1.0 : static_cast<double>(sxy * sxy / (sxx * syy));
  fit.rho_predicted = std::move(rho_predicted);
  return fit;
}

/// X^(-e) for a rational exponent, to double precision.
inline double power_of_x(std::uint64_t X, const Rational& e) {
  BigFloat lx(128), out(128);
  mpfr_set_ui(lx.get(), X, MPFR_RNDN);
  mpfr_log(lx.get(), lx.get(), MPFR_RNDN);
  mpfr_mul_q(out.get(), lx.get(), e.get_mpq_t(), MPFR_RNDN);
  mpfr_exp(out.get(), out.get(), MPFR_RNDN);
  return out.to_double();
}

struct SanityReport {
  MinSearchResult search;
  Rational rho;
  double threshold = 0;  ///< X^(-rho)
  bool holds = false;
  double margin = 0;  ///< threshold - observed minimum
};

/// Checks min ||xi floor(f(p))|| <= X^(-rho(f)) with constant 1 and eps = 0.
inline SanityReport theorem_sanity(const CertifiedReal& xi, const PseudoPolynomial& f, std::uint64_t X,
                                   const PrimeTable& primes, const SearchOptions& opt = {}) {
  const PropertyFReport pf = check_property_f(f);
  if (!pf.holds) fail(ErrorCode::PreconditionFailed, "f does not have property (F)");
  if (X < 100) fail(ErrorCode::PreconditionFailed, "X must be at least 100");
  const ExponentBundle b = compute_bundle(pf.k, pf.theta);
  SanityReport rep;
  rep.search = min_fracpart(xi, f, X, primes, opt);
  rep.rho = b.rho;
  rep.threshold = power_of_x(X, -b.rho);
  rep.holds = rep.search.min_distance <= rep.threshold;
  rep.margin = rep.threshold - rep.search.min_distance;
  return rep;
}

struct ExperimentConfig {
  Rational contradiction_exponent{1, 100000};  ///< rho~, with 0 < rho~ < rho(f)
  Rational H_case1{1, 6};
  Precision cap = default_precision_cap();
  std::uint64_t seed = 0x5EED;

  void validate(const ExponentBundle& b) const {
    if (sgn(contradiction_exponent) <= 0 || contradiction_exponent >= b.rho) {
      fail(ErrorCode::BadParameters, "contradiction exponent must lie in (0, rho(f))");
    }
    if (sgn(H_case1) <= 0) fail(ErrorCode::BadParameters, "H exponent must be positive");
  }
};

/// floor(a^e) for a positive integer a and a nonnegative rational e.
inline BigInt floor_power(const BigInt& a, const Rational& e) {
  const unsigned long num = e.get_num().get_ui();
  const unsigned long den = e.get_den().get_ui();
  BigInt r;
  const BigInt p = pow_int(a, num);
  mpz_root(r.get_mpz_t(), p.get_mpz_t(), den);
  return r;
}

struct Case1Report {
  std::uint64_t X = 0;
  std::uint64_t m = 1;
  BigInt M;  ///< floor(X^rho~)
  BigInt H;  ///< floor(X^(1/6))
  BigInt q;  ///< floor(m^(1/2) X^(rho/2)), rho the prime-sum saving
  Rational rho_lemma;
  double main_sum = 0;  ///< |sum_p e(m xi floor(f(p)))|
  double sum1 = 0;      ///< (1/q) |sum_p e(m xi f(p))|
  double sum2 = 0;      ///< sum_{0<|h|<=H} |sum_p e((m xi + h) f(p))| / |h|
  double sum3 = 0;      ///< (1/(H+1)) sum_{|h|<=H} (1 - |h|/(H+1)) |sum_p e(h f(p))|
  std::uint64_t prime_count = 0;
};

/// Numerical sizes of the three sums the Case I reduction leads to, next to
/// the original sum they control. Demonstrative only.
inline Case1Report case1_demo(const CertifiedReal& xi, const PseudoPolynomial& f, std::uint64_t X,
                              std::uint64_t m, const PrimeTable& primes, const ExperimentConfig& cfg = {},
                              unsigned threads = 1) {
  if (X < 2 || m < 1) fail(ErrorCode::DomainError, "need X >= 2 and m >= 1");
  if (primes.limit() < X) fail(ErrorCode::PrimeTableTooSmall, "prime table does not reach X");
  const PropertyFReport pf = check_property_f(f);
  const ExponentBundle b = compute_bundle(pf.k, pf.theta);
  cfg.validate(b);

  Case1Report rep;
  rep.X = X;
  rep.m = m;
  const BigInt Xz = to_bigint(X);
  rep.rho_lemma = b.rho_lemma;
  rep.M = floor_power(Xz, cfg.contradiction_exponent);
  rep.H = floor_power(Xz, cfg.H_case1);
  // m^(1/2) X^(a/(2b)) = (m^b X^a)^(1/(2b))
  {
    const unsigned long a = b.rho_lemma.get_num().get_ui();
    const unsigned long d = b.rho_lemma.get_den().get_ui();
    const BigInt inner = pow_int(to_bigint(m), d) * pow_int(Xz, a);
    mpz_root(rep.q.get_mpz_t(), inner.get_mpz_t(), 2 * d);
    if (rep.q < 1) rep.q = 1;
  }

  auto ps = primes.primes_upto(X);
  rep.prime_count = ps.size();
  std::vector<BigInt> floors;
  floors.reserve(ps.size());
  for (std::uint32_t p : ps) floors.push_back(floor_certified(f, static_cast<std::uint64_t>(p), cfg.cap).value);

  const CertifiedReal mxi = CertifiedReal(Rational(to_bigint(m))) * xi;
  auto prime_sum = [&](const PhaseFn& phase) {
    return detail::weighted_sum(
               ps.size(), [&](std::uint64_t i) { return i; }, phase,
               [](std::uint64_t, Precision, detail::Weight&) {}, kDefaultSumPrecision, threads)
        .magnitude;
  };
  // the phase functions below receive the prime's index
  auto poly_phase = [&](const CertifiedReal& y) -> PhaseFn {
    PhaseFn base = make_phase(f, y);
    return [base, ps](std::uint64_t i, Precision p) { return base(ps[i], p); };
  };

  rep.main_sum = prime_sum([&](std::uint64_t i, Precision p) {
    return mxi.enclose(p) * Interval::point(floors[i], p + static_cast<Precision>(bit_length(floors[i])));
  });
  rep.sum1 = prime_sum(poly_phase(mxi)) / rep.q.get_d();
  const long H = rep.H.get_si();
  for (long h = -H; h <= H; ++h) {
    if (h != 0) {
      const CertifiedReal shifted = mxi + CertifiedReal(Rational(h));
      rep.sum2 += prime_sum(poly_phase(shifted)) / static_cast<double>(std::labs(h));
    }
    const double w = 1.0 - static_cast<double>(std::labs(h)) / static_cast<double>(H + 1);
    rep.sum3 += w * prime_sum(poly_phase(CertifiedReal(Rational(h))));
  }
  rep.sum3 /= static_cast<double>(H + 1);
  return rep;
}

}  // namespace pplab
