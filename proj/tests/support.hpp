#pragma once

// Seeded generators and independent MPFR oracles shared by the suites. The
// oracles use raw MPFR calls at fixed high precision and never go through
// the library's interval code.

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace testsupport {

/// SplitMix64.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : s_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  /// Uniform in [lo, hi].
  std::uint64_t range(std::uint64_t lo, std::uint64_t hi) { return lo + next() % (hi - lo + 1); }
  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

 private:
  std::uint64_t s_;
};

/// RAII mpfr_t.
struct Mp {
  mpfr_t v;
  explicit Mp(mpfr_prec_t p) { mpfr_init2(v, p); mpfr_set_zero(v, 1); }
  ~Mp() { mpfr_clear(v); }
  Mp(const Mp&) = delete;
  Mp& operator=(const Mp&) = delete;
  double d() const { return mpfr_get_d(v, MPFR_RNDN); }
};

/// One term c * x^(num/den) in rational form.
struct OracleTerm {
  mpq_class c;
  unsigned long num;
  unsigned long den;
};

/// sum c x^(num/den) at precision p, with nearest rounding throughout.
inline void oracle_eval(mpfr_t out, const std::vector<OracleTerm>& terms, const mpz_class& x, mpfr_prec_t p) {
  Mp acc(p), t(p), xr(p);
  mpfr_set_zero(acc.v, 1);
  for (const auto& term : terms) {
    mpfr_set_z(xr.v, x.get_mpz_t(), MPFR_RNDN);
    mpfr_rootn_ui(t.v, xr.v, term.den, MPFR_RNDN);
    mpfr_pow_ui(t.v, t.v, term.num, MPFR_RNDN);
    mpfr_mul_q(t.v, t.v, term.c.get_mpq_t(), MPFR_RNDN);
    mpfr_add(acc.v, acc.v, t.v, MPFR_RNDN);
  }
  mpfr_set(out, acc.v, MPFR_RNDN);
}

/// Exact value when every term is rational at x (perfect den-th powers).
inline bool oracle_exact(const std::vector<OracleTerm>& terms, const mpz_class& x, mpq_class& value) {
  value = 0;
  for (const auto& term : terms) {
    mpz_class r;
    if (mpz_root(r.get_mpz_t(), x.get_mpz_t(), term.den) == 0) return false;
    mpz_class pw;
    mpz_pow_ui(pw.get_mpz_t(), r.get_mpz_t(), term.num);
    value += term.c * mpq_class(pw);
  }
  value.canonicalize();
  return true;
}

/// floor of the term sum at x using a 1000-bit evaluation; exact cases are
/// handled by rational arithmetic.
inline mpz_class oracle_floor(const std::vector<OracleTerm>& terms, const mpz_class& x, bool* exact = nullptr) {
  mpq_class v;
  if (oracle_exact(terms, x, v)) {
    if (exact) *exact = true;
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
    return f;
  }
  if (exact) *exact = false;
  Mp r(1000);
  oracle_eval(r.v, terms, x, 1000);
  mpz_class f;
  mpfr_get_z(f.get_mpz_t(), r.v, MPFR_RNDD);
  return f;
}

/// sum over the given integers of e(y * value(n)) at precision p, where
/// value(n) is the term sum and y a double-free mpfr value.
inline std::complex<double> oracle_exp_sum(const std::vector<OracleTerm>& terms, const mpfr_t y,
                                           const std::vector<std::uint64_t>& ns, mpfr_prec_t p) {
  Mp re(p), im(p), v(p), two_pi(p), s(p), c(p);
  mpfr_const_pi(two_pi.v, MPFR_RNDN);
  mpfr_mul_2ui(two_pi.v, two_pi.v, 1, MPFR_RNDN);
  for (std::uint64_t n : ns) {
    oracle_eval(v.v, terms, mpz_class(std::to_string(n)), p);
    mpfr_mul(v.v, v.v, y, MPFR_RNDN);
    mpfr_frac(v.v, v.v, MPFR_RNDN);
    mpfr_mul(v.v, v.v, two_pi.v, MPFR_RNDN);
    mpfr_sin_cos(s.v, c.v, v.v, MPFR_RNDN);
    mpfr_add(re.v, re.v, c.v, MPFR_RNDN);
    mpfr_add(im.v, im.v, s.v, MPFR_RNDN);
  }
  return {re.d(), im.d()};
}

/// Trial-division primality, independent of the sieve.
inline bool trial_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::vector<std::uint64_t> trial_primes(std::uint64_t X) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 2; n <= X; ++n) {
    if (trial_prime(n)) out.push_back(n);
  }
  return out;
}

/// Both sides of the Weyl-van der Corput inequality, evaluated from scratch in
/// 256-bit arithmetic.
inline std::pair<double, double> oracle_weyl_sides(const std::vector<std::complex<double>>& z, std::size_t H) {
  const mpfr_prec_t p = 256;
  const long N = static_cast<long>(z.size());
  Mp sr(p), si(p);
  for (const auto& v : z) {
    mpfr_add_d(sr.v, sr.v, v.real(), MPFR_RNDN);
    mpfr_add_d(si.v, si.v, v.imag(), MPFR_RNDN);
  }
  Mp lhs(p), t(p);
  mpfr_sqr(lhs.v, sr.v, MPFR_RNDN);
  mpfr_sqr(t.v, si.v, MPFR_RNDN);
  mpfr_add(lhs.v, lhs.v, t.v, MPFR_RNDN);

  Mp inner(p), cr(p), ci(p), a(p), w(p);
  const long Hl = static_cast<long>(H);
  for (long h = -Hl; h <= Hl; ++h) {
    mpfr_set_zero(cr.v, 1);
    mpfr_set_zero(ci.v, 1);
    for (long n = std::max(0L, -h); n < std::min(N, N - h); ++n) {
      const auto& x = z[static_cast<std::size_t>(n + h)];
      const auto& y = z[static_cast<std::size_t>(n)];
      // x * conj(y)
      mpfr_set_d(a.v, x.real(), MPFR_RNDN);
      mpfr_mul_d(a.v, a.v, y.real(), MPFR_RNDN);
      mpfr_add(cr.v, cr.v, a.v, MPFR_RNDN);
      mpfr_set_d(a.v, x.imag(), MPFR_RNDN);
      mpfr_mul_d(a.v, a.v, y.imag(), MPFR_RNDN);
      mpfr_add(cr.v, cr.v, a.v, MPFR_RNDN);
      mpfr_set_d(a.v, x.imag(), MPFR_RNDN);
      mpfr_mul_d(a.v, a.v, y.real(), MPFR_RNDN);
      mpfr_add(ci.v, ci.v, a.v, MPFR_RNDN);
      mpfr_set_d(a.v, x.real(), MPFR_RNDN);
      mpfr_mul_d(a.v, a.v, y.imag(), MPFR_RNDN);
      mpfr_sub(ci.v, ci.v, a.v, MPFR_RNDN);
    }
    mpfr_hypot(a.v, cr.v, ci.v, MPFR_RNDN);
    mpfr_set_si(w.v, Hl + 1 - std::labs(h), MPFR_RNDN);
    mpfr_div_si(w.v, w.v, Hl + 1, MPFR_RNDN);
    mpfr_mul(a.v, a.v, w.v, MPFR_RNDN);
    mpfr_add(inner.v, inner.v, a.v, MPFR_RNDN);
  }
  mpfr_mul_si(inner.v, inner.v, N + Hl, MPFR_RNDN);
  mpfr_div_si(inner.v, inner.v, Hl + 1, MPFR_RNDN);
  return {lhs.d(), inner.d()};
}

/// The derivative-test bound from scratch in 256-bit arithmetic.
inline double oracle_hb_bound(double F, double X, long j) {
  const mpfr_prec_t p = 256;
  Mp lf(p), lx(p), t(p), acc(p), e(p);
  mpfr_set_d(lf.v, F, MPFR_RNDN);
  mpfr_log(lf.v, lf.v, MPFR_RNDN);
  mpfr_set_d(lx.v, X, MPFR_RNDN);
  mpfr_log(lx.v, lx.v, MPFR_RNDN);
  const long jj = j * (j - 1);
  // (F X^-j)^(1/(j(j-1)))
  mpfr_mul_si(t.v, lx.v, j, MPFR_RNDN);
  mpfr_sub(t.v, lf.v, t.v, MPFR_RNDN);
  mpfr_div_si(t.v, t.v, jj, MPFR_RNDN);
  mpfr_exp(acc.v, t.v, MPFR_RNDN);
  mpfr_div_si(t.v, lx.v, -jj, MPFR_RNDN);
  mpfr_exp(t.v, t.v, MPFR_RNDN);
  mpfr_add(acc.v, acc.v, t.v, MPFR_RNDN);
  mpfr_mul_si(t.v, lf.v, -2, MPFR_RNDN);
  mpfr_div_si(t.v, t.v, j * jj, MPFR_RNDN);
  mpfr_exp(t.v, t.v, MPFR_RNDN);
  mpfr_add(acc.v, acc.v, t.v, MPFR_RNDN);
  mpfr_set_d(e.v, X, MPFR_RNDN);
  mpfr_mul(acc.v, acc.v, e.v, MPFR_RNDN);
  return acc.d();
}

/// The Dirichlet-route bound from scratch in 256-bit arithmetic.
inline double oracle_bv_bound(unsigned long q, double X, long j, long k) {
  const mpfr_prec_t p = 256;
  Mp inner(p), t(p), x(p);
  mpfr_set_d(x.v, X, MPFR_RNDN);
  mpfr_ui_div(inner.v, 1, x.v, MPFR_RNDN);
  mpfr_set_ui(t.v, 1, MPFR_RNDN);
  mpfr_div_ui(t.v, t.v, q, MPFR_RNDN);
  mpfr_add(inner.v, inner.v, t.v, MPFR_RNDN);
  mpfr_pow_ui(t.v, x.v, static_cast<unsigned long>(j), MPFR_RNDN);
  mpfr_ui_div(t.v, q, t.v, MPFR_RNDN);
  mpfr_add(inner.v, inner.v, t.v, MPFR_RNDN);
  mpfr_rootn_ui(inner.v, inner.v, static_cast<unsigned long>(k * (k - 1)), MPFR_RNDN);
  mpfr_mul(inner.v, inner.v, x.v, MPFR_RNDN);
  return inner.d();
}

}  // namespace testsupport

namespace testsupport {

/// Record-setting approximations a/q (q = 1..qmax) to x, i.e. those with
/// |q x - a| strictly below every smaller q, by brute force at 1024 bits.
inline std::vector<std::pair<mpz_class, mpz_class>> best_approx_records(const mpfr_t x, unsigned long qmax) {
  std::vector<std::pair<mpz_class, mpz_class>> out;
  Mp t(1024), best(1024), e(1024);
  mpfr_set_inf(best.v, 1);
  for (unsigned long q = 1; q <= qmax; ++q) {
    mpfr_mul_ui(t.v, x, q, MPFR_RNDN);
    mpz_class a;
    mpfr_get_z(a.get_mpz_t(), t.v, MPFR_RNDN);
    mpfr_sub_z(e.v, t.v, a.get_mpz_t(), MPFR_RNDN);
    mpfr_abs(e.v, e.v, MPFR_RNDN);
    if (mpfr_less_p(e.v, best.v)) {
      mpfr_set(best.v, e.v, MPFR_RNDN);
      out.emplace_back(a, mpz_class(q));
    }
  }
  return out;
}

/// |q x - a| at 1024 bits.
inline double approx_error(const mpfr_t x, const mpz_class& a, const mpz_class& q) {
  Mp t(1024);
  mpfr_mul_z(t.v, x, q.get_mpz_t(), MPFR_RNDN);
  mpfr_sub_z(t.v, t.v, a.get_mpz_t(), MPFR_RNDN);
  mpfr_abs(t.v, t.v, MPFR_RNDN);
  return t.d();
}

}  // namespace testsupport
