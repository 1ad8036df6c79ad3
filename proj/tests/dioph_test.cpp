#include <gtest/gtest.h>

#include "pplab/dioph.hpp"
#include "support.hpp"

using namespace pplab;
using testsupport::Gen;
using testsupport::Mp;

namespace {

struct Sample {
  CertifiedReal x;
  Mp ref{1024};
};

// Half the samples are 256-bit dyadic rationals in (0, 1), half are
// fractional parts of square roots.
void draw(Gen& g, int i, Sample& s) {
  if (i % 2 == 0) {
    mpz_class num(0);
    for (int w = 0; w < 4; ++w) num = (num << 64) + mpz_class(std::to_string(g.next()));
    if (num == 0) num = 1;
    Rational x(BigInt(num), BigInt(mpz_class(1) << 256));
    x.canonicalize();
    s.x = CertifiedReal(x);
    mpfr_set_q(s.ref.v, x.get_mpq_t(), MPFR_RNDN);
  } else {
    std::uint64_t n = g.range(2, 1000000);
    std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while ((r + 1) * (r + 1) <= n) ++r;
    while (r * r > n) --r;
    if (r * r == n) ++n;
    s.x = CertifiedReal::sqrt_of(Rational(to_bigint(n))) - CertifiedReal(Rational(to_bigint(r)));
    mpfr_set_ui(s.ref.v, n, MPFR_RNDN);
    mpfr_sqrt(s.ref.v, s.ref.v, MPFR_RNDN);
    mpfr_sub_ui(s.ref.v, s.ref.v, r, MPFR_RNDN);
  }
}

std::vector<std::pair<mpz_class, mpz_class>> dedup_by_q(const std::vector<RationalApprox>& cf) {
  // successive convergents can share q = 1 (0/1 then 1/1); keep the later one
  std::vector<std::pair<mpz_class, mpz_class>> out;
  for (const auto& c : cf) {
    if (!out.empty() && out.back().second == c.q) out.pop_back();
    out.emplace_back(c.a, c.q);
  }
  return out;
}

}  // namespace

TEST(ContinuedFraction, SqrtTwo) {
  auto cf = continued_fraction(CertifiedReal::sqrt_of(2), BigInt(30));
  std::vector<std::pair<long, long>> want{{1, 1}, {3, 2}, {7, 5}, {17, 12}, {41, 29}};
  ASSERT_EQ(cf.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_EQ(cf[i].a, want[i].first);
    EXPECT_EQ(cf[i].q, want[i].second);
  }
}

TEST(ContinuedFraction, Rationals) {
  auto third = continued_fraction(CertifiedReal(Rational(1, 3)), BigInt(100));
  ASSERT_FALSE(third.empty());
  EXPECT_EQ(third.back().a, 1);
  EXPECT_EQ(third.back().q, 3);
  EXPECT_EQ(third.back().err, 0.0);
  auto zero = continued_fraction(CertifiedReal(Rational(0)), BigInt(100));
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero[0].a, 0);
  EXPECT_EQ(zero[0].q, 1);
}

TEST(ContinuedFraction, PrecisionCap) {
  EXPECT_THROW(continued_fraction(CertifiedReal::pi(), BigInt("1" + std::string(400, '0')), 256), Error);
}

TEST(Dirichlet, Examples) {
  auto pi = dirichlet_approx(CertifiedReal::pi(), Rational(10));
  EXPECT_EQ(pi.a, 22);
  EXPECT_EQ(pi.q, 7);
  EXPECT_NEAR(pi.err, 0.0088, 1e-4);
  auto r2 = dirichlet_approx(CertifiedReal::sqrt_of(2), Rational(10));
  EXPECT_EQ(r2.a, 7);
  EXPECT_EQ(r2.q, 5);
  EXPECT_NEAR(r2.err, 0.0711, 1e-4);
  auto t = dirichlet_approx(CertifiedReal(Rational(1, 3)), Rational(5));
  EXPECT_EQ(t.a, 1);
  EXPECT_EQ(t.q, 3);
  EXPECT_EQ(t.err, 0.0);
}

TEST(Dirichlet, SeededGuarantees) {
  Gen g(91);
  for (int i = 0; i < 200; ++i) {
    Sample s;
    draw(g, i, s);
    for (long Qv : {10L, 100L, 10000L}) {
      auto r = dirichlet_approx(s.x, Rational(Qv));
      BigInt gcd;
      mpz_gcd(gcd.get_mpz_t(), r.a.get_mpz_t(), r.q.get_mpz_t());
      EXPECT_EQ(gcd, 1);
      EXPECT_GE(r.q, 1);
      EXPECT_LE(r.q, Qv);
      EXPECT_LE(testsupport::approx_error(s.ref.v, r.a, r.q), 1.0 / static_cast<double>(Qv));
      EXPECT_LE(r.err, 1.0 / static_cast<double>(Qv));
    }
  }
}

TEST(ContinuedFraction, AlternatingAndDecreasing) {
  Gen g(101);
  for (int i = 0; i < 200; ++i) {
    Sample s;
    draw(g, i, s);
    auto cf = continued_fraction(s.x, BigInt(1000000));
    for (std::size_t j = 1; j < cf.size(); ++j) {
      EXPECT_LT(cf[j].err, cf[j - 1].err);
      if (cf[j].side != 0) EXPECT_EQ(cf[j].side, -cf[j - 1].side);
    }
  }
}

TEST(ContinuedFraction, BestApproximationOracle) {
  Gen g(111);
  for (int i = 0; i < 200; ++i) {
    Sample s;
    draw(g, i, s);
    auto cf = continued_fraction(s.x, BigInt(100));
    EXPECT_EQ(dedup_by_q(cf), testsupport::best_approx_records(s.ref.v, 100)) << s.x.text();
  }
}

TEST(Claims, C41Example) {
  ClaimInstance inst;
  inst.claim_id = ClaimId::C41;
  inst.k = 12;
  inst.coefficient = CertifiedReal::sqrt_of(3);
  inst.m = 10;
  inst.h = 2;
  inst.X = 10000;
  inst.y_exponent = -6;
  auto rep = verify_claim(inst);
  EXPECT_NEAR(rep.alpha_target, 4.157e-11, 1e-13);
  EXPECT_TRUE(rep.lower_ok);
  EXPECT_TRUE(rep.dirichlet_ok);
  EXPECT_GE(rep.ratio, 1.0);
  // the first convergent beyond 0/1 has q close to 1 / alpha_target
  auto cf = continued_fraction(inst.coefficient * CertifiedReal(Rational(24 * pow_int(BigInt(10), 12))) *
                                   CertifiedReal::power(Rational(10000), Rational(-6)),
                               BigInt("100000000000"));
  ASSERT_GE(cf.size(), 2u);
  EXPECT_NEAR(cf[1].q.get_d(), 2.4e10, 0.05e10);
}

TEST(Claims, RationalTargetCapsQ) {
  // coefficient chosen so that the target is exactly 1/7
  ClaimInstance inst;
  inst.claim_id = ClaimId::C41;
  inst.m = 10;
  inst.h = 1;
  inst.X = 10000;
  inst.y_exponent = -6;
  const Rational y = pow_int(Rational(1, 10000), 6);
  Rational c = Rational(1, 7) / (y * Rational(12 * pow_int(BigInt(10), 12)));
  c.canonicalize();
  inst.coefficient = CertifiedReal(c);
  auto rep = verify_claim(inst);
  EXPECT_EQ(rep.approx.q, 7);
  EXPECT_FALSE(rep.lower_ok);
  EXPECT_LT(rep.ratio, 1.0);
}

TEST(Claims, WindowViolation) {
  ClaimInstance inst;
  inst.claim_id = ClaimId::C54;
  inst.y_exponent = 0;
  try {
    verify_claim(inst);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WindowViolation);
  }
  inst.claim_id = ClaimId::C41;
  inst.y_exponent = -10;
  EXPECT_THROW(verify_claim(inst), Error);
}

TEST(Claims, SampledDirichletFieldsHold) {
  for (ClaimId id : {ClaimId::C41, ClaimId::C42, ClaimId::C53, ClaimId::C54}) {
    for (const auto& inst : sample_claims(id, 40, 0x5EED)) {
      auto rep = verify_claim(inst);
      EXPECT_TRUE(rep.dirichlet_ok) << to_string(id);
      EXPECT_LE(Rational(rep.approx.q), rep.Q_used);
      EXPECT_GE(rep.j, 2);
      EXPECT_LE(rep.j, inst.k);
    }
  }
}
