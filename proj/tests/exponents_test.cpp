#include <gtest/gtest.h>

#include <map>
#include <optional>

#include "pplab/exponents.hpp"
#include "support.hpp"

using namespace pplab;

namespace {

Rational R(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

std::vector<Rational> theta_grid(long k) {
  std::vector<Rational> out;
  for (long twice = 9; twice <= 2 * k - 1; ++twice) out.push_back(R(twice, 2));
  return out;
}

}  // namespace

TEST(Bundle, K12Theta5) {
  auto b = compute_bundle(12, R(5));
  EXPECT_EQ(b.tau1, R(1, 132));
  EXPECT_EQ(b.rho_star, R(8, 33));
  EXPECT_EQ(b.rho, R(2, 35937));
  EXPECT_EQ(b.c_split, R(1, 3));
  EXPECT_EQ(b.b_threshold(), R(439, 660));
  EXPECT_EQ(b.rho_lemma, 3 * b.rho);
  EXPECT_TRUE(b.degrees_allow_f);
  EXPECT_TRUE(b.all_positive);
}

TEST(Bundle, K13ThetaNineHalves) {
  auto b = compute_bundle(13, R(9, 2));
  EXPECT_EQ(b.tau1, R(1, 156));
  EXPECT_EQ(b.rho_star, R(19, 78));
}

TEST(Bundle, SmallDegreesFlagged) {
  auto b = compute_bundle(2, R(3, 2));
  EXPECT_EQ(b.tau1, R(1, 2));
  EXPECT_LT(b.rho_star, 0);
  EXPECT_FALSE(b.degrees_allow_f);
  EXPECT_FALSE(b.all_positive);
}

TEST(Bundle, Degenerate) {
  EXPECT_THROW(compute_bundle(1, R(3, 2)), Error);
  EXPECT_THROW(compute_bundle(12, R(1)), Error);
}

TEST(Bundle, Deterministic) {
  auto a = compute_bundle(17, R(21, 2));
  auto b = compute_bundle(17, R(21, 2));
  EXPECT_EQ(a.rho, b.rho);
  EXPECT_EQ(a.rho_star, b.rho_star);
  EXPECT_EQ(a.c_split, b.c_split);
  EXPECT_EQ(a.savings.type2_total, b.savings.type2_total);
}

TEST(Bundle, PositivityOverGrid) {
  for (long k = 12; k <= 40; ++k) {
    for (const auto& theta : theta_grid(k)) {
      auto b = compute_bundle(k, theta);
      const Rational K(k);
      EXPECT_GT(b.rho, 0) << k << " " << theta;
      EXPECT_GT(b.rho_star, 0);
      EXPECT_GT(b.c_split, 0);
      EXPECT_LT(b.c_split, 1);
      EXPECT_GT(b.b_threshold(), 0);
      EXPECT_LT(b.b_threshold(), R(2, 3));
      EXPECT_LE(b.rho, b.rho_star / (3 * K * (K - 1) * (K - 1)));
      const Rational inner = 3 * K / 2 + R(5, 2);
      EXPECT_LE(b.rho, 2 / (3 * (K + 1) * inner * inner));
    }
  }
}

TEST(Classify, Examples) {
  auto b = compute_bundle(12, R(5));
  EXPECT_EQ(classify_frequency(R(2, 5), b, Family::TypeI).band, Band::High);
  EXPECT_EQ(classify_frequency(R(-6), b, Family::TypeI).band, Band::Mid);
  EXPECT_EQ(classify_frequency(R(-49, 10), b, Family::TypeII).band, Band::Mid);
  EXPECT_EQ(classify_frequency(R(-6), b, Family::TypeII).band, Band::Low);
  EXPECT_THROW(classify_frequency(R(1), b, Family::TypeI), Error);
  EXPECT_THROW(classify_frequency(R(-10), b, Family::TypeI), Error);
}

TEST(Classify, BoundaryGoesUp) {
  auto b = compute_bundle(12, R(5));
  Rational edge = -b.theta + b.rho_star;
  edge.canonicalize();
  EXPECT_EQ(classify_frequency(edge, b, Family::TypeI).band, Band::High);
  EXPECT_EQ(classify_frequency(-b.theta, b, Family::TypeII).band, Band::Mid);
  Rational top = -b.theta + b.b_threshold();
  top.canonicalize();
  EXPECT_EQ(classify_frequency(top, b, Family::TypeII).band, Band::High);
}

TEST(Classify, BandsPartitionWindow) {
  // every grid point lands in exactly the band whose checked bounds contain it,
  // and the bands' bounds tile the window
  for (long k : {12, 15, 20}) {
    for (const auto& theta : {R(9, 2), R(k - 1), R(2 * k - 1, 2)}) {
      auto b = compute_bundle(k, theta);
      const Rational lo = b.window_low(), hi = b.window_high();
      const long den = 240;
      const BigInt first = ceil_of(Rational(lo * den));
      const BigInt last = floor_of(Rational(hi * den));
      for (Family fam : {Family::TypeI, Family::TypeII}) {
        std::map<Band, std::pair<Rational, Rational>> seen;
        for (BigInt s = first; s <= last; ++s) {
          Rational y(s, den);
          y.canonicalize();
          auto r = classify_frequency(y, b, fam);
          EXPECT_GE(y, r.bounds_checked.first);
          if (r.band == Band::High) {
            EXPECT_LE(y, r.bounds_checked.second);
          } else {
            EXPECT_LT(y, r.bounds_checked.second);
          }
          seen[r.band] = r.bounds_checked;
        }
        // consecutive bands meet without gap or overlap
        if (fam == Family::TypeI) {
          ASSERT_EQ(seen.count(Band::Low), 0u);
          if (seen.count(Band::Mid) && seen.count(Band::High)) {
            EXPECT_EQ(seen[Band::Mid].second, seen[Band::High].first);
          }
        } else {
          if (seen.count(Band::Low) && seen.count(Band::Mid)) {
            EXPECT_EQ(seen[Band::Low].second, seen[Band::Mid].first);
          }
          if (seen.count(Band::Mid) && seen.count(Band::High)) {
            EXPECT_EQ(seen[Band::Mid].second, seen[Band::High].first);
          }
        }
      }
    }
  }
}

TEST(SelectJ, Examples) {
  EXPECT_EQ(select_j(JRule::TypeIHigh, R(2), R(-3), R(0), 12), 13);
  EXPECT_EQ(select_j(JRule::TypeIHigh, R(10), R(5), R(0), 12), 27);
  EXPECT_EQ(select_j(JRule::TypeIIMid, R(0), R(-7, 2), R(0), 12), 5);
  EXPECT_THROW(select_j(JRule::TypeIIMid, R(0), R(-13), R(0), 12), Error);
}

TEST(SelectJ, ClaimRulesStayInRange) {
  testsupport::Gen g(61);
  for (int iter = 0; iter < 2000; ++iter) {
    const long k = static_cast<long>(g.range(12, 40));
    const Rational theta = R(static_cast<long>(g.range(9, 2 * k - 2)), 2);  // theta <= k - 1
    auto b = compute_bundle(k, theta);
    const Rational wl = b.window_low();
    const Rational mid_hi = -theta + b.rho_star;
    const Rational t2_hi = -theta + b.b_threshold();
    auto sample = [&](Rational lo, const Rational& hi) -> std::optional<Rational> {
      lo = std::max(lo, wl);
      const long den = 997;
      const BigInt a = ceil_of(Rational(lo * den));
      const BigInt z = ceil_of(Rational(hi * den)) - 1;
      if (z < a) return std::nullopt;
      const std::uint64_t span = to_u64(BigInt(z - a)) + 1;
      Rational y(a + to_bigint(g.next() % span), den);
      y.canonicalize();
      return y;
    };
    for (Family fam : {Family::TypeI, Family::TypeII}) {
      auto ys = fam == Family::TypeI ? sample(wl, mid_hi)
                                     : (g.next() % 2 ? sample(-theta, t2_hi) : sample(wl, -theta));
      if (!ys) continue;
      const Rational y = *ys;
      auto r = classify_frequency(y, b, fam);
      ASSERT_TRUE(is_claim_rule(rule_for(r)));
      const long j = select_j(r, default_tau(r, b), b);
      EXPECT_GE(j, 2);
      EXPECT_LE(j, k);
    }
  }
}
