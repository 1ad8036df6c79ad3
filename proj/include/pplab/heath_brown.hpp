#pragma once

// Parameter selection for the Heath-Brown identity split of prime sums into
// Type I (K) and Type II (L) sums. Every hypothesis is decided in exact
// integer arithmetic by raising both sides to a common power.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "pplab/error.hpp"
#include "pplab/rational.hpp"

namespace pplab {

struct HBConstants {
  Rational c1{1, 5};
  Rational c2{16, 5};
  Rational c3{1, 5};
};

struct HBConstraint {
  std::string name;
  std::string lhs;  ///< decimal rendering of the left side
  std::string rhs;
  bool pass = false;
};

struct HBParams {
  BigInt Y;
  HBConstants constants;
  double U = 0;  ///< c1 Y^(1/5)
  double V = 0;  ///< c2 Y^(1/3)
  Rational Z;    ///< half-integer nearest c3 Y^(2/5), ties upward
  std::vector<HBConstraint> constraint_report;
  bool holds = false;

  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& c : constraint_report) {
      if (!c.pass) out.push_back(c.name);
    }
    return out;
  }
};

namespace detail {

inline double real_root(const Rational& c, const BigInt& Y, double inv) {
  return c.get_d() * std::pow(Y.get_d(), inv);
}

inline std::string short_decimal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.8g", v);
  return buf;
}

}  // namespace detail

inline HBParams hb_params(const BigInt& Y, const HBConstants& c = {}) {
  if (Y < 2) fail(ErrorCode::DomainError, "Y must be at least 2");
  if (sgn(c.c1) <= 0 || sgn(c.c2) <= 0 || sgn(c.c3) <= 0) {
    fail(ErrorCode::DomainError, "decomposition constants must be positive");
  }
  HBParams out;
  out.Y = Y;
  out.constants = c;
  out.U = detail::real_root(c.c1, Y, 1.0 / 5);
  out.V = detail::real_root(c.c2, Y, 1.0 / 3);

  // floor(c3 Y^(2/5)) = floor(floor(c3^5 Y^2)^(1/5))
  const Rational c3_5 = pow_int(c.c3, 5);
  const BigInt inner = floor_of(Rational(c3_5 * Y * Y));
  BigInt base;
  mpz_root(base.get_mpz_t(), inner.get_mpz_t(), 5);
  out.Z = Rational(2 * base + 1, 2);
  out.Z.canonicalize();
  const double Zd = out.Z.get_d();

  const Rational Yq(Y);
  const Rational c2_3 = pow_int(c.c2, 3);
  const Rational Z3 = pow_int(out.Z, 3);
  const Rational Z5 = pow_int(out.Z, 5);
  auto add = [&](std::string name, double lhs, double rhs, bool pass) {
    out.constraint_report.push_back(
        {std::move(name), detail::short_decimal(lhs), detail::short_decimal(rhs), pass});
  };
  // 3 <= V  <=>  27 <= c2^3 Y
  add("3 <= V", 3, out.V, Rational(27) <= c2_3 * Yq);
  // V < Z  <=>  c2^3 Y < Z^3
  add("V < Z", out.V, Zd, c2_3 * Yq < Z3);
  add("Z < X", Zd, Y.get_d(), out.Z < Yq);
  // Z >= 4 U^2  <=>  Z^5 >= 4^5 c1^10 Y^2
  add("Z >= 4U^2", Zd, 4 * out.U * out.U, Z5 >= Rational(1024) * pow_int(c.c1, 10) * Yq * Yq);
  // X >= 64 Z^2 U  <=>  Y^4 >= (64 Z^2 c1)^5
  add("X >= 64Z^2U", Y.get_d(), 64 * Zd * Zd * out.U,
      pow_int(Yq, 4) >= pow_int(Rational(64 * out.Z * out.Z * c.c1), 5));
  // V^3 >= 32 X  <=>  c2^3 >= 32
  add("V^3 >= 32X", out.V * out.V * out.V, 32 * Y.get_d(), c2_3 >= 32);

  out.holds = true;
  for (const auto& r : out.constraint_report) out.holds = out.holds && r.pass;
  return out;
}

/// Half-open range (lo, hi].
struct Range {
  double lo = 0;
  double hi = 0;
};

struct HBSumSkeleton {
  std::vector<std::pair<Range, Range>> type1_ranges;  ///< (M, N) with N > Z
  std::vector<std::pair<Range, Range>> type2_ranges;  ///< (M, N) with U <= M <= V
  long dyadic_levels = 0;                             ///< Type I levels covering M <= Y/Z
};

inline HBSumSkeleton hb_skeleton(const BigInt& Y, const HBParams& params) {
  HBSumSkeleton s;
  const double y = Y.get_d();
  const double Zd = params.Z.get_d();

  // levels = max(0, ceil(log2(Y/Z))), decided exactly
  const Rational ratio = Rational(Y) / params.Z;
  long levels = 0;
  while (Rational(pow_int(BigInt(2), static_cast<unsigned long>(levels))) < ratio) ++levels;
  s.dyadic_levels = levels;

  const double top = y / Zd;
  for (long i = 0; i < levels; ++i) {
    Range m{top / std::ldexp(1.0, static_cast<int>(i + 1)), top / std::ldexp(1.0, static_cast<int>(i))};
    Range n{std::max(Zd, y / (2 * m.hi)), y / m.lo};
    s.type1_ranges.emplace_back(m, n);
  }

  if (params.U < params.V) {
    for (double lo = params.U; lo < params.V; lo *= 2) {
      Range m{lo, std::min(2 * lo, params.V)};
      Range n{y / (2 * m.hi), y / m.lo};
      s.type2_ranges.emplace_back(m, n);
    }
  }
  return s;
}

}  // namespace pplab
