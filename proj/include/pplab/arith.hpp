#pragma once

// Primes and the arithmetic functions used by the prime-sum machinery:
// a segmented sieve, deterministic Miller-Rabin, von Mangoldt, and the
// generalized divisor counts d_3 and d_4.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pplab/error.hpp"

namespace pplab {

constexpr std::uint64_t kSieveLimitCap = 1'000'000'000;

/// Exactly the primes <= limit, ascending.
class PrimeTable {
 public:
  PrimeTable() = default;
  PrimeTable(std::uint64_t limit, std::vector<std::uint32_t> primes)
      : limit_(limit), primes_(std::move(primes)) {}

  std::uint64_t limit() const { return limit_; }
  std::span<const std::uint32_t> primes() const { return primes_; }
  std::size_t size() const { return primes_.size(); }

  /// pi(x) for x <= limit.
  std::size_t count_upto(std::uint64_t x) const {
    return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
  }
  std::span<const std::uint32_t> primes_upto(std::uint64_t x) const {
    return std::span<const std::uint32_t>(primes_).first(count_upto(x));
  }

 private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> primes_;
};

/// Segmented sieve of Eratosthenes over odd numbers.
inline PrimeTable sieve(std::uint64_t limit) {
  if (limit > kSieveLimitCap) fail(ErrorCode::LimitTooLarge, "sieve limit " + std::to_string(limit) + " > 10^9");
  std::vector<std::uint32_t> primes;
  if (limit < 2) return PrimeTable(limit, std::move(primes));
  primes.push_back(2);
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;

  // base primes up to sqrt(limit) with a plain sieve
  std::vector<bool> small(root + 1, true);
  std::vector<std::uint32_t> base;
  for (std::uint64_t i = 3; i <= root; i += 2) {
    if (!small[i]) continue;
    base.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= root; j += 2 * i) small[j] = false;
  }

  constexpr std::uint64_t kSegment = 1 << 18;  // odd numbers per segment
  std::vector<std::uint8_t> seg(kSegment);
  std::vector<std::uint64_t> next(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) next[i] = static_cast<std::uint64_t>(base[i]) * base[i];

  // segment covers odd numbers low, low+2, ..., low + 2(kSegment-1)
  for (std::uint64_t low = 3; low <= limit; low += 2 * kSegment) {
    const std::uint64_t high = std::min(limit, low + 2 * (kSegment - 1));
    const std::size_t n = static_cast<std::size_t>((high - low) / 2 + 1);
    std::fill(seg.begin(), seg.begin() + static_cast<std::ptrdiff_t>(n), 1);
    for (std::size_t i = 0; i < base.size(); ++i) {
      const std::uint64_t p = base[i];
      std::uint64_t m = next[i];
      if (m > high) continue;
      for (; m <= high; m += 2 * p) seg[(m - low) / 2] = 0;
      next[i] = m;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (seg[i]) primes.push_back(static_cast<std::uint32_t>(low + 2 * i));
    }
  }
  return PrimeTable(limit, std::move(primes));
}

namespace detail {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return r;
}

// floor(n^(1/k)) exactly
inline std::uint64_t integer_root(std::uint64_t n, unsigned k) {
  if (k == 1 || n < 2) return n;
  auto r = static_cast<std::uint64_t>(std::pow(static_cast<long double>(n), 1.0L / k));
  auto pow_leq = [&](std::uint64_t b) {
    unsigned __int128 acc = 1;
    for (unsigned i = 0; i < k; ++i) {
      acc *= b;
      if (acc > n) return false;
    }
    return true;
  };
  while (r > 0 && !pow_leq(r)) --r;
  while (pow_leq(r + 1)) ++r;
  return r;
}

}  // namespace detail

/// Deterministic for all 64-bit inputs (bases are the first 12 primes).
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = detail::pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// (p, e) with n = p^e, if n is a prime power.
inline std::optional<std::pair<std::uint64_t, unsigned>> prime_power(std::uint64_t n) {
  if (n < 2) return std::nullopt;
  for (unsigned e = 64; e >= 1; --e) {
    const std::uint64_t r = detail::integer_root(n, e);
    if (r < 2) continue;
    std::uint64_t back = 1;
    for (unsigned i = 0; i < e; ++i) back *= r;
    if (back == n && is_prime(r)) return std::make_pair(r, e);
  }
  return std::nullopt;
}

/// Lambda(n) = log p when n = p^e, else 0.
inline double von_mangoldt(std::uint64_t n) {
  if (auto pp = prime_power(n)) return std::log(static_cast<double>(pp->first));
  return 0.0;
}

/// Trial-division factorization as (prime, exponent) pairs.
inline std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

/// d_k(n), the number of ordered k-tuples with product n:
/// prod over p^e || n of C(e + k - 1, k - 1).
inline std::uint64_t divisor_count_k(std::uint64_t n, unsigned k) {
  if (n == 0) fail(ErrorCode::DomainError, "d_k(0) is undefined");
  if (k == 0) fail(ErrorCode::DomainError, "k must be positive");
  std::uint64_t total = 1;
  for (auto [p, e] : factorize(n)) {
    // C(e + k - 1, k - 1) built incrementally stays integral at each step
    std::uint64_t c = 1;
    for (unsigned i = 1; i < k; ++i) c = c * (e + i) / i;
    total *= c;
  }
  return total;
}

}  // namespace pplab
