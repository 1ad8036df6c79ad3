// Walks through the main entry points: exponent bookkeeping, certified
// floors, a prime exponential sum and the minimum fractional-part search.

#include <iostream>

#include "pplab/pplab.hpp"

int main() {
  using namespace pplab;

  const ExponentBundle b = compute_bundle(12, Rational(5));
  std::cout << "k = 12, theta = 5: rho = " << to_fraction_text(b.rho)
            << ", B(0) = " << to_fraction_text(b.b_threshold()) << '\n';

  const PseudoPolynomial f = parse_pseudo("1*x^2+1*x^5/2", false);
  const FloorCertificate fc = floor_certified(f, std::uint64_t{4});
  std::cout << "floor(f(4)) = " << fc.value << (fc.exact ? " (exact)" : "") << '\n';

  const PrimeTable primes = sieve(10000);
  const ExpSumResult s = prime_exp_sum(f, parse_real("sqrt2"), 1000, primes);
  std::cout << "|sum_{p <= 1000} e(sqrt2 f(p))| = " << s.magnitude << " over " << s.term_count
            << " primes, error <= " << s.rounding_error_bound << '\n';

  const MinSearchResult m = min_fracpart(parse_real("sqrt2"), parse_pseudo("1*x^2+1*x^3/2", false), 20, primes);
  std::cout << "min ||sqrt2 floor(f(p))|| over p <= 20: " << m.min_distance_text << " at p = "
            << m.argmin_prime << '\n';

  const auto cf = continued_fraction(parse_real("pi"), BigInt(1000));
  std::cout << "convergents of pi:";
  for (const auto& c : cf) std::cout << ' ' << c.a << '/' << c.q;
  std::cout << '\n';
  return 0;
}
