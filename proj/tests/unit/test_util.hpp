#pragma once

#include <random>

#include "ttl/exactnum.hpp"
#include "ttl/rational.hpp"

namespace ttl::testing {

inline Rational random_rational(std::mt19937_64& rng, int range = 20) {
  long num = static_cast<long>(rng() % (2 * range + 1)) - range;
  long den = 1 + static_cast<long>(rng() % range);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Random element of Q(zeta_N)[sqrt p] with N drawn from small orders.
inline CycNum random_cycnum(std::mt19937_64& rng, long p = 3, int terms = 3) {
  static const std::uint64_t orders[] = {1, 3, 4, 5, 8, 9};
  CycNum x;
  for (int i = 0; i < terms; ++i) {
    std::uint64_t N = orders[rng() % 6];
    CycNum t = CycNum::zeta(N, static_cast<std::int64_t>(rng() % N)) * CycNum(random_rational(rng, 5));
    if (rng() % 3 == 0) t = t * CycNum::sqrt_p(p);
    x += t;
  }
  return x;
}

inline bool close(std::complex<double> a, std::complex<double> b, double tol = 1e-9) {
  return std::abs(a - b) < tol * (1 + std::abs(a));
}

}  // namespace ttl::testing
