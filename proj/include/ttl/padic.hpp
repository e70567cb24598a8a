#pragma once

#include <cstdint>

#include "ttl/exactnum.hpp"
#include "ttl/rational.hpp"

namespace ttl {

struct PadicProfile {
  int valuation;  // kInfVal for zero
  Rational abs;
  Rational frac;
};

void require_odd_prime(long p);

PadicProfile padic_profile(const Rational& x, long p);
Rational abs_p(const Rational& x, long p);
Rational frac_p(const Rational& x, long p);

// psi(x) = zeta_{p^k}^a where frac(x) = a/p^k.
CycNum psi_char(const Rational& x, long p);

int hilbert_symbol(const Rational& a, const Rational& b, long p);

// p^{-k n}
Rational ball_volume(int k, int n, long p);

// p^{e/2} as an exact CycNum (formal sqrt p when e is odd)
CycNum p_half_power(long p, int e);

}  // namespace ttl
