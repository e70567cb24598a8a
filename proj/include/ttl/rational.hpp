#pragma once

#include <gmpxx.h>

#include <climits>
#include <cstdint>
#include <string>
#include <vector>

namespace ttl {

using Rational = mpq_class;
using Integer = mpz_class;
using RatVec = std::vector<Rational>;
using RatMat = std::vector<RatVec>;

inline constexpr int kInfVal = INT_MAX;

// "a/b" or "a" or a decimal integer.
Rational parse_rational(const std::string& s);
std::string to_string(const Rational& q);

int val_p(const Integer& z, long p);  // kInfVal for zero
int val_p(const Rational& q, long p);
int val_p(const RatVec& v, long p);   // min over entries

Rational pow_p(long p, int e);  // p^e, any sign of e
bool is_prime(long n);

// Unit part: q = p^v * u, returns u.
Rational unit_part(const Rational& q, long p);

// Legendre symbol of a p-adic unit rational.
int legendre(const Rational& u, long p);
int legendre(long a, long p);

long primitive_root(long p);

// --- fixed-width p-adic integers mod p^M for hot loops ---
struct ModRing {
  long p = 0;
  int M = 0;            // working precision
  std::int64_t mod = 1; // p^M
  std::vector<std::int64_t> pw;  // p^0..p^M

  ModRing() = default;
  ModRing(long p_, int M_);
  static ModRing max_precision(long p);

  std::int64_t red(__int128 x) const {
    __int128 r = x % mod;
    if (r < 0) r += mod;
    return static_cast<std::int64_t>(r);
  }
  std::int64_t mul(std::int64_t a, std::int64_t b) const {
    return red(static_cast<__int128>(a) * b);
  }
  std::int64_t add(std::int64_t a, std::int64_t b) const { return red(static_cast<__int128>(a) + b); }
  std::int64_t sub(std::int64_t a, std::int64_t b) const { return red(static_cast<__int128>(a) - b); }
  // valuation of x mod p^M, M if x == 0
  int val(std::int64_t x) const {
    if (x == 0) return M;
    int v = 0;
    while (x % p == 0) { x /= p; ++v; }
    return v;
  }
  std::int64_t inv(std::int64_t unit) const;
  // reduce a p-integral rational
  std::int64_t from_rational(const Rational& q) const;
};

}  // namespace ttl
