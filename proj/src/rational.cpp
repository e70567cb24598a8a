#include "ttl/rational.hpp"

#include <cmath>

#include "ttl/error.hpp"

namespace ttl {

const char* error_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotSelfDual: return "NotSelfDual";
    case ErrorKind::BasePointInvalid: return "BasePointInvalid";
    case ErrorKind::EvenResidueChar: return "EvenResidueChar";
    case ErrorKind::LevelTooSmall: return "LevelTooSmall";
    case ErrorKind::NonStabilizing: return "NonStabilizing";
    case ErrorKind::SingularFiber: return "SingularFiber";
    case ErrorKind::NormalizationFailure: return "NormalizationFailure";
    case ErrorKind::MetaplecticAmbiguity: return "MetaplecticAmbiguity";
    case ErrorKind::NeedsRefinement: return "NeedsRefinement";
    case ErrorKind::CosetEnumerationFailure: return "CosetEnumerationFailure";
    case ErrorKind::PoleAtS: return "PoleAtS";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

Rational parse_rational(const std::string& s) {
  Rational q;
  std::string t;
  for (char c : s)
    if (c != ' ' && c != '+') t += c;
  if (t.empty() || q.set_str(t, 10) != 0)
    throw Error(ErrorKind::InvalidArgument, "bad rational '" + s + "'");
  if (q.get_den() == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

int val_p(const Integer& z, long p) {
  if (z == 0) return kInfVal;
  Integer t = z, pp = p;
  return static_cast<int>(mpz_remove(t.get_mpz_t(), z.get_mpz_t(), pp.get_mpz_t()));
}

int val_p(const Rational& q, long p) {
  if (q == 0) return kInfVal;
  return val_p(q.get_num(), p) - val_p(q.get_den(), p);
}

int val_p(const RatVec& v, long p) {
  int m = kInfVal;
  for (const auto& x : v) m = std::min(m, val_p(x, p));
  return m;
}

Rational pow_p(long p, int e) {
  Integer z;
  mpz_ui_pow_ui(z.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(std::abs(e)));
  if (e >= 0) return Rational(z);
  return Rational(Integer(1), z);
}

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Rational unit_part(const Rational& q, long p) {
  if (q == 0) return 0;
  return q / pow_p(p, val_p(q, p));
}

int legendre(long a, long p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  long r = 1, b = a, e = (p - 1) / 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

int legendre(const Rational& u, long p) {
  Integer pp = p;
  Integer n = u.get_num() % pp, d = u.get_den() % pp;
  return legendre(n.get_si(), p) * legendre(d.get_si(), p);
}

long primitive_root(long p) {
  for (long g = 2; g < p; ++g) {
    bool ok = true;
    long m = p - 1;
    for (long d = 2; d <= m; ++d) {
      if (m % d) continue;
      while (m % d == 0) m /= d;
      long e = (p - 1) / d, r = 1, b = g;
      while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
      }
      if (r == 1) ok = false;
    }
    if (ok) return g;
  }
  return 1;
}

ModRing::ModRing(long p_, int M_) : p(p_), M(M_) {
  pw.assign(M + 1, 1);
  for (int i = 1; i <= M; ++i) pw[i] = pw[i - 1] * p;
  mod = pw[M];
}

ModRing ModRing::max_precision(long p) {
  int M = 0;
  __int128 x = 1;
  while (x * p < (static_cast<__int128>(1) << 61)) {
    x *= p;
    ++M;
  }
  return ModRing(p, M);
}

std::int64_t ModRing::inv(std::int64_t unit) const {
  // extended Euclid
  __int128 a = red(unit), m = mod, x0 = 1, x1 = 0;
  while (m) {
    __int128 q = a / m, t = a - q * m;
    a = m;
    m = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
  }
  if (a != 1) throw Error(ErrorKind::InvalidArgument, "inverse of non-unit mod p^M");
  return red(x0);
}

std::int64_t ModRing::from_rational(const Rational& q) const {
  Integer m = mod;
  Integer n = q.get_num() % m, d = q.get_den() % m;
  if (val_p(q.get_den(), p) > 0) throw Error(ErrorKind::InvalidArgument, "rational not p-integral");
  return mul(red(n.get_si()), inv(d.get_si()));
}

}  // namespace ttl
