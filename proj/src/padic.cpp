#include "ttl/padic.hpp"

#include "ttl/error.hpp"

namespace ttl {

void require_odd_prime(long p) {
  if (p == 2) throw Error(ErrorKind::EvenResidueChar, "p = 2 is not supported");
  if (!is_prime(p)) throw Error(ErrorKind::InvalidArgument, "p must be an odd prime, got " + std::to_string(p));
}

Rational abs_p(const Rational& x, long p) {
  if (x == 0) return 0;
  return pow_p(p, -val_p(x, p));
}

Rational frac_p(const Rational& x, long p) {
  if (x == 0) return 0;
  int e = val_p(x.get_den(), p);
  if (e <= 0) return 0;
  Integer pe = pow_p(p, e).get_num();
  Integer dprime = x.get_den() / pe;
  Integer inv;
  if (!mpz_invert(inv.get_mpz_t(), dprime.get_mpz_t(), pe.get_mpz_t()))
    throw Error(ErrorKind::InvalidArgument, "frac_p: non-invertible cofactor");
  Integer a = (x.get_num() * inv) % pe;
  if (a < 0) a += pe;
  return Rational(a, pe);
}

PadicProfile padic_profile(const Rational& x, long p) {
  require_odd_prime(p);
  return {val_p(x, p), abs_p(x, p), frac_p(x, p)};
}

CycNum psi_char(const Rational& x, long p) {
  Rational f = frac_p(x, p);
  if (f == 0) return CycNum(1);
  return CycNum::zeta(f.get_den().get_ui(), f.get_num().get_si());
}

int hilbert_symbol(const Rational& a, const Rational& b, long p) {
  if (a == 0 || b == 0) throw Error(ErrorKind::InvalidArgument, "hilbert_symbol of zero");
  int al = val_p(a, p), be = val_p(b, p);
  Rational u = unit_part(a, p), v = unit_part(b, p);
  int s = 1;
  if ((static_cast<long>(al) * be * ((p - 1) / 2)) % 2 != 0) s = -s;
  if (be % 2 != 0) s *= legendre(u, p);
  if (al % 2 != 0) s *= legendre(v, p);
  return s;
}

Rational ball_volume(int k, int n, long p) { return pow_p(p, -k * n); }

CycNum p_half_power(long p, int e) {
  if (e % 2 == 0) return CycNum(pow_p(p, e / 2));
  // p^{e/2} = sqrt(p) * p^{(e-1)/2}
  return CycNum::sqrt_p(p, pow_p(p, (e - 1) / 2));
}

}  // namespace ttl
