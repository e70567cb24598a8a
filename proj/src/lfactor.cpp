#include "ttl/lfactor.hpp"

#include <cmath>

#include "ttl/error.hpp"
#include "ttl/padic.hpp"

namespace ttl {

namespace {

LFactorValue constant(const Rational& r) {
  return {CycNum(r), {r.get_d(), 0}, ""};
}

// p^{-s}
LFactorValue p_power(long p, const Rational& s) {
  LFactorValue v;
  v.approx = std::pow(static_cast<double>(p), -s.get_d());
  Rational two_s = 2 * s;
  if (two_s.get_den() == 1 && two_s.get_num().fits_sint_p())
    v.exact = p_half_power(p, -static_cast<int>(two_s.get_num().get_si()));
  return v;
}

LFactorValue alpha_power(const SatakeData& sigma, int k) {
  LFactorValue v;
  v.approx = std::pow(sigma.alpha, k);
  if (k == 0) {
    v.exact = CycNum(1);
  } else if (sigma.alpha_exact) {
    CycNum a = k >= 0 ? *sigma.alpha_exact : sigma.alpha_exact->inverse();
    CycNum r(1);
    for (int i = 0; i < std::abs(k); ++i) r = r * a;
    v.exact = r;
  }
  return v;
}

// (1 - c alpha^k X)^{-1}
LFactorValue euler_inverse(const SatakeData& sigma, int k, int c, const LFactorValue& X) {
  LFactorValue t = alpha_power(sigma, k) * X * constant(c);
  LFactorValue d;
  d.approx = 1.0 - t.approx;
  if (t.exact) d.exact = CycNum(1) - *t.exact;
  if (std::abs(d.approx) < 1e-300 || (d.exact && d.exact->is_zero()))
    throw Error(ErrorKind::PoleAtS, "Euler factor has a pole at this s");
  return constant(1) / d;
}

LFactorValue with_desc(LFactorValue v, std::string d) {
  v.description = std::move(d);
  return v;
}

}  // namespace

LFactorValue LFactorValue::operator*(const LFactorValue& o) const {
  LFactorValue r;
  r.approx = approx * o.approx;
  if (exact && o.exact) r.exact = *exact * *o.exact;
  r.description = description;
  return r;
}

LFactorValue LFactorValue::operator/(const LFactorValue& o) const {
  LFactorValue r;
  r.approx = approx / o.approx;
  if (exact && o.exact) r.exact = *exact / *o.exact;
  r.description = description;
  return r;
}

SatakeData SatakeData::exact(long p, const CycNum& alpha) {
  SatakeData s;
  s.p = p;
  s.alpha_exact = alpha;
  s.alpha = alpha.to_complex();
  return s;
}

SatakeData SatakeData::numeric(long p, std::complex<double> alpha) {
  SatakeData s;
  s.p = p;
  s.alpha = alpha;
  return s;
}

LFactorValue zeta_factor(long p, const Rational& s) {
  if (s == 0) throw Error(ErrorKind::PoleAtS, "zeta_F has a pole at s = 0");
  return with_desc(dirichlet_lfactor(p, 1, s), "zeta");
}

LFactorValue dirichlet_lfactor(long p, int chi, const Rational& s) {
  if (chi == 0) return with_desc(constant(1), "L(chi)");
  return with_desc(euler_inverse(SatakeData::numeric(p, 1), 0, chi, p_power(p, s)), "L(chi)");
}

LFactorValue std_lfactor(const SatakeData& sigma, const Rational& s, int chi) {
  if (chi == 0) return with_desc(constant(1), "std");
  LFactorValue X = p_power(sigma.p, s);
  return with_desc(euler_inverse(sigma, 2, chi, X) * euler_inverse(sigma, 0, chi, X) * euler_inverse(sigma, -2, chi, X),
                   "std");
}

LFactorValue adjoint_lfactor(const SatakeData& sigma, const Rational& s) {
  return with_desc(std_lfactor(sigma, s, 1), "Ad");
}

LFactorValue mp_std_lfactor(const SatakeData& sigma, const Rational& s, int chi, MetaplecticConvention conv) {
  if (conv == MetaplecticConvention::SameShape) return with_desc(std_lfactor(sigma, s, chi), "std_psi");
  if (chi == 0) return with_desc(constant(1), "std_psi");
  LFactorValue X = p_power(sigma.p, s);
  return with_desc(euler_inverse(sigma, 1, chi, X) * euler_inverse(sigma, -1, chi, X), "std_psi");
}

LFactorValue mp_adjoint_lfactor(const SatakeData& sigma, const Rational& s) {
  return with_desc(std_lfactor(sigma, s, 1), "Ad_psi");
}

int lx_twist(const QuadSpace& Q) {
  long p = Q.p();
  int n = Q.n();
  if (n % 2 == 0) return disc_char(Q, Rational(p));
  // v1-perp has dimension 2m and Gram determinant det(S) / <v1, v1> = det(S) / 2
  int m = (n - 1) / 2;
  Rational d = Rational(Q.form.det()) / 2;
  if (m % 2) d = -d;
  if (val_p(d, p) % 2 != 0) return 0;
  return hilbert_symbol(Rational(p), d, p);
}

LFactorValue lx_sharp(const QuadSpace& Q, const SatakeData& sigma, MetaplecticConvention conv) {
  int dim = Q.n();
  int chi = lx_twist(Q);
  long p = sigma.p;
  if (dim % 2 == 0) {
    int n = dim / 2;
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "L_X^# needs dim V >= 3");
    LFactorValue v = std_lfactor(sigma, n - 1, chi) / adjoint_lfactor(sigma, 1) * dirichlet_lfactor(p, chi, n) /
                     zeta_factor(p, 2 * n - 2);
    return with_desc(v, "L_X^#");
  }
  int n = (dim - 1) / 2;
  LFactorValue L = dirichlet_lfactor(p, chi, n);
  LFactorValue v = mp_std_lfactor(sigma, Rational(2 * n - 1, 2), chi, conv) *
                   mp_std_lfactor(sigma, Rational(1, 2), 1, conv) / mp_adjoint_lfactor(sigma, 1) *
                   zeta_factor(p, 2 * n) / (L * L);
  return with_desc(v, "L_X^#");
}

Integer orth_group_order(OrthKind kind, int m, const Integer& q) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "m must be positive");
  Integer r = 2;
  auto qp = [&](long e) {
    Integer x;
    mpz_pow_ui(x.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(e));
    return x;
  };
  if (kind == OrthKind::Odd) {
    r *= qp(static_cast<long>(m) * m);
    for (int i = 1; i <= m; ++i) r *= qp(2 * i) - 1;
    return r;
  }
  int eps = kind == OrthKind::EvenPlus ? 1 : -1;
  r *= qp(static_cast<long>(m) * (m - 1));
  r *= qp(m) - eps;
  for (int i = 1; i <= m - 1; ++i) r *= qp(2 * i) - 1;
  return r;
}

Rational x_volume_from_groups(const QuadSpace& Q) {
  long p = Q.p();
  int n = Q.n();
  Integer q = p;
  Rational ratio;
  if (n % 2 == 0) {
    if (val_p(Q.disc, p) != 0) throw Error(ErrorKind::InvalidArgument, "reduction of V is degenerate");
    int eps = legendre(Q.disc, p);
    Integer top = orth_group_order(eps == 1 ? OrthKind::EvenPlus : OrthKind::EvenMinus, n / 2, q);
    Integer bot = orth_group_order(OrthKind::Odd, (n - 2) / 2, q);
    ratio = Rational(top) / Rational(bot);
  } else {
    int eps = lx_twist(Q);
    if (eps == 0) throw Error(ErrorKind::InvalidArgument, "reduction of v1-perp is degenerate");
    Integer top = orth_group_order(OrthKind::Odd, (n - 1) / 2, q);
    Integer bot = orth_group_order(eps == 1 ? OrthKind::EvenPlus : OrthKind::EvenMinus, (n - 1) / 2, q);
    ratio = Rational(top) / Rational(bot);
  }
  return ratio * pow_p(p, -(n - 1));
}

AssemblyResult assembly_check(const QuadSpace& Q, const SatakeData& sigma, MetaplecticConvention conv, double tol) {
  AssemblyResult r;
  long p = sigma.p;
  int dim = Q.n();
  int chi = lx_twist(Q);
  r.lhs = lx_sharp(Q, sigma, conv);
  LFactorValue vol_k = constant(1) / zeta_factor(p, 2);
  LFactorValue ell2, Z;
  if (dim % 2 == 0) {
    int n = dim / 2;
    ell2 = zeta_factor(p, 2) / adjoint_lfactor(sigma, 1);
    Z = vol_k * std_lfactor(sigma, n - 1, chi) / (zeta_factor(p, 2 * n - 2) * dirichlet_lfactor(p, chi, n));
  } else {
    int n = (dim - 1) / 2;
    ell2 = zeta_factor(p, 2) * mp_std_lfactor(sigma, Rational(1, 2), 1, conv) / mp_adjoint_lfactor(sigma, 1);
    Z = vol_k * mp_std_lfactor(sigma, Rational(2 * n - 1, 2), chi, conv) / zeta_factor(p, 2 * n);
  }
  Rational vol = x_volume_from_groups(Q);
  r.rhs = ell2 * Z / constant(vol * vol);
  r.residual = std::abs(r.lhs.approx - r.rhs.approx);
  if (r.lhs.exact && r.rhs.exact) r.exact_equal = *r.lhs.exact == *r.rhs.exact;
  r.pass = r.residual < tol && r.exact_equal.value_or(true);
  return r;
}

}  // namespace ttl
