#pragma once

#include "ttl/exactnum.hpp"
#include "ttl/quadspace.hpp"
#include "ttl/schwartz.hpp"

namespace ttl {

struct SL2Elt {
  Rational a = 1, b = 0, c = 0, d = 1;

  static SL2Elt make(const Rational& a, const Rational& b, const Rational& c, const Rational& d);
  static SL2Elt n(const Rational& b) { return {1, b, 0, 1}; }
  static SL2Elt t(const Rational& a);
  static SL2Elt w() { return {0, 1, -1, 0}; }

  SL2Elt operator*(const SL2Elt& o) const;
  SL2Elt inverse() const { return {d, -b, -c, a}; }
  bool operator==(const SL2Elt& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
};

// upper: g = t(alpha) n(beta2); big cell: g = n(beta1) w t(alpha) n(beta2)
struct BruhatFactor {
  bool big_cell = false;
  Rational alpha = 1, beta1 = 0, beta2 = 0;
};

BruhatFactor bruhat_factor(const SL2Elt& g);
SL2Elt recompose(const BruhatFactor& f);

// Sign s of the Fourier kernel psi(s <v, v'>) realizing w = [[0,1],[-1,0]].
inline constexpr int kWeylKernelSign = 1;

// g_k = integral of psi(q) over p^{-k} L
CycNum gauss_integral(const QuadSpace& Q, int k);
CycNum weil_index(const QuadSpace& Q, int k_max = 8);  // cached per Gram matrix
CycNum weil_index_uncached(const QuadSpace& Q, int k_max = 8);

SchwartzFn act_unipotent(const SchwartzFn& phi, const Rational& b, const QuadSpace& Q);
SchwartzFn act_torus(const SchwartzFn& phi, const Rational& a, const QuadSpace& Q);
SchwartzFn act_weyl(const SchwartzFn& phi, const QuadSpace& Q);
SchwartzFn act_element(const SchwartzFn& phi, const SL2Elt& g, const QuadSpace& Q, bool allow_metaplectic = false);
// phi o h^{-1} for h in O(V) with integral entries
SchwartzFn act_orthogonal(const SchwartzFn& phi, const RatMat& h);

// |a|^{n/2} chi_disc(a)
CycNum torus_factor(const Rational& a, const QuadSpace& Q);

}  // namespace ttl
