#pragma once

#include <vector>

#include "ttl/exactnum.hpp"
#include "ttl/quadspace.hpp"
#include "ttl/schwartz.hpp"
#include "ttl/weil.hpp"

namespace ttl {

// (g . Phi)(v1). Odd n needs allow_metaplectic: the value is taken along the Bruhat section.
CycNum p_value(const SchwartzFn& phi, const SL2Elt& g, const QuadSpace& Q, bool allow_metaplectic = false);

// f_0 = p(1_L)
CycNum basic_f_value(const QuadSpace& Q, const SL2Elt& g, bool allow_metaplectic = false);
SchwartzFn basic_phi(const QuadSpace& Q);

// Restriction of an ambient function to X_1 = {q = 1}.
struct XTestFn {
  SchwartzFn ambient;
  std::vector<std::pair<Cell, Meets>> meets;  // per canonical cell of ambient
};

XTestFn restrict_x(const SchwartzFn& phi, const QuadSpace& Q, int cap = 12);
// value at a point of X_1
CycNum x_evaluate(const XTestFn& f, const RatVec& x);
// agreement on X_1, certified cell by cell
bool x_equal(const XTestFn& f, const XTestFn& g, const QuadSpace& Q, int cap = 12);

// Stabilized I_n(a) via truncated shells q^{-1}(1 + p^n Z_p).
DensityResult whittaker_orbital(const SchwartzFn& phi, const Rational& a, const QuadSpace& Q, int n_max = 12);
// Truncated I_n(a) at a fixed n, with the engine's stability flag.
struct TruncatedOrbital {
  CycNum value;
  bool stable = false;
};
TruncatedOrbital whittaker_truncated(const SchwartzFn& phi, const Rational& a, int n, const QuadSpace& Q);

// gamma |a|^{-n/2} chi(a) * integral over X_1 of Phi(x) psi(<v1, x>/a)
CycNum x_transfer_value(const SchwartzFn& phi, const Rational& a, const QuadSpace& Q, int m_max = 12);

struct TransformResult {
  CycNum value;
  int xi_cells = 0;  // leaf cells summed
  int depth = 0;     // finest xi-level used
};
// Same quantity integrated over xi = <v1, x>/2 with joint fiber densities.
TransformResult transfer_transform(const XTestFn& phi, const Rational& a, const QuadSpace& Q, int m_max = 12);

// |a|^{n/2} chi(a) 1_{|a| <= 1}
CycNum basic_torus_closed_form(const QuadSpace& Q, const Rational& a);

}  // namespace ttl
