#include "ttl/transfer.hpp"

#include <algorithm>

#include "ttl/error.hpp"
#include "ttl/padic.hpp"

namespace ttl {

namespace {

void check_metaplectic(const QuadSpace& Q, bool allow) {
  if (Q.n() % 2 != 0 && !allow)
    throw Error(ErrorKind::MetaplecticAmbiguity, "odd-dimensional V gives only a metaplectic action");
}

RatVec scaled(const RatVec& v, const Rational& s) {
  RatVec r = v;
  for (auto& x : r) x *= s;
  return r;
}

// gamma |a|^{-n/2} chi(a)
CycNum orbital_prefactor(const Rational& a, const QuadSpace& Q) {
  int va = val_p(a, Q.p());
  return weil_index(Q) * p_half_power(Q.p(), va * Q.n()) * CycNum(disc_char(Q, a));
}

}  // namespace

CycNum p_value(const SchwartzFn& phi, const SL2Elt& g, const QuadSpace& Q, bool allow_metaplectic) {
  check_metaplectic(Q, allow_metaplectic);
  BruhatFactor f = bruhat_factor(g);
  long p = Q.p();
  if (!f.big_cell) {
    // t(alpha) n(beta2): tf(alpha) psi(beta2 q(alpha v1)) Phi(alpha v1)
    RatVec x = scaled(Q.v1, f.alpha);
    CycNum v = evaluate(phi, x);
    if (v.is_zero()) return v;
    return torus_factor(f.alpha, Q) * psi_char(f.beta2 * Q.q(x), p) * v;
  }
  // psi(beta1) gamma tf(alpha) |alpha|^{-n} int psi(beta2 q(y)) Phi(y) psi(<y, v1/alpha>) dy
  SchwartzFn h = act_unipotent(phi, f.beta2, Q);
  CycNum ft = fourier_at(h, scaled(Q.v1, 1 / f.alpha), Q.form, kWeylKernelSign);
  if (ft.is_zero()) return ft;
  int va = val_p(f.alpha, p);
  Rational jac = pow_p(p, va * Q.n());
  return psi_char(f.beta1 * Q.q(Q.v1), p) * weil_index(Q) * torus_factor(f.alpha, Q) * CycNum(jac) * ft;
}

SchwartzFn basic_phi(const QuadSpace& Q) { return lattice_indicator(Q.n(), Q.p(), 0); }

CycNum basic_f_value(const QuadSpace& Q, const SL2Elt& g, bool allow_metaplectic) {
  return p_value(basic_phi(Q), g, Q, allow_metaplectic);
}

CycNum basic_torus_closed_form(const QuadSpace& Q, const Rational& a) {
  if (val_p(a, Q.p()) < 0) return CycNum();
  return torus_factor(a, Q);
}

XTestFn restrict_x(const SchwartzFn& phi, const QuadSpace& Q, int cap) {
  XTestFn out{phi, {}};
  for (const auto& [c, v] : phi.cells()) {
    MeetsVerdict m = meets_fiber(Q, c, 1, cap);
    if (m.verdict == Meets::Undetermined)
      throw Error(ErrorKind::NeedsRefinement, "cannot decide whether a cell meets X_1");
    out.meets.emplace_back(c, m.verdict);
  }
  return out;
}

CycNum x_evaluate(const XTestFn& f, const RatVec& x) { return evaluate(f.ambient, x); }

bool x_equal(const XTestFn& f, const XTestFn& g, const QuadSpace& Q, int cap) {
  SchwartzFn d = sub(f.ambient, g.ambient);
  for (const auto& [c, v] : d.cells()) {
    MeetsVerdict m = meets_fiber(Q, c, 1, cap);
    if (m.verdict == Meets::Undetermined)
      throw Error(ErrorKind::NeedsRefinement, "cannot decide whether a cell meets X_1");
    if (m.verdict == Meets::Yes) return false;
  }
  return true;
}

TruncatedOrbital whittaker_truncated(const SchwartzFn& phi, const Rational& a, int n, const QuadSpace& Q) {
  if (a == 0) throw Error(ErrorKind::InvalidArgument, "a must be nonzero");
  FiberQuery q;
  q.mode = FiberQuery::Mode::Truncated;
  q.a = 1;
  q.phase_u = scaled(Q.v1, 1 / a);
  q.trunc_level = n;
  FiberOutcome o = fiber_integrate(Q, phi, q);
  if (o.hit_cap) throw NonStabilizing(n, "truncated orbital integral exceeded working precision");
  return {orbital_prefactor(a, Q) * o.value, o.stable};
}

DensityResult whittaker_orbital(const SchwartzFn& phi, const Rational& a, const QuadSpace& Q, int n_max) {
  if (a == 0) throw Error(ErrorKind::InvalidArgument, "a must be nonzero");
  if (phi.empty()) return {CycNum(), 1, true};
  int n0 = std::max(1, phi.max_level() + 1);
  for (int n = n0; n <= n_max; ++n) {
    TruncatedOrbital t = whittaker_truncated(phi, a, n, Q);
    if (!t.stable) continue;
    TruncatedOrbital t2 = whittaker_truncated(phi, a, n + 1, Q);
    if (t2.value == t.value) return {t.value, n, true};
  }
  throw NonStabilizing(n_max, "truncated Whittaker integrals did not stabilize");
}

CycNum x_transfer_value(const SchwartzFn& phi, const Rational& a, const QuadSpace& Q, int m_max) {
  if (a == 0) throw Error(ErrorKind::InvalidArgument, "a must be nonzero");
  FiberQuery q;
  q.mode = FiberQuery::Mode::Exact;
  q.a = 1;
  q.phase_u = scaled(Q.v1, 1 / a);
  FiberOutcome o = fiber_integrate(Q, phi, q);
  if (o.hit_cap || o.max_level > m_max) throw NonStabilizing(m_max, "fiber descent exceeded the cap");
  return orbital_prefactor(a, Q) * o.value;
}

TransformResult transfer_transform(const XTestFn& phi, const Rational& a, const QuadSpace& Q, int m_max) {
  if (a == 0) throw Error(ErrorKind::InvalidArgument, "a must be nonzero");
  const SchwartzFn& f = phi.ambient;
  long p = Q.p();
  TransformResult res;
  if (f.empty()) return res;
  for (int sgn : {1, -1}) {
    RatVec pt = scaled(Q.v1, sgn);
    for (const auto& [cell, v] : f.cells())
      if (cell_contains_point(cell, pt, p))
        throw Error(ErrorKind::SingularFiber, "support contains a singular point +-v1");
  }
  int va = val_p(a, p);
  // <v1, x> / 2 has valuation >= the support valuation
  int s0 = std::min(f.min_support_val(), 0);
  struct XiCell {
    Rational center;
    int level;
  };
  std::vector<XiCell> stack{{0, s0}};
  CycNum acc;
  while (!stack.empty()) {
    XiCell c = stack.back();
    stack.pop_back();
    if (c.level > m_max) throw NonStabilizing(m_max, "xi-cells did not stabilize");
    FiberQuery q;
    q.mode = FiberQuery::Mode::Joint;
    q.a = 1;
    q.xi = c.center;
    FiberOutcome o = fiber_integrate(Q, f, q);
    if (o.hit_cap) throw NonStabilizing(m_max, "joint fiber descent exceeded working precision");
    if (o.kappa <= c.level) {
      ++res.xi_cells;
      res.depth = std::max(res.depth, c.level);
      // integral of psi(2 xi / a) over the cell vanishes unless the phase is constant on it
      if (!o.value.is_zero() && c.level >= va)
        acc += o.value * psi_char(2 * c.center / a, p) * CycNum(pow_p(p, -c.level));
      continue;
    }
    Rational step = pow_p(p, c.level);
    for (long j = 0; j < p; ++j) stack.push_back({canonical_coord(c.center + step * j, c.level + 1, p), c.level + 1});
  }
  res.value = orbital_prefactor(a, Q) * acc;
  return res;
}

}  // namespace ttl
