#include "ttl/quadspace.hpp"

#include <algorithm>

#include "ttl/error.hpp"
#include "ttl/padic.hpp"

namespace ttl {

namespace {
long least_nonresidue(long p) {
  for (long x = 2; x < p; ++x)
    if (legendre(x, p) == -1) return x;
  return 1;
}

Rational square_class(const Rational& d, long p) {
  int v = val_p(d, p);
  Rational u = unit_part(d, p);
  Rational rep = legendre(u, p) == 1 ? Rational(1) : Rational(least_nonresidue(p));
  return (v % 2 != 0) ? rep * p : rep;
}
}  // namespace

QuadSpace make_quadspace(const std::vector<std::vector<long>>& gram, const std::vector<long>& v1, long p,
                         DiscConvention conv) {
  require_odd_prime(p);
  QuadSpace Q;
  Q.form = Form(gram, p);
  int n = Q.form.n();
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "quadratic space dimension must be at least 3");
  if (static_cast<int>(v1.size()) != n) throw Error(ErrorKind::DimensionMismatch, "v1 dimension");
  Integer det = Q.form.det();
  if (det == 0 || val_p(det, p) > 0) throw Error(ErrorKind::NotSelfDual, "det(S) = " + det.get_str() + " is not a unit");
  Q.v1.assign(v1.begin(), v1.end());
  if (Q.q(Q.v1) != 1) throw Error(ErrorKind::BasePointInvalid, "q(v1) = " + to_string(Q.q(Q.v1)));
  Rational d = Rational(det);
  if ((n * (n - 1) / 2) % 2 != 0) d = -d;
  if (conv == DiscConvention::QuadraticGram) d /= pow_p(2, n);
  Q.disc = square_class(d, p);
  Q.convention = conv;
  return Q;
}

QuadSpace split_plus_diagonal(int planes, const std::vector<long>& diag, long p) {
  int n = 2 * planes + static_cast<int>(diag.size());
  std::vector<std::vector<long>> g(n, std::vector<long>(n, 0));
  for (int h = 0; h < planes; ++h) g[2 * h][2 * h + 1] = g[2 * h + 1][2 * h] = 1;
  for (std::size_t i = 0; i < diag.size(); ++i) g[2 * planes + i][2 * planes + i] = 2 * diag[i];
  std::vector<long> v1(n, 0);
  if (planes > 0) {
    v1[0] = v1[1] = 1;
  } else {
    throw Error(ErrorKind::InvalidArgument, "need a hyperbolic plane for the base point");
  }
  QuadSpace Q = make_quadspace(g, v1, p);
  Q.witt_hint = std::to_string(planes) + "H";
  for (long d : diag) Q.witt_hint += "+<" + std::to_string(d) + ">";
  return Q;
}

int disc_char(const QuadSpace& Q, const Rational& a) { return hilbert_symbol(a, Q.disc, Q.p()); }

long point_count_residue(const QuadSpace& Q, const Rational& a) {
  long p = Q.p();
  if (val_p(a, p) != 0) throw Error(ErrorKind::InvalidArgument, "point_count_residue needs a unit");
  ModRing R(p, 1);
  long target = R.from_rational(a);
  int n = Q.n();
  std::vector<long> z(n, 0);
  long count = 0;
  long half = (p + 1) / 2;
  while (true) {
    long s = 0;
    for (int i = 0; i < n; ++i) {
      if (!z[i]) continue;
      for (int j = 0; j < n; ++j) s += (Q.form.gram[i][j] % p) * z[i] * z[j];
    }
    s = ((s % p + p) % p) * half % p;
    if (s == target) ++count;
    int i = 0;
    while (i < n && ++z[i] == p) z[i++] = 0;
    if (i == n) break;
  }
  return count;
}

ResidueCount count_solutions_mod(const QuadSpace& Q, const std::vector<Constraint>& constraints, int m,
                                 const Cell& cell) {
  if (m < cell.level) throw Error(ErrorKind::LevelTooSmall, "m below the cell level");
  long p = Q.p();
  int n = Q.n();
  int E = std::max(0, -cell.level);
  int vc = val_p(cell.center, p);
  if (vc != kInfVal) E = std::max(E, -vc);
  for (const auto& c : constraints) {
    int vt = val_p(c.target, p);
    if (vt == kInfVal) continue;
    if (c.poly == Constraint::Poly::Q)
      E = std::max(E, (-vt + 1) / 2);
    else
      E = std::max(E, -vt);
  }
  int top = m + 2 * E;
  if (top > ModRing::max_precision(p).M) throw Error(ErrorKind::InvalidArgument, "residue level too large");
  ModRing R(p, top);
  Rational pe = pow_p(p, E);
  std::vector<std::int64_t> X0(n);
  for (int i = 0; i < n; ++i) X0[i] = R.from_rational(cell.center[i] * pe);
  RatVec sv1 = Q.form.apply(Q.v1);
  std::vector<std::int64_t> w(n);
  for (int i = 0; i < n; ++i) w[i] = R.from_rational(sv1[i]);
  struct Tgt {
    bool quad;
    std::int64_t value, mod;
  };
  std::vector<Tgt> tg;
  for (const auto& c : constraints) {
    bool quad = c.poly == Constraint::Poly::Q;
    Rational t = c.target * (quad ? pow_p(p, 2 * E) : pe);
    std::int64_t md = quad ? R.pw[m + 2 * E] : R.pw[m + E];
    tg.push_back({quad, R.from_rational(t) % md, md});
  }
  std::int64_t inv2 = R.inv(2);
  int free_digits = m + E - cell.level;
  std::int64_t step = R.pw[cell.level + E];
  std::int64_t range = 1;
  for (int i = 0; i < free_digits; ++i) range *= p;
  std::vector<std::int64_t> y(n, 0), X(n);
  Integer count = 0;
  while (true) {
    for (int i = 0; i < n; ++i) X[i] = R.add(X0[i], R.mul(step, y[i]));
    bool ok = true;
    for (const auto& t : tg) {
      std::int64_t val;
      if (t.quad) {
        __int128 s = 0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            if (Q.form.gram[i][j]) s = (s + static_cast<__int128>(R.mul(X[i], X[j])) * Q.form.gram[i][j]) % R.mod;
        val = R.mul(R.red(s), inv2);
      } else {
        __int128 s = 0;
        for (int i = 0; i < n; ++i) s = (s + static_cast<__int128>(w[i]) * X[i]) % R.mod;
        val = R.red(s);
      }
      if ((val - t.value) % t.mod != 0) {
        ok = false;
        break;
      }
    }
    if (ok) ++count;
    int i = 0;
    while (i < n && ++y[i] == range) y[i++] = 0;
    if (i == n) break;
  }
  return {count, m + E};
}

MeetsVerdict meets_fiber(const QuadSpace& Q, const Cell& cell, const Rational& a, int cap) {
  FiberQuery q;
  q.mode = FiberQuery::Mode::Meets;
  q.a = a;
  SchwartzFn f = indicator(cell, Q.p());
  FiberOutcome o = fiber_integrate(Q, f, q);
  if (o.found) return {Meets::Yes, o.max_level};
  if (o.hit_cap || o.max_level > cap) return {Meets::Undetermined, o.max_level};
  return {Meets::No, o.max_level};
}

DensityResult fiber_volume(const QuadSpace& Q, const SchwartzFn& f, const Rational& a, int m_max) {
  FiberQuery q;
  q.mode = FiberQuery::Mode::Exact;
  q.a = a;
  FiberOutcome exact = fiber_integrate(Q, f, q);
  if (exact.hit_cap) throw NonStabilizing(m_max, "fiber descent exceeded working precision");
  if (f.empty()) return {CycNum(), 1, true};
  int m0 = std::max(1, f.max_level() + 1);
  q.mode = FiberQuery::Mode::Truncated;
  for (int m = m0; m <= m_max; ++m) {
    q.trunc_level = m;
    FiberOutcome t = fiber_integrate(Q, f, q);
    if (!t.stable || t.value != exact.value) continue;
    q.trunc_level = m + 1;
    FiberOutcome t2 = fiber_integrate(Q, f, q);
    if (t2.value == exact.value) return {exact.value, m, true};
  }
  throw NonStabilizing(m_max, "truncated volumes did not stabilize");
}

DensityResult joint_fiber_volume(const QuadSpace& Q, const SchwartzFn& f, const Rational& a, const Rational& xi,
                                 int m_max) {
  if (xi * xi == a) {
    RatVec pt = Q.v1;
    for (auto& x : pt) x *= xi;
    for (const auto& [c, v] : f.cells())
      if (cell_contains_point(c, pt, Q.p()))
        throw Error(ErrorKind::SingularFiber, "support contains the singular point xi*v1");
  }
  FiberQuery q;
  q.mode = FiberQuery::Mode::Joint;
  q.a = a;
  q.xi = xi;
  FiberOutcome o = fiber_integrate(Q, f, q);
  if (o.hit_cap || o.max_level + 1 > m_max) throw NonStabilizing(m_max, "joint fiber descent too deep");
  return {o.value, std::max(1, o.max_level + 1), true};
}

}  // namespace ttl
