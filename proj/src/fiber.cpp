// Hensel-chart descent for integrals over q = a, truncated shells, and the
// joint fibers {q = a, <v1,x>/2 = xi}.  Everything runs in scaled coordinates
// y = p^E x, where all cells are integral, with arithmetic mod p^M.
#include <algorithm>
#include <array>
#include <climits>
#include <map>

#include "ttl/error.hpp"
#include "ttl/padic.hpp"
#include "ttl/quadspace.hpp"

namespace ttl {
namespace {

constexpr int kMaxDim = 8;
using Vec = std::array<std::int64_t, kMaxDim>;
using Mode = FiberQuery::Mode;

struct Acc {
  long p = 0;
  std::int64_t pmod = 1;
  std::map<int, std::vector<std::int64_t>> by_power;

  void add(int power, std::int64_t phase) {
    auto& v = by_power[power];
    if (v.empty()) v.assign(static_cast<std::size_t>(pmod), 0);
    phase %= pmod;
    if (phase < 0) phase += pmod;
    ++v[static_cast<std::size_t>(phase)];
  }

  CycNum value() const {
    std::vector<CycNum::Term> terms;
    for (const auto& [pw, v] : by_power) {
      Rational f = pow_p(p, pw);
      for (std::int64_t a = 0; a < pmod; ++a)
        if (v[static_cast<std::size_t>(a)])
          terms.push_back({static_cast<std::uint64_t>(pmod), static_cast<std::uint64_t>(a),
                           f * Rational(v[static_cast<std::size_t>(a)]), 0});
    }
    if (terms.empty()) return CycNum();
    return CycNum::from_terms(terms);
  }
};

class Engine {
 public:
  Engine(const QuadSpace& Q, const FiberQuery& query, int E)
      : R(ModRing::max_precision(Q.p())), n(Q.n()), p(Q.p()), mode(query.mode), E_(E) {
    if (n > kMaxDim) throw Error(ErrorKind::InvalidArgument, "dimension too large for the fiber engine");
    cap = (R.M - 1) / 2;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) S[i][j] = R.red(Q.form.gram[i][j]);
    inv2 = R.inv(2);

    Rational Araw = query.a * pow_p(p, 2 * E);
    valA = val_p(Araw, p);
    target_empty = valA < 0;
    if (!target_empty) {
      if (valA >= R.M - 1) throw Error(ErrorKind::InvalidArgument, "target valuation beyond working precision");
      A = R.from_rational(Araw);
    }

    P = 0;
    pP = 1;
    W.fill(0);
    if (query.phase_u && (mode == Mode::Exact || mode == Mode::Truncated)) {
      RatVec w = Q.form.apply(*query.phase_u);
      for (auto& x : w) x /= pow_p(p, E);
      int vw = val_p(w, p);
      if (vw != kInfVal && vw < 0) {
        P = -vw;
        if (P > cap) throw Error(ErrorKind::InvalidArgument, "phase level beyond working precision");
        pP = R.pw[P];
        for (int i = 0; i < n; ++i) W[i] = R.from_rational(w[i] * pow_p(p, P)) % pP;
      }
    }
    acc.p = p;
    acc.pmod = pP;

    Rt = query.trunc_level + 2 * E;
    if (mode == Mode::Truncated && Rt >= R.M - 1)
      throw Error(ErrorKind::InvalidArgument, "truncation level beyond working precision");

    if (mode == Mode::Joint) {
      RatVec sv = Q.form.apply(Q.v1);
      kpiv = -1;
      for (int i = 0; i < n; ++i) {
        s[i] = R.from_rational(sv[i] / 2);
        if (kpiv < 0 && s[i] % p != 0) kpiv = i;
      }
      if (kpiv < 0) throw Error(ErrorKind::BasePointInvalid, "S v1 is not primitive");
      sk_inv = R.inv(s[kpiv]);
      Rational X = query.xi * pow_p(p, E);
      xi_empty = val_p(X, p) < 0;
      if (!xi_empty) Xi = R.from_rational(X);
    }

    qtable.assign(static_cast<std::size_t>(p), {});
    Vec z{};
    while (true) {
      long qz = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) qz += static_cast<long>(S[i][j] % p) * z[i] * z[j];
      qz = (qz % p) * ((p + 1) / 2) % p;
      qtable[static_cast<std::size_t>(qz)].push_back(z);
      int i = 0;
      while (i < n && ++z[i] == p) z[i++] = 0;
      if (i == n) break;
    }
  }

  void run(const Vec& Y, int J) {
    if (target_empty) return;
    if (mode == Mode::Joint && xi_empty) return;
    switch (mode) {
      case Mode::Exact:
      case Mode::Meets: exact(Y, J); break;
      case Mode::Truncated: trunc(Y, J); break;
      case Mode::Joint: joint(Y, J); break;
    }
  }

  const ModRing R;
  const int n;
  const long p;
  const Mode mode;
  const int E_;
  int cap;
  std::int64_t S[kMaxDim][kMaxDim];
  std::int64_t inv2;
  std::int64_t A = 0;
  int valA = 0;
  bool target_empty = false;
  int P;
  std::int64_t pP;
  Vec W;
  int Rt = 0;
  Vec s{};
  int kpiv = 0;
  std::int64_t sk_inv = 1, Xi = 0;
  bool xi_empty = false;
  std::vector<std::vector<Vec>> qtable;

  Acc acc;
  bool stable = true, hit_cap = false, found = false;
  int max_J = INT_MIN, kappa = INT_MIN;

 private:
  Vec matvec(const Vec& Y) const {
    Vec g{};
    for (int i = 0; i < n; ++i) {
      __int128 s0 = 0;
      for (int j = 0; j < n; ++j)
        if (S[i][j]) s0 += static_cast<__int128>(S[i][j]) * Y[j];
      g[i] = R.red(s0);
    }
    return g;
  }
  std::int64_t dot(const Vec& a, const Vec& b) const {
    __int128 s0 = 0;
    for (int i = 0; i < n; ++i) s0 = (s0 + static_cast<__int128>(a[i]) * b[i]) % R.mod;
    return R.red(s0);
  }
  int vval(const Vec& g) const {
    int t = R.M;
    for (int i = 0; i < n; ++i) t = std::min(t, R.val(g[i]));
    return t;
  }
  std::int64_t phase(const Vec& Y) const {
    if (P == 0) return 0;
    __int128 s0 = 0;
    for (int i = 0; i < n; ++i) s0 += static_cast<__int128>(W[i]) * (Y[i] % pP);
    return static_cast<std::int64_t>(s0 % pP);
  }
  bool enter(int J) {
    if (J > cap) {
      hit_cap = true;
      return false;
    }
    max_J = std::max(max_J, J);
    return true;
  }

  // children of Y + p^J L meeting c0 + gp.z = 0 mod p
  template <class F>
  void hyperplane_children(const Vec& Y, int J, std::int64_t c0, const Vec& gp, F&& visit) {
    int piv = 0;
    while (gp[piv] == 0) ++piv;
    std::int64_t ginv = 1;
    for (std::int64_t x = 1; x < p; ++x)
      if (x * gp[piv] % p == 1) ginv = x;
    Vec z{};
    std::int64_t step = R.pw[J];
    while (true) {
      std::int64_t acc0 = c0;
      for (int i = 0; i < n; ++i)
        if (i != piv) acc0 += gp[i] * z[i];
      z[piv] = ((-(acc0 % p) + p) % p) * ginv % p;
      Vec C = Y;
      for (int i = 0; i < n; ++i)
        if (z[i]) C[i] = R.red(static_cast<__int128>(C[i]) + static_cast<__int128>(step) * z[i]);
      visit(C);
      if (found) return;
      int i = 0;
      while (i < n) {
        if (i == piv) {
          ++i;
          continue;
        }
        if (++z[i] == p) {
          z[i] = 0;
          ++i;
        } else {
          break;
        }
      }
      if (i >= n) break;
    }
  }

  // Sum over the surviving children when the phase becomes constant one level down.
  void hyperplane_trick(const Vec& Y, int J, int t, std::int64_t c0, const Vec& gp) {
    int piv = 0;
    while (gp[piv] == 0) ++piv;
    std::int64_t ginv = 1;
    for (std::int64_t x = 1; x < p; ++x)
      if (x * gp[piv] % p == 1) ginv = x;
    Vec h{};
    for (int i = 0; i < n; ++i) h[i] = W[i] % p;
    std::int64_t lam = h[piv] * ginv % p;
    for (int i = 0; i < n; ++i)
      if ((h[i] - lam * gp[i]) % p != 0) return;  // character sums to zero
    std::int64_t ph = phase(Y) - R.pw[P - 1] * (lam * c0 % p);
    acc.add(-J * (n - 1) + t, ph);
  }

  void exact(const Vec& Y, int J) {
    if (found || !enter(J)) return;
    Vec g = matvec(Y);
    int t = vval(g);
    if (t >= J) {
      singular(J, false);
      return;
    }
    std::int64_t d = R.sub(R.mul(inv2, dot(Y, g)), A);
    int e = R.val(d);
    if (e < J + t) return;
    if (P <= J || mode == Mode::Meets) {
      acc.add(-J * (n - 1) + t, phase(Y));
      if (mode == Mode::Meets) found = true;
      return;
    }
    std::int64_t c0 = (d / R.pw[J + t]) % p;
    Vec gp{};
    for (int i = 0; i < n; ++i) gp[i] = (g[i] / R.pw[t]) % p;
    if (J + 1 == P) {
      hyperplane_trick(Y, J, t, c0, gp);
      return;
    }
    hyperplane_children(Y, J, c0, gp, [&](const Vec& C) { exact(C, J + 1); });
  }

  void singular(int J, bool truncated) {
    if (valA < 2 * J) return;
    if (truncated && 2 * J >= Rt) {
      stable = false;
      if (P <= J) acc.add(Rt - J * n, 0);
      return;
    }
    std::int64_t Ap = (A / R.pw[2 * J]) % p;
    std::int64_t step = R.pw[J];
    for (const Vec& z : qtable[static_cast<std::size_t>(Ap)]) {
      bool zero = true;
      for (int i = 0; i < n; ++i) zero = zero && z[i] == 0;
      if (zero) continue;
      Vec C{};
      for (int i = 0; i < n; ++i) C[i] = step * z[i];
      if (truncated)
        trunc(C, J + 1);
      else
        exact(C, J + 1);
      if (found) return;
    }
    Vec zero{};
    if (truncated)
      trunc(zero, J + 1);
    else
      exact(zero, J + 1);
  }

  void trunc(const Vec& Y, int J) {
    if (!enter(J)) return;
    Vec g = matvec(Y);
    int t = vval(g);
    if (t >= J) {
      singular(J, true);
      return;
    }
    std::int64_t d = R.sub(R.mul(inv2, dot(Y, g)), A);
    int e = R.val(d);
    bool phase_const = P <= J;
    if (Rt <= J + t) {
      if (e < Rt) return;
      if (Rt == J + t && phase_const) {
        acc.add(-J * (n - 1) + t, phase(Y));
        return;
      }
      stable = false;
      if (phase_const) acc.add(Rt - J * n, phase(Y));
      return;
    }
    if (e < J + t) return;
    if (phase_const) {
      acc.add(-J * (n - 1) + t, phase(Y));
      return;
    }
    std::int64_t c0 = (d / R.pw[J + t]) % p;
    Vec gp{};
    for (int i = 0; i < n; ++i) gp[i] = (g[i] / R.pw[t]) % p;
    if (J + 1 == P) {
      hyperplane_trick(Y, J, t, c0, gp);
      return;
    }
    hyperplane_children(Y, J, c0, gp, [&](const Vec& C) { trunc(C, J + 1); });
  }

  void joint(const Vec& Y, int J) {
    if (!enter(J)) return;
    kappa = std::max(kappa, J);
    std::int64_t d2 = R.sub(Xi, dot(s, Y));
    if (R.val(d2) < J) return;
    Vec g = matvec(Y);
    int t = vval(g);
    std::int64_t d1 = R.sub(R.mul(inv2, dot(Y, g)), A);
    int e = R.val(d1);
    if (e < std::min(J + t, 2 * J)) return;
    std::int64_t gk = g[kpiv];
    std::int64_t ratio = R.mul(gk, sk_inv);
    int tau = R.M;
    for (int i = 0; i < n; ++i)
      if (i != kpiv) tau = std::min(tau, R.val(R.sub(g[i], R.mul(s[i], ratio))));
    if (J > tau) {
      std::int64_t lam = R.mul(d2 / R.pw[J], sk_inv);
      std::int64_t rem = R.sub(d1, R.mul(R.mul(lam, R.pw[J]), gk));
      kappa = std::max(kappa, J + tau - R.val(gk));
      if (R.val(rem) >= J + tau) acc.add(-J * n + 2 * J + tau, 0);
      return;
    }
    std::int64_t c = (d2 / R.pw[J]) % p;
    Vec sp{};
    for (int i = 0; i < n; ++i) sp[i] = s[i] % p;
    // children with s.z = c mod p, i.e. (-c) + s.z = 0
    hyperplane_children(Y, J, (p - c) % p, sp, [&](const Vec& C) { joint(C, J + 1); });
  }
};

int choose_scale(const SchwartzFn& f) {
  int E = 0;
  for (const auto& [c, v] : f.cells()) {
    E = std::max(E, -c.level);
    int vc = val_p(c.center, f.prime());
    if (vc != kInfVal) E = std::max(E, -vc);
  }
  return E;
}

}  // namespace

FiberOutcome fiber_integrate(const QuadSpace& Q, const SchwartzFn& f, const FiberQuery& query) {
  if (f.dim() != Q.n()) throw Error(ErrorKind::DimensionMismatch, "function and form dimensions differ");
  if (query.a == 0) throw Error(ErrorKind::InvalidArgument, "fiber target must be nonzero");
  int E = choose_scale(f);
  FiberOutcome out;
  out.max_level = INT_MIN;
  out.kappa = INT_MIN;
  Rational scale;
  int n = Q.n();
  if (query.mode == FiberQuery::Mode::Joint)
    scale = pow_p(Q.p(), E * (n - 3));
  else
    scale = pow_p(Q.p(), E * (n - 2));
  for (const auto& [c, coeff] : f.cells()) {
    Engine eng(Q, query, E);
    Vec Y{};
    Rational pe = pow_p(Q.p(), E);
    for (int i = 0; i < n; ++i) Y[i] = eng.R.from_rational(c.center[i] * pe);
    eng.run(Y, c.level + E);
    if (eng.max_J != INT_MIN) out.max_level = std::max(out.max_level, eng.max_J - E);
    if (eng.kappa != INT_MIN) out.kappa = std::max(out.kappa, eng.kappa - E);
    out.stable = out.stable && eng.stable;
    out.hit_cap = out.hit_cap || eng.hit_cap;
    out.found = out.found || eng.found;
    if (query.mode != FiberQuery::Mode::Meets) out.value += eng.acc.value() * coeff;
    if (out.found && query.mode == FiberQuery::Mode::Meets) break;
  }
  if (out.max_level == INT_MIN) out.max_level = f.empty() ? 0 : f.max_level();
  if (out.kappa == INT_MIN) out.kappa = f.empty() ? 0 : f.max_level();
  out.value = out.value.scaled(scale);
  return out;
}

}  // namespace ttl
