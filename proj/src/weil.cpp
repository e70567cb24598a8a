#include "ttl/weil.hpp"

#include <map>

#include "ttl/error.hpp"
#include "ttl/padic.hpp"

namespace ttl {

SL2Elt SL2Elt::make(const Rational& a, const Rational& b, const Rational& c, const Rational& d) {
  if (a * d - b * c != 1) throw Error(ErrorKind::InvalidArgument, "SL2 element must have determinant 1");
  return {a, b, c, d};
}

SL2Elt SL2Elt::t(const Rational& a) {
  if (a == 0) throw Error(ErrorKind::InvalidArgument, "t(0) is not in SL2");
  return {a, 0, 0, Rational(1) / a};
}

SL2Elt SL2Elt::operator*(const SL2Elt& o) const {
  return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

BruhatFactor bruhat_factor(const SL2Elt& g) {
  BruhatFactor f;
  if (g.c == 0) {
    f.big_cell = false;
    f.alpha = g.a;
    f.beta2 = g.b / g.a;
  } else {
    f.big_cell = true;
    f.beta1 = g.a / g.c;
    f.alpha = -g.c;
    f.beta2 = g.d / g.c;
  }
  return f;
}

SL2Elt recompose(const BruhatFactor& f) {
  if (!f.big_cell) return SL2Elt::t(f.alpha) * SL2Elt::n(f.beta2);
  return SL2Elt::n(f.beta1) * SL2Elt::w() * SL2Elt::t(f.alpha) * SL2Elt::n(f.beta2);
}

namespace {

// P^T S P = diag(d) with P in GL_n(Z_(p))
std::vector<Rational> diagonalize(const Form& S) {
  long p = S.p;
  int n = S.n();
  RatMat A(n, RatVec(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A[i][j] = S.gram[i][j];
  std::vector<Rational> d;
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    for (int i = k; i < n; ++i)
      if (val_p(A[i][i], p) == 0) {
        piv = i;
        break;
      }
    if (piv < 0) {
      // e_i <- e_i + e_j for a unit off-diagonal entry
      int bi = -1, bj = -1;
      for (int i = k; i < n && bi < 0; ++i)
        for (int j = k; j < n; ++j)
          if (i != j && val_p(A[i][j], p) == 0) {
            bi = i;
            bj = j;
            break;
          }
      if (bi < 0) throw Error(ErrorKind::NotSelfDual, "form is not unimodular");
      for (int c = 0; c < n; ++c) A[bi][c] += A[bj][c];
      for (int r = 0; r < n; ++r) A[r][bi] += A[r][bj];
      piv = bi;
    }
    std::swap(A[k], A[piv]);
    for (int r = 0; r < n; ++r) std::swap(A[r][k], A[r][piv]);
    Rational pk = A[k][k];
    d.push_back(pk);
    for (int i = k + 1; i < n; ++i) {
      Rational f = A[i][k] / pk;
      if (f == 0) continue;
      for (int c = 0; c < n; ++c) A[i][c] -= f * A[k][c];
      for (int r = 0; r < n; ++r) A[r][i] -= f * A[r][k];
    }
  }
  return d;
}

// integral of psi(d x^2 / 2) over x0 + p^j Z_p
CycNum gauss_1d(const Rational& d, const Rational& x0, int j, long p) {
  int vq = val_p(d / 2, p) + 2 * j;
  int vx = val_p(x0, p);
  long lin = (vx == kInfVal) ? 0 : static_cast<long>(val_p(d, p)) + j + vx;
  if (vq >= 0) {
    if (lin < 0) return CycNum();
    return psi_char(d * x0 * x0 / 2, p).scaled(pow_p(p, -j));
  }
  CycNum acc;
  Rational step = pow_p(p, j);
  for (long z = 0; z < p; ++z) acc += gauss_1d(d, x0 + step * z, j + 1, p);
  return acc;
}

}  // namespace

CycNum gauss_integral(const QuadSpace& Q, int k) {
  CycNum g(1);
  for (const auto& d : diagonalize(Q.form)) g *= gauss_1d(d, 0, -k, Q.p());
  return g;
}

CycNum weil_index(const QuadSpace& Q, int k_max) {
  thread_local std::map<std::pair<std::vector<std::vector<long>>, long>, CycNum> cache;
  auto key = std::make_pair(Q.form.gram, Q.p());
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  CycNum gamma = weil_index_uncached(Q, k_max);
  cache.emplace(std::move(key), gamma);
  return gamma;
}

CycNum weil_index_uncached(const QuadSpace& Q, int k_max) {
  long p = Q.p();
  CycNum prev = gauss_integral(Q, 1);
  for (int k = 2; k <= k_max + 1; ++k) {
    CycNum cur = gauss_integral(Q, k);
    if (cur == prev) {
      CycNum m = cur.abs2();
      if (!m.is_rational()) throw Error(ErrorKind::NormalizationFailure, "|g_k|^2 is not rational");
      Rational r = m.rational_value();
      int e = val_p(r, p);
      if (r != pow_p(p, e)) throw Error(ErrorKind::NormalizationFailure, "|g_k|^2 is not a power of p");
      CycNum gamma = cur * p_half_power(p, -e);
      CycNum g2 = gamma * gamma;
      if (g2 != CycNum(disc_char(Q, -1)) && Q.n() % 2 == 0)
        throw Error(ErrorKind::NormalizationFailure, "gamma^2 differs from chi_disc(-1)");
      return gamma;
    }
    prev = cur;
  }
  throw NonStabilizing(k_max, "Gauss integrals did not stabilize");
}

SchwartzFn act_unipotent(const SchwartzFn& phi, const Rational& b, const QuadSpace& Q) {
  return phase_mul_quadratic(phi, b, Q.form);
}

CycNum torus_factor(const Rational& a, const QuadSpace& Q) {
  int va = val_p(a, Q.p());
  return p_half_power(Q.p(), -va * Q.n()) * CycNum(disc_char(Q, a));
}

SchwartzFn act_torus(const SchwartzFn& phi, const Rational& a, const QuadSpace& Q) {
  if (a == 0) throw Error(ErrorKind::InvalidArgument, "torus parameter must be nonzero");
  if (a == 1) return phi;
  return scale(scale_argument(phi, a), torus_factor(a, Q));
}

SchwartzFn act_weyl(const SchwartzFn& phi, const QuadSpace& Q) {
  return scale(fourier(phi, Q.form, kWeylKernelSign), weil_index(Q));
}

SchwartzFn act_element(const SchwartzFn& phi, const SL2Elt& g, const QuadSpace& Q, bool allow_metaplectic) {
  if (Q.n() % 2 != 0 && !allow_metaplectic)
    throw Error(ErrorKind::MetaplecticAmbiguity, "odd-dimensional V gives only a metaplectic action");
  BruhatFactor f = bruhat_factor(g);
  SchwartzFn r = act_unipotent(phi, f.beta2, Q);
  r = act_torus(r, f.alpha, Q);
  if (f.big_cell) {
    r = act_weyl(r, Q);
    r = act_unipotent(r, f.beta1, Q);
  }
  return r;
}

SchwartzFn act_orthogonal(const SchwartzFn& phi, const RatMat& h) { return transform_linear(phi, h); }

}  // namespace ttl
