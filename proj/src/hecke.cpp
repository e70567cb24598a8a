#include "ttl/hecke.hpp"

#include <map>

#include "ttl/error.hpp"
#include "ttl/padic.hpp"

namespace ttl {

bool in_k(const SL2Elt& g, long p) {
  for (const auto* x : {&g.a, &g.b, &g.c, &g.d})
    if (*x != 0 && val_p(*x, p) < 0) return false;
  return true;
}

IwasawaKey iwasawa_key(const SL2Elt& g0, long p) {
  SL2Elt g = g0;
  if (g.c != 0) {
    if (g.d == 0 || val_p(g.c, p) < val_p(g.d, p)) g = g * SL2Elt{0, -1, 1, 0};
    g = g * SL2Elt{1, 0, -g.c / g.d, 1};
  }
  // g = [[p^j u, b], [0, *]]; right-multiply by diag(1/u, u)
  int j = val_p(g.a, p);
  Rational u = g.a / pow_p(p, j);
  return {j, canonical_coord(g.b * u, j, p)};
}

SL2Elt iwasawa_rep(const IwasawaKey& k, long p) {
  Rational pj = pow_p(p, k.j);
  return SL2Elt{pj, k.beta, 0, 1 / pj};
}

HeckeCosets enumerate_hecke_cosets(long p) {
  require_odd_prime(p);
  long m = p * p;
  SL2Elt tp = SL2Elt::t(Rational(p));
  std::map<IwasawaKey, SL2Elt> seen;
  HeckeCosets out;
  for (long a = 0; a < m; ++a)
    for (long b = 0; b < m; ++b)
      for (long c = 0; c < m; ++c)
        for (long d = 0; d < m; ++d) {
          if (((a * d - b * c) % m + m) % m != 1) continue;
          ++out.scanned;
          // exact lift to SL2(Z_(p)) with the same reduction mod p^2
          SL2Elt k;
          if (a % p != 0)
            k = SL2Elt{a, b, c, Rational(1 + b * c) / a};
          else
            k = SL2Elt{a, Rational(a * d - 1) / c, c, d};
          SL2Elt g = k * tp;
          IwasawaKey key = iwasawa_key(g, p);
          seen.emplace(key, iwasawa_rep(key, p));
        }
  for (const auto& [k, g] : seen) out.reps.push_back(g);
  out.count_ok = static_cast<long>(out.reps.size()) == p * p + p;
  out.inequivalent = true;
  for (std::size_t i = 0; i < out.reps.size() && out.inequivalent; ++i)
    for (std::size_t j = i + 1; j < out.reps.size(); ++j)
      if (in_k(out.reps[i].inverse() * out.reps[j], p)) {
        out.inequivalent = false;
        break;
      }
  return out;
}

std::vector<SL2Elt> k_generators(long p) {
  return {SL2Elt::n(1), SL2Elt::w(), SL2Elt::t(Rational(primitive_root(p)))};
}

bool is_k_invariant(const SchwartzFn& f, const QuadSpace& Q) {
  for (const auto& k : k_generators(Q.p()))
    if (!equals_ae(act_element(f, k, Q), f)) return false;
  return true;
}

HeckeResult hecke_translate(const SchwartzFn& phi, const QuadSpace& Q, bool check_invariance) {
  if (Q.n() % 2 != 0)
    throw Error(ErrorKind::MetaplecticAmbiguity, "Hecke translates are defined here for even-dimensional V");
  HeckeResult r;
  r.cosets = enumerate_hecke_cosets(Q.p());
  if (!r.cosets.count_ok || !r.cosets.inequivalent)
    throw Error(ErrorKind::CosetEnumerationFailure, "coset representatives failed certification");
  // [[p^j, beta], [0, p^-j]] = n(beta p^j) t(p^j): for fixed j the unipotent parts sum to
  // E_j(q(v)) = sum_beta psi(beta p^j q(v)) on the common torus translate
  long p = Q.p();
  std::map<int, std::vector<Rational>> by_j;
  for (const auto& g : r.cosets.reps) {
    IwasawaKey k = iwasawa_key(g, p);
    by_j[k.j].push_back(k.beta * pow_p(p, k.j));
  }
  r.value = SchwartzFn(Q.n(), p);
  for (const auto& [j, xs] : by_j) {
    int M = 0;
    for (const auto& x : xs)
      if (x != 0) M = std::max(M, -val_p(x, p));
    auto E = [&xs, p](const Rational& t) {
      CycNum s;
      for (const auto& x : xs) s += psi_char(x * t, p);
      return s;
    };
    SchwartzFn base = act_torus(phi, pow_p(p, j), Q);
    r.value = add(r.value, multiply_q_function(base, Q.form, M, E));
  }
  if (check_invariance) {
    r.input_k_invariant = is_k_invariant(phi, Q);
    if (r.input_k_invariant) {
      r.k_invariant = is_k_invariant(r.value, Q);
      if (!r.k_invariant) throw Error(ErrorKind::CosetEnumerationFailure, "Hecke translate is not K-invariant");
    }
  }
  return r;
}

}  // namespace ttl
