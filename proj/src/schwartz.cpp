#include "ttl/schwartz.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <unordered_map>
#include <cmath>

#include "ttl/error.hpp"
#include "ttl/padic.hpp"

namespace ttl {

Form::Form(std::vector<std::vector<long>> g, long p_) : p(p_), gram(std::move(g)) {
  std::size_t n = gram.size();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "empty Gram matrix");
  for (std::size_t i = 0; i < n; ++i) {
    if (gram[i].size() != n) throw Error(ErrorKind::InvalidArgument, "Gram matrix is not square");
    for (std::size_t j = 0; j < i; ++j)
      if (gram[i][j] != gram[j][i]) throw Error(ErrorKind::InvalidArgument, "Gram matrix is not symmetric");
  }
}

RatVec Form::apply(const RatVec& v) const {
  RatVec out(gram.size(), 0);
  for (std::size_t i = 0; i < gram.size(); ++i)
    for (std::size_t j = 0; j < gram.size(); ++j)
      if (gram[i][j] != 0 && v[j] != 0) out[i] += Rational(gram[i][j]) * v[j];
  return out;
}

Rational Form::pair(const RatVec& u, const RatVec& v) const {
  Rational s = 0;
  for (std::size_t i = 0; i < gram.size(); ++i) {
    if (u[i] == 0) continue;
    for (std::size_t j = 0; j < gram.size(); ++j)
      if (gram[i][j] != 0 && v[j] != 0) s += u[i] * Rational(gram[i][j]) * v[j];
  }
  return s;
}

Integer Form::det() const {
  std::size_t n = gram.size();
  RatMat a(n, RatVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = gram[i][j];
  Rational d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a[r][c] == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return d.get_num();
}

bool Form::unimodular() const { return val_p(det(), p) == 0; }

bool Cell::operator<(const Cell& o) const {
  if (level != o.level) return level < o.level;
  return center < o.center;
}

Rational canonical_coord(const Rational& x, int k, long p) {
  if (x == 0) return 0;
  int e = val_p(x.get_den(), p);
  int m = k + e;
  if (m <= 0) return 0;
  Integer pm = pow_p(p, m).get_num();
  Integer pe = pow_p(p, e).get_num();
  Integer dprime = x.get_den() / pe;
  Integer r;
  if (dprime == 1) {
    r = x.get_num() % pm;
  } else {
    Integer inv;
    mpz_invert(inv.get_mpz_t(), dprime.get_mpz_t(), pm.get_mpz_t());
    r = (x.get_num() * inv) % pm;
  }
  if (r < 0) r += pm;
  return Rational(r, pe);
}

Cell make_cell(const RatVec& center, int level, long p) {
  Cell c;
  c.level = level;
  c.center.reserve(center.size());
  for (const auto& x : center) c.center.push_back(canonical_coord(x, level, p));
  return c;
}

bool cell_contains(const Cell& big, const Cell& small, long p) {
  if (small.level < big.level) return false;
  return make_cell(small.center, big.level, p).center == big.center;
}

bool cell_contains_point(const Cell& c, const RatVec& v, long p) {
  return make_cell(v, c.level, p).center == c.center;
}

std::vector<Cell> cell_children(const Cell& c, long p) {
  std::size_t n = c.center.size();
  Rational step = pow_p(p, c.level);
  std::vector<Cell> out;
  std::vector<long> z(n, 0);
  while (true) {
    Cell ch;
    ch.level = c.level + 1;
    ch.center = c.center;
    for (std::size_t i = 0; i < n; ++i)
      if (z[i]) ch.center[i] += step * z[i];
    out.push_back(std::move(ch));
    std::size_t i = 0;
    while (i < n && ++z[i] == p) z[i++] = 0;
    if (i == n) break;
  }
  return out;
}

Cell cell_parent(const Cell& c, long p) { return make_cell(c.center, c.level - 1, p); }

namespace {

std::size_t ipow(long p, int n) {
  std::size_t r = 1;
  for (int i = 0; i < n; ++i) r *= static_cast<std::size_t>(p);
  return r;
}

using Coeffs = std::vector<CycNum>;

template <class V>
void add_to(V& a, const V& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

template <class V>
using ItemT = std::pair<const Cell, V>;

template <class V>
void resolve(const Cell& C, const V& v, const std::vector<const ItemT<V>*>& D, long p,
             std::vector<std::pair<Cell, V>>& out) {
  if (D.empty()) {
    out.emplace_back(C, v);
    return;
  }
  std::map<Cell, std::vector<const ItemT<V>*>> groups;
  for (const auto* d : D) groups[make_cell(d->first.center, C.level + 1, p)].push_back(d);
  for (auto& K : cell_children(C, p)) {
    auto it = groups.find(K);
    if (it == groups.end()) {
      out.emplace_back(std::move(K), v);
      continue;
    }
    V vK = v;
    std::vector<const ItemT<V>*> rest;
    for (const auto* d : it->second) {
      if (d->first == K)
        add_to(vK, d->second);
      else
        rest.push_back(d);
    }
    resolve(K, vK, rest, p, out);
  }
}

// Common disjoint refinement of weighted cells; overlapping weights add.
template <class V>
std::vector<std::pair<Cell, V>> overlay(long p, std::map<Cell, V> all) {
  std::set<int> levels;
  for (const auto& [c, v] : all) levels.insert(c.level);
  std::map<Cell, std::vector<const ItemT<V>*>> desc;
  std::vector<const ItemT<V>*> roots;
  for (const auto& e : all) {
    bool found = false;
    for (int L : levels) {
      if (L >= e.first.level) break;
      Cell a = make_cell(e.first.center, L, p);
      if (all.count(a)) {
        desc[a].push_back(&e);
        found = true;
        break;
      }
    }
    if (!found) roots.push_back(&e);
  }
  std::vector<std::pair<Cell, V>> out;
  for (const auto* r : roots) {
    auto it = desc.find(r->first);
    if (it == desc.end())
      out.emplace_back(r->first, r->second);
    else
      resolve(r->first, r->second, it->second, p, out);
  }
  return out;
}

std::vector<std::pair<Cell, Coeffs>> overlay(long p, std::size_t K,
                                              const std::vector<std::pair<Cell, Coeffs>>& items) {
  std::map<Cell, Coeffs> all;
  for (const auto& [c, v] : items) {
    auto [it, ins] = all.emplace(c, v);
    if (!ins)
      for (std::size_t i = 0; i < K; ++i) it->second[i] += v[i];
  }
  return overlay<Coeffs>(p, std::move(all));
}

std::vector<std::pair<Cell, Coeffs>> tagged(const SchwartzFn& f, std::size_t slot, std::size_t K) {
  std::vector<std::pair<Cell, Coeffs>> out;
  for (const auto& [c, v] : f.cells()) {
    Coeffs cv(K);
    cv[slot] = v;
    out.emplace_back(c, std::move(cv));
  }
  return out;
}

void check_same_space(const SchwartzFn& f, const SchwartzFn& g) {
  if (f.dim() != g.dim()) throw Error(ErrorKind::DimensionMismatch, "Schwartz functions of different dimension");
  if (f.prime() != g.prime() && !f.empty() && !g.empty())
    throw Error(ErrorKind::InvalidArgument, "Schwartz functions over different primes");
}

void descend(const Cell& c, int m, long p, std::vector<Cell>& out) {
  if (c.level >= m) {
    out.push_back(c);
    return;
  }
  for (auto& ch : cell_children(c, p)) descend(ch, m, p, out);
}

}  // namespace

void SchwartzFn::canonicalize() {
  for (auto it = cells_.begin(); it != cells_.end();) {
    if (it->second.is_zero())
      it = cells_.erase(it);
    else
      ++it;
  }
  if (cells_.empty()) return;
  std::size_t fan = ipow(p_, n_);
  int lo = cells_.begin()->first.level;
  int hi = cells_.rbegin()->first.level;
  for (int L = hi; L >= lo; --L) {
    std::map<Cell, std::vector<CellMap::iterator>> groups;
    auto first = cells_.lower_bound(Cell{RatVec{}, L});
    for (auto it = first; it != cells_.end() && it->first.level == L; ++it)
      groups[cell_parent(it->first, p_)].push_back(it);
    for (auto& [par, its] : groups) {
      if (its.size() != fan) continue;
      const CycNum& v0 = its.front()->second;
      bool same = std::all_of(its.begin(), its.end(), [&](auto it) { return it->second == v0; });
      if (!same) continue;
      CycNum v = v0;
      for (auto it : its) cells_.erase(it);
      cells_.emplace(par, v);
      if (L - 1 < lo) lo = L - 1;
    }
  }
}

SchwartzFn SchwartzFn::from_disjoint(int n, long p, CellMap cells) {
  SchwartzFn f(n, p);
  f.cells_ = std::move(cells);
  f.canonicalize();
  return f;
}

SchwartzFn SchwartzFn::from_pieces(int n, long p, const std::vector<std::pair<Cell, CycNum>>& pieces) {
  std::vector<std::pair<Cell, Coeffs>> items;
  items.reserve(pieces.size());
  for (const auto& [c, v] : pieces) {
    if (static_cast<int>(c.center.size()) != n)
      throw Error(ErrorKind::DimensionMismatch, "cell dimension does not match");
    items.emplace_back(make_cell(c.center, c.level, p), Coeffs{v});
  }
  CellMap m;
  for (auto& [c, v] : overlay(p, 1, items)) m.emplace(std::move(c), std::move(v[0]));
  return from_disjoint(n, p, std::move(m));
}

int SchwartzFn::max_level() const { return cells_.empty() ? 0 : cells_.rbegin()->first.level; }
int SchwartzFn::min_level() const { return cells_.empty() ? 0 : cells_.begin()->first.level; }

int SchwartzFn::min_support_val() const {
  int m = kInfVal;
  for (const auto& [c, v] : cells_) m = std::min(m, std::min(val_p(c.center, p_), c.level));
  return m;
}

SchwartzFn indicator(const Cell& cell, long p, const CycNum& coeff) {
  SchwartzFn::CellMap m;
  m.emplace(make_cell(cell.center, cell.level, p), coeff);
  return SchwartzFn::from_disjoint(static_cast<int>(cell.center.size()), p, std::move(m));
}

SchwartzFn lattice_indicator(int n, long p, int level) {
  return indicator(Cell{RatVec(n, 0), level}, p);
}

std::vector<std::pair<Cell, CycNum>> refine_cells(const SchwartzFn& f, int m) {
  if (m < f.max_level()) throw Error(ErrorKind::LevelTooSmall, "refine level below the finest cell");
  std::vector<std::pair<Cell, CycNum>> out;
  for (const auto& [c, v] : f.cells()) {
    std::vector<Cell> leaves;
    descend(c, m, f.prime(), leaves);
    for (auto& l : leaves) out.emplace_back(std::move(l), v);
  }
  return out;
}

SchwartzFn refine(const SchwartzFn& f, int m) {
  // canonical form is the coarsest, so refine only changes the cell list view
  auto cells = refine_cells(f, m);
  SchwartzFn g(f.dim(), f.prime());
  SchwartzFn::CellMap mm(cells.begin(), cells.end());
  return SchwartzFn::from_disjoint(f.dim(), f.prime(), std::move(mm));
}

SchwartzFn add(const SchwartzFn& f, const SchwartzFn& g) {
  check_same_space(f, g);
  if (f.empty()) return g;
  if (g.empty()) return f;
  long p = f.prime();
  auto items = tagged(f, 0, 2);
  auto gi = tagged(g, 1, 2);
  items.insert(items.end(), gi.begin(), gi.end());
  SchwartzFn::CellMap m;
  for (auto& [c, v] : overlay(p, 2, items)) m.emplace(std::move(c), v[0] + v[1]);
  return SchwartzFn::from_disjoint(f.dim(), p, std::move(m));
}

SchwartzFn scale(const SchwartzFn& f, const CycNum& c) {
  SchwartzFn::CellMap m;
  if (!c.is_zero())
    for (const auto& [cell, v] : f.cells()) m.emplace(cell, v * c);
  return SchwartzFn::from_disjoint(f.dim(), f.prime(), std::move(m));
}

SchwartzFn sub(const SchwartzFn& f, const SchwartzFn& g) { return add(f, scale(g, CycNum(-1))); }

SchwartzFn pointwise_mul(const SchwartzFn& f, const SchwartzFn& g) {
  check_same_space(f, g);
  if (f.empty() || g.empty()) return SchwartzFn(f.dim(), f.prime());
  long p = f.prime();
  auto items = tagged(f, 0, 2);
  auto gi = tagged(g, 1, 2);
  items.insert(items.end(), gi.begin(), gi.end());
  SchwartzFn::CellMap m;
  for (auto& [c, v] : overlay(p, 2, items))
    if (!v[0].is_zero() && !v[1].is_zero()) m.emplace(std::move(c), v[0] * v[1]);
  return SchwartzFn::from_disjoint(f.dim(), p, std::move(m));
}

SchwartzFn abs2(const SchwartzFn& f) {
  SchwartzFn::CellMap m;
  for (const auto& [c, v] : f.cells()) m.emplace(c, v.abs2());
  return SchwartzFn::from_disjoint(f.dim(), f.prime(), std::move(m));
}

namespace {
Rational dot(const RatVec& a, const RatVec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}
}  // namespace

SchwartzFn phase_mul_linear(const SchwartzFn& f, const RatVec& u, const Form& S) {
  if (static_cast<int>(u.size()) != f.dim() || S.n() != f.dim())
    throw Error(ErrorKind::DimensionMismatch, "phase vector dimension");
  RatVec w = S.apply(u);
  int vw = val_p(w, f.prime());
  if (vw == kInfVal) return f;
  long p = f.prime();
  SchwartzFn::CellMap m;
  for (const auto& [c, v] : f.cells()) {
    std::vector<Cell> leaves;
    descend(c, std::max(c.level, -vw), p, leaves);
    for (auto& l : leaves) {
      CycNum ph = psi_char(dot(w, l.center), p);
      m.emplace(std::move(l), v * ph);
    }
  }
  return SchwartzFn::from_disjoint(f.dim(), p, std::move(m));
}

namespace {
void quad_descend(const Cell& c, const CycNum& v, const Rational& b, int vb, const Form& S,
                  SchwartzFn::CellMap& out) {
  long p = S.p;
  int vsc = val_p(S.apply(c.center), p);
  long lin = (vsc == kInfVal) ? 0 : static_cast<long>(vb) + c.level + vsc;
  if (static_cast<long>(vb) + 2L * c.level >= 0 && lin >= 0) {
    out.emplace(c, v * psi_char(b * S.q(c.center), p));
    return;
  }
  for (auto& ch : cell_children(c, p)) quad_descend(ch, v, b, vb, S, out);
}
}  // namespace

SchwartzFn phase_mul_quadratic(const SchwartzFn& f, const Rational& b, const Form& S) {
  if (S.n() != f.dim()) throw Error(ErrorKind::DimensionMismatch, "form dimension");
  if (b == 0) return f;
  int vb = val_p(b, f.prime());
  SchwartzFn::CellMap m;
  for (const auto& [c, v] : f.cells()) quad_descend(c, v, b, vb, S, m);
  return SchwartzFn::from_disjoint(f.dim(), f.prime(), std::move(m));
}

namespace {
// On c + p^k L the values of q lie in q(c) + p^e Z_p, e = min(k + val(Sc), 2k).
void qfun_descend(const Cell& c, const CycNum& v, int M, const QFunction& E, const Form& S,
                  SchwartzFn::CellMap& out) {
  long p = S.p;
  int vsc = val_p(S.apply(c.center), p);
  int e = (vsc == kInfVal) ? 2 * c.level : std::min(c.level + vsc, 2 * c.level);
  Rational q0 = S.q(c.center);
  if (e >= M) {
    out.emplace(c, v * E(q0));
    return;
  }
  if (M - e <= 3) {
    CycNum e0 = E(q0);
    Rational step = pow_p(p, e);
    long cnt = 1;
    for (int i = 0; i < M - e; ++i) cnt *= p;
    bool same = true;
    for (long s = 1; s < cnt && same; ++s) same = E(q0 + step * s) == e0;
    if (same) {
      out.emplace(c, v * e0);
      return;
    }
  }
  for (auto& ch : cell_children(c, p)) qfun_descend(ch, v, M, E, S, out);
}
}  // namespace

SchwartzFn multiply_q_function(const SchwartzFn& f, const Form& S, int M, const QFunction& E) {
  if (S.n() != f.dim()) throw Error(ErrorKind::DimensionMismatch, "form dimension");
  SchwartzFn::CellMap m;
  for (const auto& [c, v] : f.cells()) qfun_descend(c, v, M, E, S, m);
  return SchwartzFn::from_disjoint(f.dim(), f.prime(), std::move(m));
}

namespace {

// Cells in p^{-K}L addressed by integer vectors x with center x / p^K, x mod p^{K+level}.
struct IKey {
  int level;
  std::vector<std::int64_t> x;
  bool operator==(const IKey& o) const { return level == o.level && x == o.x; }
};
struct IKeyHash {
  std::size_t operator()(const IKey& k) const {
    std::size_t h = std::hash<int>()(k.level);
    for (auto v : k.x) h = h * 1000003u ^ std::hash<std::int64_t>()(v);
    return h;
  }
};

struct PhaseTerm {
  std::uint32_t src;
  std::uint64_t exp;  // numerator over p^{phase order of src}
};
using PhaseList = std::vector<PhaseTerm>;
using IMap = std::unordered_map<IKey, PhaseList, IKeyHash>;

struct IntGrid {
  long p;
  int K;
  std::vector<std::int64_t> pw;
  IKey ancestor(const IKey& k, int L) const {
    IKey a{L, k.x};
    for (auto& v : a.x) v %= pw[K + L];
    return a;
  }
  void resolve(const IKey& C, const PhaseList& v, const std::vector<const IMap::value_type*>& D,
               std::vector<std::pair<IKey, PhaseList>>& out) const {
    if (D.empty()) {
      out.emplace_back(C, v);
      return;
    }
    std::unordered_map<IKey, std::vector<const IMap::value_type*>, IKeyHash> groups;
    for (const auto* d : D) groups[ancestor(d->first, C.level + 1)].push_back(d);
    int n = static_cast<int>(C.x.size());
    std::int64_t step = pw[K + C.level];
    std::vector<int> dig(n, 0);
    while (true) {
      IKey ch{C.level + 1, C.x};
      for (int i = 0; i < n; ++i) ch.x[i] += dig[i] * step;
      auto it = groups.find(ch);
      if (it == groups.end()) {
        out.emplace_back(std::move(ch), v);
      } else {
        PhaseList vK = v;
        std::vector<const IMap::value_type*> rest;
        for (const auto* d : it->second) {
          if (d->first == ch)
            vK.insert(vK.end(), d->second.begin(), d->second.end());
          else
            rest.push_back(d);
        }
        resolve(ch, vK, rest, out);
      }
      int i = 0;
      while (i < n && ++dig[i] == p) dig[i++] = 0;
      if (i == n) break;
    }
  }
};

std::int64_t mod_rational(const Rational& r, std::int64_t mod) {
  Integer m(static_cast<long>(mod)), inv;
  Integer den = r.get_den();
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
  Integer v = (Integer(r.get_num()) * inv) % m;
  if (v < 0) v += m;
  return v.get_si();
}

}  // namespace

// Separable DFT on the uniform grid p^{-R}L / p^K L. Values are kept as integer
// numerators over a common denominator in the redundant basis {zeta_N^e}.
static std::optional<SchwartzFn> fourier_dense(const SchwartzFn& f, const Form& S, int sign, double percell_cost) {
  long p = f.prime();
  int n = f.dim();
  int K = f.max_level(), R = -f.min_support_val();
  int D = R + K;
  if (D < 0 || D * std::log2(static_cast<double>(p)) > 30) return std::nullopt;
  std::int64_t M = 1;
  for (int i = 0; i < D; ++i) M *= p;
  double Gd = std::pow(static_cast<double>(M), n);
  if (Gd > 2e7) return std::nullopt;
  std::size_t G = static_cast<std::size_t>(Gd);

  std::uint64_t N = static_cast<std::uint64_t>(M);
  Integer den = 1;
  bool sq = false;
  long sp = 0;
  std::vector<std::vector<CycNum::Term>> vals;
  for (const auto& [c, v] : f.cells()) {
    vals.push_back(v.terms());
    for (const auto& t : vals.back()) {
      N = std::lcm(N, t.order);
      den = lcm(den, Integer(t.coeff.get_den()));
      if (t.sqrtp) {
        sq = true;
        sp = v.sqrt_prime();
      }
    }
  }
  std::size_t planes = sq ? 2 : 1, W = N * planes;
  double dense_cost = Gd * static_cast<double>(W) * (n * static_cast<double>(M) + 2);
  if (Gd * W > 4e7 || dense_cost > 1000.0 * percell_cost) return std::nullopt;
  Integer bound = 0;
  for (const auto& ts : vals)
    for (const auto& t : ts) bound += abs(Integer(t.coeff * den));
  if (bound * Integer(static_cast<unsigned long>(G)) * 2 >= Integer(1) << 62) return std::nullopt;

  std::vector<std::int64_t> pw(D + 1, 1);
  for (int i = 1; i <= D; ++i) pw[i] = pw[i - 1] * p;
  std::vector<std::int64_t> A(G * W, 0);
  std::size_t ci = 0;
  for (const auto& [c, v] : f.cells()) {
    std::vector<std::int64_t> vv(W, 0);
    for (const auto& t : vals[ci++])
      vv[(t.sqrtp ? N : 0) + t.exp * (N / t.order)] += Integer(t.coeff * den).get_si();
    std::vector<std::int64_t> X0(n);
    for (int i = 0; i < n; ++i) X0[i] = mod_rational(c.center[i] * pow_p(p, R), M) % pw[R + c.level];
    std::int64_t step = pw[R + c.level], ny = pw[K - c.level];
    std::vector<std::int64_t> Y(n, 0);
    while (true) {
      std::size_t idx = 0;
      for (int i = n - 1; i >= 0; --i) idx = idx * M + static_cast<std::size_t>(X0[i] + step * Y[i]);
      std::copy(vv.begin(), vv.end(), A.begin() + idx * W);
      int i = 0;
      while (i < n && ++Y[i] == ny) Y[i++] = 0;
      if (i == n) break;
    }
  }

  std::uint64_t rot = N / static_cast<std::uint64_t>(M);
  std::vector<std::int64_t> line(M * W), res(M * W);
  std::size_t stride = 1;
  for (int ax = 0; ax < n; ++ax, stride *= M) {
    for (std::size_t base = 0; base < G; ++base) {
      if ((base / stride) % M != 0) continue;
      for (std::int64_t x = 0; x < M; ++x)
        std::copy_n(A.begin() + (base + x * stride) * W, W, line.begin() + x * W);
      std::fill(res.begin(), res.end(), 0);
      for (std::int64_t h = 0; h < M; ++h) {
        std::int64_t* out = res.data() + h * W;
        for (std::int64_t x = 0; x < M; ++x) {
          const std::int64_t* in = line.data() + x * W;
          std::int64_t e = (x * h) % M;
          if (sign < 0) e = (M - e) % M;
          std::uint64_t r = static_cast<std::uint64_t>(e) * rot;
          for (std::size_t pl = 0; pl < planes; ++pl)
            for (std::uint64_t j = 0; j < N; ++j) {
              std::uint64_t t = j + r;
              if (t >= N) t -= N;
              out[pl * N + t] += in[pl * N + j];
            }
        }
      }
      for (std::int64_t h = 0; h < M; ++h)
        std::copy_n(res.begin() + h * W, W, A.begin() + (base + h * stride) * W);
    }
  }

  std::vector<std::vector<std::int64_t>> Sm(n, std::vector<std::int64_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Sm[i][j] = ((S.gram[i][j] % M) + M) % M;
  Rational scale = pow_p(p, -K * n) / Rational(den);
  Rational scaleK = pow_p(p, -K);
  SchwartzFn::CellMap out;
  std::vector<std::int64_t> Xi(n, 0);
  std::vector<CycNum::Term> terms;
  while (true) {
    std::size_t idx = 0;
    for (int i = n - 1; i >= 0; --i) {
      __int128 h = 0;
      for (int j = 0; j < n; ++j) h += static_cast<__int128>(Sm[i][j]) * Xi[j];
      idx = idx * M + static_cast<std::size_t>(h % M);
    }
    terms.clear();
    const std::int64_t* a = A.data() + idx * W;
    for (std::size_t pl = 0; pl < planes; ++pl)
      for (std::uint64_t e = 0; e < N; ++e)
        if (a[pl * N + e]) terms.push_back({N, e, Rational(a[pl * N + e]) * scale, static_cast<int>(pl)});
    if (!terms.empty()) {
      CycNum val = CycNum::from_terms(terms, sp);
      if (!val.is_zero()) {
        RatVec center(n);
        for (int i = 0; i < n; ++i) center[i] = Rational(Xi[i]) * scaleK;
        out.emplace(make_cell(center, R, p), std::move(val));
      }
    }
    int i = 0;
    while (i < n && ++Xi[i] == M) Xi[i++] = 0;
    if (i == n) break;
  }
  return SchwartzFn::from_disjoint(n, p, std::move(out));
}

SchwartzFn fourier(const SchwartzFn& f, const Form& S, int sign) {
  if (S.n() != f.dim()) throw Error(ErrorKind::DimensionMismatch, "form dimension");
  if (!S.unimodular()) throw Error(ErrorKind::NotSelfDual, "Gram determinant is divisible by p");
  long p = f.prime();
  int n = f.dim();
  if (f.empty()) return SchwartzFn(n, p);
  struct Src {
    RatVec sc;
    int k, m, A;
    std::vector<CycNum::Term> base;
    long sp;
  };
  std::vector<Src> srcs;
  int K = f.max_level(), mstar = -K, Amax = 0;
  for (const auto& [c, v] : f.cells()) {
    Src s{S.apply(c.center), c.level, 0, 0, v.terms(), v.sqrt_prime()};
    if (sign < 0)
      for (auto& x : s.sc) x = -x;
    int vsc = val_p(s.sc, p);
    s.m = (vsc == kInfVal) ? -c.level : std::max(-c.level, -vsc);
    s.A = (vsc == kInfVal) ? 0 : std::max(0, -vsc);
    Rational vol = pow_p(p, -c.level * n);
    for (auto& t : s.base) t.coeff *= vol;
    mstar = std::max(mstar, s.m);
    Amax = std::max(Amax, s.A);
    srcs.push_back(std::move(s));
  }
  double percell = 0;
  for (const auto& sr : srcs) percell += std::pow(static_cast<double>(p), n * (sr.k + sr.m)) * (1 + sr.base.size());
  if (auto d = fourier_dense(f, S, sign, percell)) return *d;
  int digits = std::max(K + mstar, Amax + K);
  if (digits * std::log2(static_cast<double>(p)) > 60)
    throw Error(ErrorKind::InvalidArgument, "Fourier transform exceeds integer grid precision");
  IntGrid G{p, K, {}};
  G.pw.assign(digits + 2, 1);
  for (std::size_t i = 1; i < G.pw.size(); ++i) G.pw[i] = G.pw[i - 1] * p;

  IMap pieces;
  for (std::uint32_t si = 0; si < srcs.size(); ++si) {
    const Src& s = srcs[si];
    std::int64_t pmod = G.pw[s.A + K];
    std::vector<std::int64_t> W(n);
    for (int i = 0; i < n; ++i) W[i] = mod_rational(s.sc[i] * pow_p(p, s.A), pmod);
    // X = p^{K-k} Y, Y in (Z/p^{k+m})^n
    std::int64_t stepX = G.pw[K - s.k], ny = G.pw[s.k + s.m];
    std::vector<std::int64_t> Y(n, 0), dW(n);
    for (int i = 0; i < n; ++i) dW[i] = static_cast<std::int64_t>(static_cast<__int128>(W[i]) * stepX % pmod);
    std::int64_t e = 0;
    while (true) {
      IKey key{s.m, std::vector<std::int64_t>(n)};
      for (int i = 0; i < n; ++i) key.x[i] = Y[i] * stepX;
      pieces[std::move(key)].push_back({si, static_cast<std::uint64_t>(e)});
      int i = 0;
      while (i < n) {
        e = (e + dW[i]) % pmod;
        if (++Y[i] < ny) break;
        e = static_cast<std::int64_t>(((e - static_cast<__int128>(dW[i]) * ny) % pmod + pmod) % pmod);
        Y[i++] = 0;
      }
      if (i == n) break;
    }
  }

  std::set<int> levels;
  for (const auto& [k, v] : pieces) levels.insert(k.level);
  std::unordered_map<IKey, std::vector<const IMap::value_type*>, IKeyHash> desc;
  std::vector<const IMap::value_type*> roots;
  for (const auto& e : pieces) {
    bool found = false;
    for (int L : levels) {
      if (L >= e.first.level) break;
      IKey a = G.ancestor(e.first, L);
      if (pieces.count(a)) {
        desc[a].push_back(&e);
        found = true;
        break;
      }
    }
    if (!found) roots.push_back(&e);
  }
  std::vector<std::pair<IKey, PhaseList>> out;
  for (const auto* r : roots) {
    auto it = desc.find(r->first);
    if (it == desc.end())
      out.emplace_back(r->first, r->second);
    else
      G.resolve(r->first, r->second, it->second, out);
  }

  SchwartzFn::CellMap m;
  Rational scaleK = pow_p(p, -K);
  std::vector<CycNum::Term> terms;
  for (auto& [key, pl] : out) {
    terms.clear();
    long sp = 0;
    for (const auto& pt : pl) {
      const Src& s = srcs[pt.src];
      std::uint64_t ord = static_cast<std::uint64_t>(G.pw[s.A + K]);
      for (const auto& t : s.base) {
        if (t.sqrtp) sp = s.sp;
        std::uint64_t L = std::lcm(t.order, ord);
        terms.push_back({L, (t.exp * (L / t.order) + pt.exp * (L / ord)) % L, t.coeff, t.sqrtp});
      }
    }
    CycNum val = CycNum::from_terms(terms, sp);
    if (val.is_zero()) continue;
    RatVec center(n);
    for (int i = 0; i < n; ++i) center[i] = Rational(key.x[i]) * scaleK;
    m.emplace(make_cell(center, key.level, p), std::move(val));
  }
  return SchwartzFn::from_disjoint(n, p, std::move(m));
}

CycNum fourier_at(const SchwartzFn& f, const RatVec& xi, const Form& S, int sign) {
  long p = f.prime();
  int n = f.dim();
  int vx = val_p(xi, p);
  RatVec sx = S.apply(xi);
  CycNum acc;
  for (const auto& [c, v] : f.cells()) {
    if (vx != kInfVal && vx < -c.level) continue;
    Rational x = dot(sx, c.center);
    acc += v * CycNum(pow_p(p, -c.level * n)) * psi_char(sign > 0 ? x : Rational(-x), p);
  }
  return acc;
}

CycNum evaluate(const SchwartzFn& f, const RatVec& v) {
  if (static_cast<int>(v.size()) != f.dim()) throw Error(ErrorKind::DimensionMismatch, "point dimension");
  std::set<int> levels;
  for (const auto& [c, x] : f.cells()) levels.insert(c.level);
  for (int L : levels) {
    auto it = f.cells().find(make_cell(v, L, f.prime()));
    if (it != f.cells().end()) return it->second;
  }
  return CycNum();
}

CycNum integrate(const SchwartzFn& f) {
  CycNum acc;
  for (const auto& [c, v] : f.cells()) acc += v.scaled(pow_p(f.prime(), -c.level * f.dim()));
  return acc;
}

bool equals_ae(const SchwartzFn& f, const SchwartzFn& g) { return sub(f, g).empty(); }

SchwartzFn translate(const SchwartzFn& f, const RatVec& t) {
  SchwartzFn::CellMap m;
  for (const auto& [c, v] : f.cells()) {
    RatVec x = c.center;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += t[i];
    m.emplace(make_cell(x, c.level, f.prime()), v);
  }
  return SchwartzFn::from_disjoint(f.dim(), f.prime(), std::move(m));
}

SchwartzFn scale_argument(const SchwartzFn& f, const Rational& a) {
  if (a == 0) throw Error(ErrorKind::InvalidArgument, "scale by zero");
  int va = val_p(a, f.prime());
  SchwartzFn::CellMap m;
  for (const auto& [c, v] : f.cells()) {
    RatVec x = c.center;
    for (auto& xi : x) xi /= a;
    m.emplace(make_cell(x, c.level - va, f.prime()), v);
  }
  return SchwartzFn::from_disjoint(f.dim(), f.prime(), std::move(m));
}

SchwartzFn transform_linear(const SchwartzFn& f, const RatMat& h) {
  long p = f.prime();
  for (const auto& row : h)
    for (const auto& x : row)
      if (x != 0 && val_p(x, p) < 0) throw Error(ErrorKind::InvalidArgument, "matrix not p-integral");
  SchwartzFn::CellMap m;
  for (const auto& [c, v] : f.cells()) {
    RatVec x(c.center.size(), 0);
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < x.size(); ++j) x[i] += h[i][j] * c.center[j];
    m.emplace(make_cell(x, c.level, p), v);
  }
  return SchwartzFn::from_disjoint(f.dim(), p, std::move(m));
}

bool pieces_disjoint(const std::vector<Cell>& cells, long p) {
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (i == j) continue;
      if (cell_contains(cells[i], cells[j], p)) return false;
    }
  return true;
}

}  // namespace ttl
