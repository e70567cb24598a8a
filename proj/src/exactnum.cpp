#include "ttl/exactnum.hpp"

#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "ttl/error.hpp"

namespace ttl {
namespace {

struct Factor {
  std::uint64_t ell, n, phi, M, inv;
  int k;
};

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, nt = 1, r = static_cast<std::int64_t>(m), nr = static_cast<std::int64_t>(a % m);
  while (nr) {
    std::int64_t q = r / nr;
    std::int64_t tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (t < 0) t += static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(t) % m;
}

using Expansion = std::vector<std::pair<std::uint64_t, int>>;

// Power basis data for Q(zeta_N): tensor product over prime powers.
struct Basis {
  std::uint64_t N;
  std::vector<Factor> f;
  std::vector<Expansion> cache;
  std::vector<char> cached;

  explicit Basis(std::uint64_t n) : N(n) {
    std::uint64_t m = n;
    for (std::uint64_t ell = 2; ell * ell <= m || m > 1; ++ell) {
      if (ell * ell > m) ell = m;
      if (m % ell) continue;
      Factor fa{ell, 1, 0, 0, 0, 0};
      int k = 0;
      while (m % ell == 0) {
        m /= ell;
        fa.n *= ell;
        ++k;
      }
      fa.k = k;
      fa.phi = fa.n / ell * (ell - 1);
      fa.M = n / fa.n;
      fa.inv = inv_mod(fa.M % fa.n, fa.n);
      f.push_back(fa);
    }
    if (N <= (1u << 20)) {
      cache.resize(N);
      cached.assign(N, 0);
    }
  }

  Expansion compute(std::uint64_t a) const {
    Expansion acc{{0, 1}};
    for (const auto& fa : f) {
      std::uint64_t b = static_cast<std::uint64_t>(
          static_cast<unsigned __int128>(a % fa.n) * fa.inv % fa.n);
      Expansion part;
      if (b < fa.phi) {
        part.push_back({b, 1});
      } else {
        std::uint64_t r = b - fa.phi, step = fa.n / fa.ell;
        for (std::uint64_t j = 0; j + 1 < fa.ell; ++j) part.push_back({r + j * step, -1});
      }
      Expansion next;
      next.reserve(acc.size() * part.size());
      for (auto [e0, s0] : acc)
        for (auto [e1, s1] : part) next.push_back({(e0 + e1 * fa.M) % N, s0 * s1});
      acc.swap(next);
    }
    return acc;
  }

  const Expansion& expand(std::uint64_t a) {
    a %= N;
    if (!cache.empty()) {
      if (!cached[a]) {
        cache[a] = compute(a);
        cached[a] = 1;
      }
      return cache[a];
    }
    thread_local Expansion tmp;
    tmp = compute(a);
    return tmp;
  }

  // component of a canonical exponent in the factor with prime ell
  std::uint64_t component(std::uint64_t a, const Factor& fa) const {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a % fa.n) * fa.inv % fa.n);
  }
};

Basis& basis(std::uint64_t N) {
  thread_local std::unordered_map<std::uint64_t, std::unique_ptr<Basis>> table;
  auto it = table.find(N);
  if (it == table.end()) it = table.emplace(N, std::make_unique<Basis>(N)).first;
  return *it->second;
}

std::uint64_t lcm64(std::uint64_t a, std::uint64_t b) { return a / std::gcd(a, b) * b; }

void add_into(std::map<std::uint64_t, Rational>& m, std::uint64_t k, const Rational& v) {
  auto [it, ins] = m.emplace(k, v);
  if (!ins) {
    it->second += v;
    if (it->second == 0) m.erase(it);
  }
}

}  // namespace

CycNum::CycNum(const Rational& r) {
  if (r == 0) return;
  Rational c = r;
  c.canonicalize();
  c_[0][0] = c;
}

long CycNum::merge_prime(long a, long b) {
  if (a == 0) return b;
  if (b == 0 || a == b) return a;
  throw Error(ErrorKind::InvalidArgument, "mixing formal square roots of different primes");
}

CycNum CycNum::zeta(std::uint64_t N, std::int64_t a) {
  if (N == 0) throw Error(ErrorKind::InvalidArgument, "zeta order must be positive");
  std::int64_t r = a % static_cast<std::int64_t>(N);
  if (r < 0) r += static_cast<std::int64_t>(N);
  CycNum x;
  x.N_ = N;
  for (auto [e, s] : basis(N).expand(static_cast<std::uint64_t>(r))) add_into(x.c_[0], e, Rational(s));
  x.reduce_order();
  return x;
}

CycNum CycNum::sqrt_p(long p, const Rational& coeff) {
  CycNum x;
  x.p_ = p;
  if (coeff != 0) x.c_[1][0] = coeff;
  return x;
}

CycNum CycNum::from_terms(const std::vector<Term>& terms, long p) {
  std::uint64_t L = 1;
  for (const auto& t : terms) {
    if (t.order == 0) throw Error(ErrorKind::InvalidArgument, "zero root order");
    L = lcm64(L, t.order);
  }
  CycNum x;
  x.N_ = L;
  x.p_ = p;
  Basis& B = basis(L);
  for (const auto& t : terms) {
    if (t.sqrtp != 0 && t.sqrtp != 1) throw Error(ErrorKind::InvalidArgument, "sqrtp degree must be 0 or 1");
    if (t.sqrtp == 1 && p == 0) throw Error(ErrorKind::InvalidArgument, "sqrt term without prime");
    std::uint64_t e = (t.exp % t.order) * (L / t.order);
    for (auto [b, s] : B.expand(e)) add_into(x.c_[t.sqrtp], b, t.coeff * s);
  }
  x.reduce_order();
  return x;
}

std::vector<CycNum::Term> CycNum::terms() const {
  std::vector<Term> out;
  for (int d = 0; d < 2; ++d)
    for (const auto& [e, c] : c_[d]) out.push_back({N_, e, c, d});
  return out;
}

bool CycNum::is_rational() const {
  return c_[1].empty() && (c_[0].empty() || (N_ == 1 && c_[0].size() == 1));
}

Rational CycNum::rational_value() const {
  if (!is_rational()) throw Error(ErrorKind::InvalidArgument, "CycNum is not rational: " + str());
  return c_[0].empty() ? Rational(0) : c_[0].begin()->second;
}

void CycNum::lift_to(std::uint64_t L) {
  if (L == N_) return;
  std::uint64_t f = L / N_;
  for (auto& c : c_) {
    Comp n;
    for (auto& [e, v] : c) n.emplace_hint(n.end(), e * f, v);
    c.swap(n);
  }
  N_ = L;
}

void CycNum::reduce_order() {
  if (c_[0].empty() && c_[1].empty()) {
    N_ = 1;
    return;
  }
  bool changed = true;
  while (changed && N_ > 1) {
    changed = false;
    Basis& B = basis(N_);
    for (const auto& fa : B.f) {
      bool ok = true;
      for (const auto& c : c_) {
        for (const auto& [e, v] : c) {
          std::uint64_t b = B.component(e, fa);
          if ((fa.k >= 2 && b % fa.ell != 0) || (fa.k == 1 && b != 0)) {
            ok = false;
            break;
          }
        }
        if (!ok) break;
      }
      if (ok) {
        for (auto& c : c_) {
          Comp n;
          for (auto& [e, v] : c) n.emplace(e / fa.ell, v);
          c.swap(n);
        }
        N_ /= fa.ell;
        changed = true;
        break;
      }
    }
  }
}

CycNum CycNum::operator+(const CycNum& o) const {
  if (o.is_zero()) {
    CycNum r = *this;
    r.p_ = merge_prime(p_, o.p_);
    return r;
  }
  if (is_zero()) {
    CycNum r = o;
    r.p_ = merge_prime(p_, o.p_);
    return r;
  }
  std::uint64_t L = lcm64(N_, o.N_);
  CycNum a = *this, b = o;
  a.lift_to(L);
  b.lift_to(L);
  a.p_ = merge_prime(p_, o.p_);
  for (int d = 0; d < 2; ++d)
    for (const auto& [e, v] : b.c_[d]) add_into(a.c_[d], e, v);
  a.reduce_order();
  return a;
}

CycNum CycNum::operator-() const {
  CycNum r = *this;
  for (auto& c : r.c_)
    for (auto& [e, v] : c) v = -v;
  return r;
}

CycNum CycNum::operator-(const CycNum& o) const { return *this + (-o); }

CycNum CycNum::scaled(const Rational& r) const {
  if (r == 0) {
    CycNum z;
    z.p_ = p_;
    return z;
  }
  CycNum x = *this;
  for (auto& c : x.c_)
    for (auto& [e, v] : c) v *= r;
  return x;
}

CycNum CycNum::operator*(const CycNum& o) const {
  long p = merge_prime(p_, o.p_);
  if (o.is_rational()) {
    CycNum r = scaled(o.rational_value());
    r.p_ = p;
    return r;
  }
  if (is_rational()) {
    CycNum r = o.scaled(rational_value());
    r.p_ = p;
    return r;
  }
  std::uint64_t L = lcm64(N_, o.N_);
  CycNum a = *this, b = o;
  a.lift_to(L);
  b.lift_to(L);
  CycNum r;
  r.N_ = L;
  r.p_ = p;
  Basis& B = basis(L);
  std::vector<Rational> acc[2];
  acc[0].assign(L, 0);
  acc[1].assign(L, 0);
  for (int da = 0; da < 2; ++da)
    for (int db = 0; db < 2; ++db) {
      if (a.c_[da].empty() || b.c_[db].empty()) continue;
      int d = (da + db) % 2;
      Rational f = (da + db == 2) ? Rational(p) : Rational(1);
      for (const auto& [ea, va] : a.c_[da])
        for (const auto& [eb, vb] : b.c_[db]) {
          Rational prod = va * vb * f;
          for (auto [e, s] : B.expand((ea + eb) % L)) {
            if (s > 0)
              acc[d][e] += prod;
            else
              acc[d][e] -= prod;
          }
        }
    }
  for (int d = 0; d < 2; ++d)
    for (std::uint64_t e = 0; e < L; ++e)
      if (acc[d][e] != 0) r.c_[d].emplace_hint(r.c_[d].end(), e, acc[d][e]);
  r.reduce_order();
  return r;
}

CycNum CycNum::galois(std::int64_t k) const {
  std::int64_t kk = k % static_cast<std::int64_t>(N_);
  if (kk < 0) kk += static_cast<std::int64_t>(N_);
  CycNum r;
  r.N_ = N_;
  r.p_ = p_;
  Basis& B = basis(N_);
  for (int d = 0; d < 2; ++d)
    for (const auto& [e, v] : c_[d]) {
      std::uint64_t ne = static_cast<std::uint64_t>(static_cast<unsigned __int128>(e) * kk % N_);
      for (auto [b, s] : B.expand(ne)) add_into(r.c_[d], b, v * s);
    }
  r.reduce_order();
  return r;
}

CycNum CycNum::conj() const { return galois(-1); }

namespace {
CycNum inverse_cyclotomic(const CycNum& x) {
  if (x.is_zero()) throw Error(ErrorKind::InvalidArgument, "division by zero CycNum");
  if (x.is_rational()) return CycNum(Rational(1) / x.rational_value());
  std::uint64_t N = x.order();
  CycNum y(1);
  for (std::uint64_t k = 2; k < N; ++k)
    if (std::gcd(k, N) == 1) y = y * x.galois(static_cast<std::int64_t>(k));
  CycNum n = x * y;
  return y.scaled(Rational(1) / n.rational_value());
}
}  // namespace

CycNum CycNum::inverse() const {
  if (c_[1].empty()) {
    CycNum r = inverse_cyclotomic(*this);
    return r + CycNum::sqrt_p(p_, 0);
  }
  CycNum c0, c1;
  c0.N_ = c1.N_ = N_;
  c0.c_[0] = c_[0];
  c1.c_[0] = c_[1];
  c0.reduce_order();
  c1.reduce_order();
  CycNum D = c0 * c0 - (c1 * c1).scaled(Rational(p_));
  CycNum conj_part = c0 - c1 * CycNum::sqrt_p(p_);
  return conj_part * inverse_cyclotomic(D);
}

bool CycNum::operator==(const CycNum& o) const {
  if (N_ != o.N_) return false;
  if (c_[0] != o.c_[0] || c_[1] != o.c_[1]) return false;
  if (!c_[1].empty() && p_ != o.p_) return false;
  return true;
}

std::complex<long double> CycNum::to_complex() const {
  const long double two_pi = 2.0L * std::acos(-1.0L);
  std::complex<long double> s0 = 0, s1 = 0;
  for (int d = 0; d < 2; ++d)
    for (const auto& [e, v] : c_[d]) {
      long double ang = two_pi * static_cast<long double>(e) / static_cast<long double>(N_);
      mpf_class vf(v, 128);
      long double c = static_cast<long double>(vf.get_d());
      // extra precision for the coefficient
      mpf_class rem = vf - mpf_class(static_cast<double>(c), 128);
      c += static_cast<long double>(rem.get_d());
      std::complex<long double> t(c * std::cos(ang), c * std::sin(ang));
      (d == 0 ? s0 : s1) += t;
    }
  if (p_ != 0) s0 += s1 * std::sqrt(static_cast<long double>(p_));
  return s0;
}

std::complex<double> CycNum::to_float(int precision_bits) const {
  if (precision_bits < 24 || precision_bits > 64)
    throw Error(ErrorKind::InvalidArgument, "precision_bits must be in [24, 64]");
  auto z = to_complex();
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

std::string CycNum::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int d = 0; d < 2; ++d)
    for (const auto& [e, v] : c_[d]) {
      if (!first) os << " + ";
      first = false;
      os << ttl::to_string(v);
      if (N_ > 1 && e != 0) os << "*z" << N_ << "^" << e;
      if (d == 1) os << "*sqrt(" << p_ << ")";
    }
  return os.str();
}

std::string to_string(const CycNum& x) { return x.str(); }

PhaseAccumulator::PhaseAccumulator(long p, int e) : p_(p), e_(e) {
  mod_ = 1;
  for (int i = 0; i < e; ++i) mod_ *= p;
  counts_.assign(static_cast<std::size_t>(mod_), 0);
}

void PhaseAccumulator::add(std::int64_t exponent, std::int64_t count) {
  std::int64_t r = exponent % mod_;
  if (r < 0) r += mod_;
  counts_[static_cast<std::size_t>(r)] += count;
}

bool PhaseAccumulator::empty() const {
  for (const auto& c : counts_)
    if (c != 0) return false;
  return true;
}

CycNum PhaseAccumulator::value() const {
  std::vector<CycNum::Term> t;
  for (std::int64_t a = 0; a < mod_; ++a)
    if (counts_[static_cast<std::size_t>(a)] != 0)
      t.push_back({static_cast<std::uint64_t>(mod_), static_cast<std::uint64_t>(a),
                   Rational(counts_[static_cast<std::size_t>(a)]), 0});
  return CycNum::from_terms(t);
}

}  // namespace ttl
