#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "ttl/exactnum.hpp"
#include "ttl/rational.hpp"

namespace ttl {

// Integral symmetric bilinear form <u,v> = u^T S v, q(v) = <v,v>/2.
struct Form {
  long p = 0;
  std::vector<std::vector<long>> gram;

  Form() = default;
  Form(std::vector<std::vector<long>> g, long p_);
  int n() const { return static_cast<int>(gram.size()); }
  RatVec apply(const RatVec& v) const;  // S v
  Rational pair(const RatVec& u, const RatVec& v) const;
  Rational q(const RatVec& v) const { return pair(v, v) / 2; }
  Integer det() const;
  bool unimodular() const;
};

// Coset center + p^level Z_p^n with canonical center.
struct Cell {
  RatVec center;
  int level = 0;

  bool operator<(const Cell& o) const;
  bool operator==(const Cell& o) const { return level == o.level && center == o.center; }
};

// Unique representative of x mod p^k Z_p of the form r/p^e, 0 <= r < p^{k+e}.
Rational canonical_coord(const Rational& x, int k, long p);
Cell make_cell(const RatVec& center, int level, long p);
bool cell_contains(const Cell& big, const Cell& small, long p);
bool cell_contains_point(const Cell& c, const RatVec& v, long p);
std::vector<Cell> cell_children(const Cell& c, long p);
Cell cell_parent(const Cell& c, long p);

class SchwartzFn {
 public:
  using CellMap = std::map<Cell, CycNum>;

  SchwartzFn() = default;
  SchwartzFn(int n, long p) : n_(n), p_(p) {}

  // Sums the given (possibly overlapping) pieces and canonicalizes.
  static SchwartzFn from_pieces(int n, long p, const std::vector<std::pair<Cell, CycNum>>& pieces);
  // Adopts a map of pairwise-disjoint cells, then canonicalizes.
  static SchwartzFn from_disjoint(int n, long p, CellMap cells);

  int dim() const { return n_; }
  long prime() const { return p_; }
  const CellMap& cells() const { return cells_; }
  bool empty() const { return cells_.empty(); }
  std::size_t size() const { return cells_.size(); }
  int max_level() const;
  int min_level() const;
  // smallest valuation of any point in the support (as a lower bound)
  int min_support_val() const;

  bool operator==(const SchwartzFn& o) const { return n_ == o.n_ && p_ == o.p_ && cells_ == o.cells_; }

 private:
  int n_ = 0;
  long p_ = 0;
  CellMap cells_;

  void canonicalize();
};

SchwartzFn indicator(const Cell& cell, long p, const CycNum& coeff = CycNum(1));
SchwartzFn lattice_indicator(int n, long p, int level = 0);
SchwartzFn refine(const SchwartzFn& f, int m);  // result is not coalesced
std::vector<std::pair<Cell, CycNum>> refine_cells(const SchwartzFn& f, int m);

SchwartzFn add(const SchwartzFn& f, const SchwartzFn& g);
SchwartzFn sub(const SchwartzFn& f, const SchwartzFn& g);
SchwartzFn scale(const SchwartzFn& f, const CycNum& c);
SchwartzFn pointwise_mul(const SchwartzFn& f, const SchwartzFn& g);
SchwartzFn abs2(const SchwartzFn& f);

SchwartzFn phase_mul_linear(const SchwartzFn& f, const RatVec& u, const Form& S);
SchwartzFn phase_mul_quadratic(const SchwartzFn& f, const Rational& b, const Form& S);
// f(v) * E(q(v)) where E(t) depends only on t mod p^M Z_p
using QFunction = std::function<CycNum(const Rational&)>;
SchwartzFn multiply_q_function(const SchwartzFn& f, const Form& S, int M, const QFunction& E);
// kernel psi(sign * <xi, y>)
SchwartzFn fourier(const SchwartzFn& f, const Form& S, int sign = 1);
CycNum fourier_at(const SchwartzFn& f, const RatVec& xi, const Form& S, int sign = 1);

CycNum evaluate(const SchwartzFn& f, const RatVec& v);
CycNum integrate(const SchwartzFn& f);
bool equals_ae(const SchwartzFn& f, const SchwartzFn& g);

// x -> f(x - t)
SchwartzFn translate(const SchwartzFn& f, const RatVec& t);
// x -> f(a x)
SchwartzFn scale_argument(const SchwartzFn& f, const Rational& a);
// x -> f(h^{-1} x) for h in GL_n(Z_(p))
SchwartzFn transform_linear(const SchwartzFn& f, const RatMat& h);

// Cells pairwise disjoint (always true for canonical values; used on raw input).
bool pieces_disjoint(const std::vector<Cell>& cells, long p);

}  // namespace ttl
