#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ttl/exactnum.hpp"
#include "ttl/schwartz.hpp"

namespace ttl {

// Bilinear: (-1)^{n(n-1)/2} det(S).  QuadraticGram: same with the Gram matrix of q, i.e. S/2.
enum class DiscConvention { Bilinear, QuadraticGram };

struct QuadSpace {
  Form form;
  RatVec v1;
  Rational disc;  // p^{0|1} * u with u = 1 or the least non-residue
  DiscConvention convention = DiscConvention::Bilinear;
  std::string witt_hint;

  int n() const { return form.n(); }
  long p() const { return form.p; }
  Rational q(const RatVec& v) const { return form.q(v); }
  Rational pair(const RatVec& u, const RatVec& v) const { return form.pair(u, v); }
};

QuadSpace make_quadspace(const std::vector<std::vector<long>>& gram, const std::vector<long>& v1, long p,
                         DiscConvention conv = DiscConvention::Bilinear);

// Hyperbolic planes plus diagonal entries 2*d_i (q = x1x2 + ... + sum d_i y_i^2), v1 = (1,1,0,...).
QuadSpace split_plus_diagonal(int hyperbolic_planes, const std::vector<long>& diag, long p);

int disc_char(const QuadSpace& Q, const Rational& a);

long point_count_residue(const QuadSpace& Q, const Rational& a);

struct Constraint {
  enum class Poly { Q, V1 } poly;  // q(x) or <v1, x>
  Rational target;
};

struct ResidueCount {
  Integer count;
  int level;  // residue classes counted at x-level `level` (m, or m + scaling for fractional cells)
};

ResidueCount count_solutions_mod(const QuadSpace& Q, const std::vector<Constraint>& constraints, int m,
                                 const Cell& cell);

enum class Meets { Yes, No, Undetermined };
struct MeetsVerdict {
  Meets verdict;
  int level;
};
MeetsVerdict meets_fiber(const QuadSpace& Q, const Cell& cell, const Rational& a, int cap = 12);

struct DensityResult {
  CycNum value;
  int stabilized_at = 0;
  bool certified = false;
};

DensityResult fiber_volume(const QuadSpace& Q, const SchwartzFn& f, const Rational& a, int m_max = 12);
// xi is the v1-coordinate: <v1, x> = 2 xi, singular at xi^2 = a.
DensityResult joint_fiber_volume(const QuadSpace& Q, const SchwartzFn& f, const Rational& a,
                                 const Rational& xi, int m_max = 12);

// --- engine ---
struct FiberQuery {
  enum class Mode { Exact, Truncated, Joint, Meets };
  Mode mode = Mode::Exact;
  Rational a = 1;
  std::optional<RatVec> phase_u;  // integrand carries psi(<u, x>)
  int trunc_level = 0;            // Truncated: p^r * measure of q^{-1}(a + p^r Z_p)
  Rational xi = 0;                // Joint
};

struct FiberOutcome {
  CycNum value;
  bool stable = true;  // Truncated: unchanged for every larger r
  bool hit_cap = false;
  bool found = false;  // Meets
  int max_level = 0;   // deepest x-level visited
  int kappa = 0;       // Joint: value constant on xi + p^kappa Z_p
};

FiberOutcome fiber_integrate(const QuadSpace& Q, const SchwartzFn& f, const FiberQuery& query);

}  // namespace ttl
