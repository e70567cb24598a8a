#pragma once

#include <complex>
#include <optional>
#include <string>

#include "ttl/exactnum.hpp"
#include "ttl/quadspace.hpp"

namespace ttl {

// Exact value when the inputs allow it (root-of-unity alpha, s in (1/2)Z), float always.
struct LFactorValue {
  std::optional<CycNum> exact;
  std::complex<double> approx;
  std::string description;

  LFactorValue operator*(const LFactorValue& o) const;
  LFactorValue operator/(const LFactorValue& o) const;
};

struct SatakeData {
  long p = 3;
  std::optional<CycNum> alpha_exact;  // root of unity
  std::complex<double> alpha{1, 0};

  static SatakeData exact(long p, const CycNum& alpha);
  static SatakeData numeric(long p, std::complex<double> alpha);
};

// Degree of the metaplectic standard factor in the Satake parameter: 2 ({alpha, 1/alpha}) or 3 (SL2 shape).
enum class MetaplecticConvention { Shimura, SameShape };

LFactorValue zeta_factor(long p, const Rational& s);
// (1 - chi(p) p^{-s})^{-1}; chi = 0 for a ramified character
LFactorValue dirichlet_lfactor(long p, int chi, const Rational& s);
// [(1 - chi a^2 X)(1 - chi X)(1 - chi a^-2 X)]^{-1}, X = p^{-s}
LFactorValue std_lfactor(const SatakeData& sigma, const Rational& s, int chi = 1);
LFactorValue adjoint_lfactor(const SatakeData& sigma, const Rational& s);
LFactorValue mp_std_lfactor(const SatakeData& sigma, const Rational& s, int chi,
                            MetaplecticConvention conv = MetaplecticConvention::Shimura);
LFactorValue mp_adjoint_lfactor(const SatakeData& sigma, const Rational& s);

// chi_disc(p) entering L_X^#: disc V for even dim, disc of v1-perp for odd dim
int lx_twist(const QuadSpace& Q);
LFactorValue lx_sharp(const QuadSpace& Q, const SatakeData& sigma,
                      MetaplecticConvention conv = MetaplecticConvention::Shimura);

enum class OrthKind { Odd, EvenPlus, EvenMinus };
Integer orth_group_order(OrthKind kind, int m, const Integer& q);
// Vol(X(O)) = q^{-(n-1)} |O(V)(F_q)| / |O(v1-perp)(F_q)|
Rational x_volume_from_groups(const QuadSpace& Q);

struct AssemblyResult {
  LFactorValue lhs, rhs;
  double residual = 0;
  std::optional<bool> exact_equal;
  bool pass = false;
};
AssemblyResult assembly_check(const QuadSpace& Q, const SatakeData& sigma,
                              MetaplecticConvention conv = MetaplecticConvention::Shimura, double tol = 1e-12);

}  // namespace ttl
