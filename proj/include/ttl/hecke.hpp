#pragma once

#include <vector>

#include "ttl/quadspace.hpp"
#include "ttl/schwartz.hpp"
#include "ttl/weil.hpp"

namespace ttl {

// gK = [[p^j, beta], [0, p^-j]] K with beta reduced mod p^j Z_p
struct IwasawaKey {
  int j = 0;
  Rational beta = 0;
  bool operator<(const IwasawaKey& o) const { return j != o.j ? j < o.j : beta < o.beta; }
  bool operator==(const IwasawaKey& o) const { return j == o.j && beta == o.beta; }
};

IwasawaKey iwasawa_key(const SL2Elt& g, long p);
SL2Elt iwasawa_rep(const IwasawaKey& k, long p);
bool in_k(const SL2Elt& g, long p);

struct HeckeCosets {
  std::vector<SL2Elt> reps;
  long scanned = 0;         // elements of SL2(Z/p^2) visited
  bool inequivalent = false;
  bool count_ok = false;    // p^2 + p
};

// Left cosets of K t(p) K / K by brute force over SL2(Z/p^2).
HeckeCosets enumerate_hecke_cosets(long p);

std::vector<SL2Elt> k_generators(long p);
bool is_k_invariant(const SchwartzFn& f, const QuadSpace& Q);

struct HeckeResult {
  SchwartzFn value;
  HeckeCosets cosets;
  bool k_invariant = false;  // checked only when the input is K-invariant
  bool input_k_invariant = false;
};

// Sum of g_i . Phi over the coset representatives; throws CosetEnumerationFailure on a failed certificate.
HeckeResult hecke_translate(const SchwartzFn& phi, const QuadSpace& Q, bool check_invariance = true);

}  // namespace ttl
