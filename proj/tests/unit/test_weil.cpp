#include <doctest.h>

#include <functional>

#include "test_util.hpp"
#include "ttl/error.hpp"
#include "ttl/job.hpp"
#include "ttl/padic.hpp"
#include "ttl/weil.hpp"

using namespace ttl;

namespace {

QuadSpace split4() { return split_plus_diagonal(2, {}, 3); }
QuadSpace nonsplit4() { return split_plus_diagonal(1, {1, -2}, 3); }

// g_k = p^{-kn} sum over x in p^{-k}L / p^k L of psi(q(x)); q(x / p^k) = q(x) / p^{2k}
CycNum gauss_oracle(const QuadSpace& Q, int k) {
  long p = Q.p();
  int n = Q.n();
  long range = 1;
  for (int i = 0; i < 2 * k; ++i) range *= p;
  std::vector<long> counts(range, 0);
  std::vector<long> x(n, 0);
  while (true) {
    long s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += Q.form.gram[i][j] * x[i] * x[j];
    ++counts[((s / 2) % range + range) % range];
    int i = 0;
    while (i < n && ++x[i] == range) x[i++] = 0;
    if (i == n) break;
  }
  CycNum acc;
  for (long r = 0; r < range; ++r)
    if (counts[r]) acc += CycNum::zeta(range, r) * CycNum(counts[r]);
  return acc * CycNum(pow_p(p, -k * n));
}

SchwartzFn test_phi() {
  return SchwartzFn::from_pieces(4, 3, {{make_cell({1, 0, 2, 0}, 0, 3), CycNum(2)},
                                        {make_cell({0, 1, 0, 0}, 1, 3), CycNum::zeta(3, 1)}});
}

SL2Elt minus_one() { return {-1, 0, 0, -1}; }

}  // namespace

TEST_SUITE("weil") {
  TEST_CASE("bruhat factorization") {
    BruhatFactor id = bruhat_factor(SL2Elt());
    CHECK(!id.big_cell);
    CHECK(id.alpha == 1);
    CHECK(id.beta2 == 0);
    BruhatFactor w = bruhat_factor(SL2Elt::w());
    CHECK(w.big_cell);
    CHECK(w.alpha == 1);
    CHECK(w.beta1 == 0);
    CHECK(w.beta2 == 0);
    SL2Elt g = SL2Elt::make(1, 0, 1, 1);
    BruhatFactor f = bruhat_factor(g);
    CHECK(f.big_cell);
    CHECK(recompose(f) == g);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
      auto [g1, g2] = random_sl2_pair(rng, 3, 0, 1, 10);
      CHECK(recompose(bruhat_factor(g1 * g2)) == g1 * g2);
    }
  }

  TEST_CASE("weil index against Gauss sums") {
    for (const auto& Q : {split4(), nonsplit4(), split_plus_diagonal(1, {1}, 3), split_plus_diagonal(1, {1}, 5)}) {
      CycNum gamma = weil_index(Q);
      CHECK(gamma * gamma == CycNum(disc_char(Q, -1)));
      for (int k = 1; k <= 2; ++k) {
        if (Q.p() == 5 && k == 2) continue;
        CycNum g = gauss_oracle(Q, k);
        CycNum a2 = g.abs2();
        REQUIRE(a2.is_rational());
        int e = val_p(a2.rational_value(), Q.p());
        CHECK(a2.rational_value() == pow_p(Q.p(), e));
        CHECK(g == gamma * p_half_power(Q.p(), e));
      }
    }
    CHECK(weil_index(split4()) == CycNum(1));
  }

  TEST_CASE("single operators") {
    QuadSpace Q = split4();
    SchwartzFn phi0 = lattice_indicator(4, 3);
    CHECK(act_unipotent(phi0, 0, Q) == phi0);
    CHECK(act_unipotent(phi0, 7, Q) == phi0);
    CHECK(act_torus(phi0, 1, Q) == phi0);
    CHECK(act_torus(phi0, 3, Q) == scale(lattice_indicator(4, 3, -1), CycNum(Rational(1, 9))));
    CHECK(act_weyl(phi0, Q) == scale(phi0, weil_index(Q)));
    CHECK(act_element(phi0, SL2Elt::n(Rational(1, 3)), Q) == act_unipotent(phi0, Rational(1, 3), Q));
    CHECK_THROWS_AS(act_element(lattice_indicator(3, 3), SL2Elt::w(), split_plus_diagonal(1, {1}, 3)), Error);
  }

  TEST_CASE("minus identity") {
    for (const auto& Q : {split4(), nonsplit4()}) {
      SchwartzFn f = test_phi();
      SchwartzFn m = act_element(f, minus_one(), Q);
      CHECK(m == scale(scale_argument(f, -1), CycNum(disc_char(Q, -1))));
      CHECK(act_weyl(act_weyl(f, Q), Q) == m);
    }
  }

  TEST_CASE("group law on bounded random pairs") {
    for (const auto& Q : {split4(), nonsplit4()}) {
      std::mt19937_64 rng(7);
      SchwartzFn f = test_phi();
      for (int i = 0; i < 8; ++i) {
        auto [g1, g2] = random_sl2_pair(rng, 3, 0, 1, 2);
        CHECK(equals_ae(act_element(f, g1 * g2, Q), act_element(act_element(f, g2, Q), g1, Q)));
      }
    }
  }

  TEST_CASE("unitarity") {
    QuadSpace Q = nonsplit4();
    SchwartzFn f = test_phi();
    CycNum norm = integrate(abs2(f));
    CHECK(integrate(abs2(act_unipotent(f, Rational(2, 9), Q))) == norm);
    CHECK(integrate(abs2(act_torus(f, 3, Q))) == norm);
    CHECK(integrate(abs2(act_torus(f, Rational(2, 3), Q))) == norm);
    CHECK(integrate(abs2(act_weyl(f, Q))) == norm);
  }

  TEST_CASE("orthogonal equivariance") {
    QuadSpace Q = split4();
    // both preserve q = x1 x2 + x3 x4
    RatMat h1{{2, 0, 0, 0}, {0, Rational(1, 2), 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    RatMat h2{{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}};
    SchwartzFn f = test_phi();
    for (const auto& h : {h1, h2}) {
      for (const SL2Elt& g : {SL2Elt::n(Rational(1, 3)), SL2Elt::t(3), SL2Elt::w()}) {
        CHECK(equals_ae(act_orthogonal(act_element(f, g, Q), h), act_element(act_orthogonal(f, h), g, Q)));
      }
    }
  }
}
