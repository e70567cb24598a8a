#include <doctest.h>

#include <functional>

#include "test_util.hpp"
#include "ttl/error.hpp"
#include "ttl/job.hpp"
#include "ttl/padic.hpp"
#include "ttl/quadspace.hpp"
#include "ttl/transfer.hpp"

using namespace ttl;

namespace {

// Visits every x in (Z/p^m)^n.
void for_each_residue(int n, long mod, const std::function<void(const std::vector<long>&)>& fn) {
  std::vector<long> x(n, 0);
  while (true) {
    fn(x);
    int i = 0;
    while (i < n && ++x[i] == mod) x[i++] = 0;
    if (i == n) return;
  }
}

long qmod(const QuadSpace& Q, const std::vector<long>& x, long mod) {
  long s = 0;
  for (int i = 0; i < Q.n(); ++i)
    for (int j = 0; j < Q.n(); ++j) s += Q.form.gram[i][j] * x[i] * x[j];
  long half = (mod + 1) / 2;  // inverse of 2 mod an odd modulus
  return (((s % mod) + mod) % mod * half) % mod;
}

long brute_count(const QuadSpace& Q, long a, int m, std::optional<long> v1_target = std::nullopt) {
  long mod = 1;
  for (int i = 0; i < m; ++i) mod *= Q.p();
  RatVec sv = Q.form.apply(Q.v1);
  long count = 0;
  for_each_residue(Q.n(), mod, [&](const std::vector<long>& x) {
    if (qmod(Q, x, mod) != ((a % mod) + mod) % mod) return;
    if (v1_target) {
      long s = 0;
      for (int i = 0; i < Q.n(); ++i) s += sv[i].get_num().get_si() * x[i];
      if ((((s - *v1_target) % mod) + mod) % mod != 0) return;
    }
    ++count;
  });
  return count;
}

QuadSpace split4(long p = 3) { return split_plus_diagonal(2, {}, p); }

}  // namespace

TEST_SUITE("quadspace") {
  TEST_CASE("construction") {
    QuadSpace Q = split4();
    CHECK(Q.disc == 1);
    CHECK(disc_char(Q, 3) == 1);
    CHECK(disc_char(Q, 2) == 1);
    QuadSpace Q3 = make_quadspace({{2, 0, 0}, {0, 2, 0}, {0, 0, 2}}, {1, 0, 0}, 5);
    CHECK(Q3.n() == 3);
    CHECK_THROWS_AS(make_quadspace({{0, 3, 0, 0}, {3, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}}, {1, 1, 0, 0}, 3), Error);
    CHECK_THROWS_AS(make_quadspace({{0, 1, 0}, {1, 0, 0}, {0, 0, 2}}, {1, 0, 0}, 3), Error);  // q(v1) = 0
  }

  TEST_CASE("disc character for a nonsquare discriminant") {
    // q = xy + z^2 - 2 w^2 has disc -(-8) = 8 = 2 mod squares, 2 a nonresidue mod 3
    QuadSpace Q = split_plus_diagonal(1, {1, -2}, 3);
    Rational u = unit_part(Q.disc, 3);
    CHECK(disc_char(Q, 3) == legendre(u, 3));
    CHECK(disc_char(Q, 3) == hilbert_symbol(3, Q.disc, 3));
  }

  TEST_CASE("point counts against brute force") {
    CHECK(point_count_residue(split4(), 1) == 24);
    CHECK(point_count_residue(split4(), 1) == brute_count(split4(), 1, 1));
    QuadSpace Q3 = make_quadspace({{2, 0, 0}, {0, 2, 0}, {0, 0, 2}}, {1, 0, 0}, 5);
    CHECK(point_count_residue(Q3, 1) == brute_count(Q3, 1, 1));
    for (long p : {3L, 5L})
      for (auto Q : {split_plus_diagonal(1, {1}, p), split_plus_diagonal(1, {1, -2}, p), split_plus_diagonal(2, {1}, p)})
        for (long a : {1L, 2L}) CHECK(point_count_residue(Q, a) == brute_count(Q, a, 1));
  }

  TEST_CASE("count_solutions_mod against brute force") {
    QuadSpace Q = split4();
    Cell L = make_cell({0, 0, 0, 0}, 0, 3);
    CHECK(count_solutions_mod(Q, {{Constraint::Poly::Q, 1}}, 1, L).count == 24);
    CHECK(count_solutions_mod(Q, {}, 1, L).count == 81);
    CHECK(count_solutions_mod(Q, {{Constraint::Poly::Q, 1}, {Constraint::Poly::V1, 1}}, 1, L).count ==
          brute_count(Q, 1, 1, 1));
    CHECK(count_solutions_mod(Q, {{Constraint::Poly::Q, 1}}, 2, L).count == brute_count(Q, 1, 2));
    CHECK(count_solutions_mod(Q, {{Constraint::Poly::Q, 4}, {Constraint::Poly::V1, 0}}, 2, L).count ==
          brute_count(Q, 4, 2, 0));
  }

  TEST_CASE("meets_fiber") {
    QuadSpace Q = split4();
    CHECK(meets_fiber(Q, make_cell({0, 0, 0, 0}, 0, 3), 1).verdict == Meets::Yes);
    CHECK(meets_fiber(Q, make_cell({0, 0, 0, 0}, 1, 3), 1).verdict == Meets::No);
    MeetsVerdict v = meets_fiber(Q, make_cell({1, 1, 0, 0}, 2, 3), 4);
    CHECK(v.verdict == Meets::No);
    CHECK(v.level <= 2);
  }

  TEST_CASE("fiber volume") {
    QuadSpace Q = split4();
    DensityResult d = fiber_volume(Q, lattice_indicator(4, 3), 1);
    CHECK(d.value == CycNum(Rational(24, 27)));
    CHECK(d.stabilized_at == 1);
    CHECK(d.certified);
    CHECK(fiber_volume(Q, lattice_indicator(4, 3, 1), 1).value == CycNum());
  }

  TEST_CASE("volume identity for catalog forms") {
    for (long p : {3L, 5L, 7L}) {
      for (auto Q : {split_plus_diagonal(1, {1}, p), split_plus_diagonal(1, {-1}, p), split_plus_diagonal(2, {}, p),
                     split_plus_diagonal(1, {1, -2}, p), split_plus_diagonal(2, {1}, p)}) {
        Rational expect = Rational(point_count_residue(Q, 1)) * pow_p(p, -(Q.n() - 1));
        CHECK(fiber_volume(Q, basic_phi(Q), 1).value == CycNum(expect));
      }
    }
  }

  TEST_CASE("certified densities are stable two levels up") {
    QuadSpace Q = split4();
    Cell L = make_cell({0, 0, 0, 0}, 0, 3);
    for (long a : {1L, 2L, 4L, 7L}) {
      DensityResult d = fiber_volume(Q, lattice_indicator(4, 3), a);
      REQUIRE(d.certified);
      int m = d.stabilized_at + 2;
      Integer N = count_solutions_mod(Q, {{Constraint::Poly::Q, a}}, m, L).count;
      CHECK(d.value == CycNum(Rational(N) * pow_p(3, -m * 3)));
    }
  }

  TEST_CASE("coarea formula over unit values of q") {
    // integrate(f) = sum over a mod p^k of p^-k fiber_volume(f, a) when q is a unit on supp f
    QuadSpace Q = split_plus_diagonal(1, {1}, 3);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<std::pair<Cell, CycNum>> pieces;
      std::vector<Cell> cells;
      for (int i = 0; i < 6; ++i) {
        RatVec c;
        for (int k = 0; k < 3; ++k) c.push_back(Rational(static_cast<long>(rng() % 9)));
        if (val_p(Q.q(c), 3) != 0) continue;
        Cell cell = make_cell(c, 1 + static_cast<int>(rng() % 2), 3);
        bool overlap = false;
        for (const auto& o : cells) overlap |= cell_contains(o, cell, 3) || cell_contains(cell, o, 3);
        if (overlap) continue;
        cells.push_back(cell);
        pieces.emplace_back(cell, CycNum(static_cast<long>(1 + rng() % 4)));
      }
      SchwartzFn f = SchwartzFn::from_pieces(3, 3, pieces);
      int k = f.max_level() + 1;
      long mod = 1;
      for (int i = 0; i < k; ++i) mod *= 3;
      CycNum acc;
      for (long a = 1; a < mod; ++a)
        if (a % 3) acc += fiber_volume(Q, f, a).value;
      CHECK(acc * CycNum(pow_p(3, -k)) == integrate(f));
    }
  }

  TEST_CASE("joint fiber volume") {
    QuadSpace Q = split4();
    DensityResult d = joint_fiber_volume(Q, lattice_indicator(4, 3), 1, 0);
    for (int m : {1, 2}) {
      Rational expect = Rational(brute_count(Q, 1, m, 0)) * pow_p(3, -m * 4 + 2 * m);
      CHECK(d.value == CycNum(expect));
    }
    CHECK_THROWS_AS(joint_fiber_volume(Q, lattice_indicator(4, 3), 1, 1), Error);
  }
}
