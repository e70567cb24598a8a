#include <doctest.h>

#include "test_util.hpp"
#include "ttl/exactnum.hpp"

using namespace ttl;
using ttl::testing::close;
using ttl::testing::random_cycnum;

TEST_SUITE("exactnum") {
  TEST_CASE("roots of unity") {
    CHECK(CycNum::zeta(1, 0) == CycNum(1));
    CHECK(CycNum::zeta(3, 1) + CycNum::zeta(3, 2) == CycNum(-1));
    CHECK(CycNum::zeta(9, 11) == CycNum::zeta(9, 2));
    CHECK(CycNum::zeta(4, 1) * CycNum::zeta(4, 1) == CycNum(-1));
    CHECK(CycNum::zeta(5, 2).conj() == CycNum::zeta(5, 3));
    CHECK(CycNum::zeta(6, 1) == -CycNum::zeta(3, 2));
  }

  TEST_CASE("sqrt p") {
    CycNum s = CycNum::sqrt_p(3);
    CHECK(s * s == CycNum(3));
    CHECK(s.conj() == s);
    CHECK(close(s.to_float(), {1.7320508075688772, 0}));
  }

  TEST_CASE("abs2") {
    CHECK(CycNum::zeta(8, 1).abs2() == CycNum(1));
    CHECK((CycNum(2) * CycNum::zeta(3, 1)).abs2() == CycNum(4));
    CHECK((CycNum(1) + CycNum::zeta(3, 1)).abs2() == CycNum(1));
  }

  TEST_CASE("float rendering") {
    CHECK(close(CycNum::zeta(4, 1).to_float(), {0, 1}));
    CHECK(close((CycNum::zeta(3, 1) + CycNum::zeta(3, 2)).to_float(), {-1, 0}));
  }

  TEST_CASE("canonical form is idempotent") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
      CycNum x = random_cycnum(rng);
      CycNum y = CycNum::from_terms(x.terms(), x.sqrt_prime());
      CHECK(x == y);
      CHECK(CycNum::from_terms(y.terms(), y.sqrt_prime()).terms().size() == y.terms().size());
    }
  }

  TEST_CASE("ring axioms") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 200; ++i) {
      CycNum a = random_cycnum(rng), b = random_cycnum(rng), c = random_cycnum(rng);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a + b == b + a);
      CHECK(a * b == b * a);
      CHECK(a - a == CycNum());
      if (!a.is_zero()) CHECK(a * a.inverse() == CycNum(1));
    }
  }

  TEST_CASE("x * conj(x) is real and nonnegative") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
      auto z = random_cycnum(rng).abs2().to_float();
      CHECK(std::abs(z.imag()) < 1e-9);
      CHECK(z.real() > -1e-9);
    }
  }

  TEST_CASE("equality is sound against floats") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 1000; ++i) {
      CycNum a = random_cycnum(rng), b = random_cycnum(rng);
      // two expression trees for the same value
      CycNum x = (a + b) * (a - b);
      CycNum y = a * a - b * b;
      REQUIRE(x == y);
      CHECK(close(x.to_float(), y.to_float(), 1e-7));
      CHECK(close(x.to_float(), (a.to_float() + b.to_float()) * (a.to_float() - b.to_float()), 1e-7));
    }
  }

  TEST_CASE("galois action is a ring map") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
      CycNum a = random_cycnum(rng), b = random_cycnum(rng);
      std::int64_t k = 7;  // prime to every order used
      CHECK((a * b).galois(k) == a.galois(k) * b.galois(k));
      CHECK((a + b).galois(k) == a.galois(k) + b.galois(k));
    }
  }
}
