#include <doctest.h>

#include "test_util.hpp"
#include "ttl/error.hpp"
#include "ttl/padic.hpp"

using namespace ttl;
using ttl::testing::random_rational;

namespace {

// z^2 = a x^2 + b y^2 has a primitive solution mod p^k for every k <= 6
int hilbert_oracle(long a, long b, long p) {
  const int K = 4;
  long mod = 1;
  for (int i = 0; i < K; ++i) mod *= p;
  auto red = [&](long v) { return ((v % mod) + mod) % mod; };
  for (long x = 0; x < mod; ++x)
    for (long y = 0; y < mod; ++y)
      for (long z = 0; z < mod; ++z) {
        if (x % p == 0 && y % p == 0 && z % p == 0) continue;
        if (red(z * z - a * x * x - b * y * y) == 0) return 1;
      }
  return -1;
}

}  // namespace

TEST_SUITE("padic") {
  TEST_CASE("profile") {
    auto a = padic_profile(12, 3);
    CHECK(a.valuation == 1);
    CHECK(a.abs == Rational(1, 3));
    CHECK(a.frac == 0);
    auto b = padic_profile(Rational(5, 9), 3);
    CHECK(b.valuation == -2);
    CHECK(b.abs == 9);
    CHECK(b.frac == Rational(5, 9));
    auto c = padic_profile(Rational(7, 4), 3);
    CHECK(c.valuation == 0);
    CHECK(c.abs == 1);
    CHECK(c.frac == 0);
    CHECK(padic_profile(0, 3).valuation == kInfVal);
  }

  TEST_CASE("even prime rejected") { CHECK_THROWS_AS(padic_profile(1, 2), Error); }

  TEST_CASE("psi") {
    CHECK(psi_char(Rational(1, 3), 3) == CycNum::zeta(3, 1));
    CHECK(psi_char(Rational(2, 9), 3) == CycNum::zeta(9, 2));
    CHECK(psi_char(5, 3) == CycNum(1));
    CHECK(psi_char(Rational(1, 6), 3) == CycNum::zeta(3, 2));  // 1/6 = 2/3 - 1/2 and 1/2 in Z_3
  }

  TEST_CASE("psi additivity") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
      Rational x = random_rational(rng, 30), y = random_rational(rng, 30);
      CHECK(psi_char(x + y, 3) == psi_char(x, 3) * psi_char(y, 3));
    }
  }

  TEST_CASE("hilbert symbol examples and oracle") {
    CHECK(hilbert_symbol(1, 7, 3) == 1);
    CHECK(hilbert_symbol(3, 3, 3) == -1);
    CHECK(hilbert_symbol(2, 3, 3) == -1);
    for (long a : {1L, 2L, 3L, 6L})
      for (long b : {1L, 2L, 3L, 6L}) CHECK(hilbert_symbol(a, b, 3) == hilbert_oracle(a, b, 3));
  }

  TEST_CASE("hilbert symbol properties") {
    std::mt19937_64 rng(12);
    for (long p : {3L, 5L, 7L}) {
      for (int i = 0; i < 200; ++i) {
        Rational a = random_rational(rng), b = random_rational(rng), c = random_rational(rng);
        if (a == 0 || b == 0 || c == 0) continue;
        CHECK(hilbert_symbol(a, b, p) == hilbert_symbol(b, a, p));
        CHECK(hilbert_symbol(a, b * c, p) == hilbert_symbol(a, b, p) * hilbert_symbol(a, c, p));
        CHECK(hilbert_symbol(a, -a, p) == 1);
      }
    }
  }

  TEST_CASE("absolute value is multiplicative") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 500; ++i) {
      Rational x = random_rational(rng), y = random_rational(rng);
      CHECK(abs_p(x * y, 5) == abs_p(x, 5) * abs_p(y, 5));
    }
  }

  TEST_CASE("ball volume") {
    CHECK(ball_volume(0, 4, 3) == 1);
    CHECK(ball_volume(1, 1, 3) == Rational(1, 3));
    CHECK(ball_volume(-2, 2, 5) == 625);
  }

  TEST_CASE("half powers") {
    CHECK(p_half_power(3, 2) == CycNum(3));
    CHECK(p_half_power(3, 1) * p_half_power(3, 1) == CycNum(3));
    CHECK(p_half_power(3, -3) * p_half_power(3, 3) == CycNum(1));
  }
}
