#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ttl/rational.hpp"

namespace ttl {

// Exact element of Q(zeta_N)[sqrt p], stored as c0 + sqrt(p) * c1 with each
// c_i in the tensor power basis of Q(zeta_N).  N is always the least order.
class CycNum {
 public:
  struct Term {
    std::uint64_t order;
    std::uint64_t exp;
    Rational coeff;
    int sqrtp;
  };

  CycNum() = default;
  CycNum(const Rational& r);  // NOLINT implicit on purpose
  CycNum(long r) : CycNum(Rational(r)) {}
  CycNum(int r) : CycNum(Rational(r)) {}

  static CycNum zeta(std::uint64_t N, std::int64_t a);
  static CycNum sqrt_p(long p, const Rational& coeff = 1);
  static CycNum from_terms(const std::vector<Term>& terms, long p = 0);

  std::vector<Term> terms() const;
  std::uint64_t order() const { return N_; }
  long sqrt_prime() const { return p_; }
  bool is_zero() const { return c_[0].empty() && c_[1].empty(); }
  bool is_rational() const;
  Rational rational_value() const;  // throws unless is_rational
  bool has_sqrtp_part() const { return !c_[1].empty(); }
  std::size_t term_count() const { return c_[0].size() + c_[1].size(); }

  CycNum operator+(const CycNum& o) const;
  CycNum operator-(const CycNum& o) const;
  CycNum operator-() const;
  CycNum operator*(const CycNum& o) const;
  CycNum operator/(const CycNum& o) const { return *this * o.inverse(); }
  CycNum& operator+=(const CycNum& o) { return *this = *this + o; }
  CycNum& operator-=(const CycNum& o) { return *this = *this - o; }
  CycNum& operator*=(const CycNum& o) { return *this = *this * o; }
  CycNum scaled(const Rational& r) const;

  CycNum conj() const;
  CycNum inverse() const;
  CycNum abs2() const { return *this * conj(); }
  // Galois action zeta -> zeta^k on the cyclotomic part, k prime to the order.
  CycNum galois(std::int64_t k) const;

  bool operator==(const CycNum& o) const;
  bool operator!=(const CycNum& o) const { return !(*this == o); }

  std::complex<long double> to_complex() const;
  std::complex<double> to_float(int precision_bits = 53) const;
  std::string str() const;

 private:
  using Comp = std::map<std::uint64_t, Rational>;
  std::uint64_t N_ = 1;
  long p_ = 0;
  Comp c_[2];

  void lift_to(std::uint64_t L);
  void reduce_order();
  static long merge_prime(long a, long b);
};

std::string to_string(const CycNum& x);

// Accumulates sum_a count[a] * zeta_{p^e}^a with integer counts, then converts.
class PhaseAccumulator {
 public:
  PhaseAccumulator() = default;
  PhaseAccumulator(long p, int e);
  void add(std::int64_t exponent, std::int64_t count);
  CycNum value() const;
  bool empty() const;

 private:
  long p_ = 0;
  int e_ = 0;
  std::int64_t mod_ = 1;
  std::vector<Integer> counts_;
};

}  // namespace ttl
