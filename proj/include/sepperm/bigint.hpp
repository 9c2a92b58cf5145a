#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sepperm/rng.hpp"

namespace sepperm {

using BigInt = mpz_class;

/// Exact fraction in canonical reduced form: gcd(|num|, den) = 1, den > 0.
class Rational {
 public:
  Rational() : q_(0) {}
  Rational(long n) : q_(n) {}  // NOLINT: implicit on purpose
  Rational(const BigInt& n) : q_(n) {}
  Rational(const BigInt& num, const BigInt& den) : q_(num, den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    q_.canonicalize();
  }
  Rational(long num, long den) : Rational(BigInt(num), BigInt(den)) {}

  BigInt num() const { return q_.get_num(); }
  BigInt den() const { return q_.get_den(); }
  double to_double() const { return q_.get_d(); }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.q_ == 0) throw std::invalid_argument("Rational: division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { Rational r; r.q_ = -a.q_; return r; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

  Rational abs() const { Rational r; r.q_ = ::abs(q_); return r; }

  /// "num/den", or just "num" when den == 1.
  std::string str() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

 private:
  mpq_class q_;
};

inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline BigInt factorial(std::uint64_t n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

/// (K; k_1,...,k_r) with K = sum k_i.
inline BigInt multinomial(const std::vector<std::uint64_t>& parts) {
  std::uint64_t total = 0;
  BigInt denom = 1;
  for (auto k : parts) {
    total += k;
    denom *= factorial(k);
  }
  return factorial(total) / denom;
}

inline BigInt catalan(std::uint64_t k) { return binomial(2 * k, k) / BigInt(k + 1); }

inline BigInt falling_factorial(std::uint64_t n, std::uint64_t k) {
  BigInt r = 1;
  for (std::uint64_t i = 0; i < k; ++i) r *= BigInt(n - i);
  return r;
}

inline BigInt pow2(std::uint64_t k) {
  BigInt r = 1;
  r <<= k;
  return r;
}

/// Unbiased uniform BigInt in [0, bound), bound >= 1, by bit rejection.
inline BigInt uniform_below(const BigInt& bound, Rng& rng) {
  if (bound <= 0) throw std::invalid_argument("uniform_below: bound must be positive");
  const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  std::vector<std::uint64_t> buf(words);
  BigInt r;
  while (true) {
    for (auto& w : buf) w = rng.next_u64();
    mpz_import(r.get_mpz_t(), words, 1, sizeof(std::uint64_t), 0, 0, buf.data());
    r >>= (words * 64 - bits);
    if (r < bound) return r;
  }
}

}  // namespace sepperm
