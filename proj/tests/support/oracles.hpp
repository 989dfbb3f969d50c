#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's algorithms beyond its value types.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "cfdim/cf_word.hpp"
#include "cfdim/dyadic_word.hpp"
#include "cfdim/numeric.hpp"

namespace oracle {

using cfdim::Integer;
using cfdim::Rational;

// Value of [a_1, ..., a_n] by evaluating the nested fraction from the inside.
inline Rational cf_value(const std::vector<Integer>& digits) {
  Rational x = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) x = 1 / (Rational(*it) + x);
  return x;
}

// Cylinder endpoints as {value of v, value of v with last digit + 1}.
inline std::pair<Rational, Rational> cylinder_ends(const std::vector<Integer>& digits) {
  if (digits.empty()) return {Rational(0), Rational(1)};
  std::vector<Integer> bumped = digits;
  bumped.back() += 1;
  Rational a = cf_value(digits);
  Rational b = cf_value(bumped);
  if (a > b) std::swap(a, b);
  return {a, b};
}

// ln(x) for rational x > 0 via 2 atanh((x-1)/(x+1)); returns rational bounds.
inline std::pair<Rational, Rational> ln_bounds(const Rational& x, int terms = 60) {
  Rational z = (x - 1) / (x + 1);
  bool neg = z < 0;
  if (neg) z = -z;
  Rational z2 = z * z;
  Rational power = z;
  Rational sum = 0;
  for (int j = 0; j < terms; ++j) {
    sum += power / (2 * j + 1);
    power *= z2;
  }
  // Remaining terms are bounded by power / ((2N+1)(1 - z^2)).
  Rational tail = power / ((2 * terms + 1) * (1 - z2));
  Rational lo = 2 * sum;
  Rational hi = 2 * (sum + tail);
  if (neg) return {-hi, -lo};
  return {lo, hi};
}

inline std::pair<Rational, Rational> log2_bounds(const Rational& x, int terms = 60) {
  auto [a, b] = ln_bounds(x, terms);
  auto [l2lo, l2hi] = ln_bounds(Rational(2), terms);
  if (a >= 0) return {a / l2hi, b / l2lo};
  return {a / l2lo, b / l2hi};
}

inline std::pair<Rational, Rational> gauss_bounds(const Rational& lo, const Rational& hi) {
  return log2_bounds((1 + hi) / (1 + lo), 90);
}

inline Rational rpow(const Rational& x, unsigned long e) {
  Rational out = 1;
  for (unsigned long i = 0; i < e; ++i) out *= x;
  return out;
}

// Whether [e_lo, e_hi] can contain x^{p/q} for some x in [x_lo, x_hi] (x > 0),
// decided by raising both sides to the q-th power.
inline bool power_consistent(const Rational& e_lo, const Rational& e_hi, const Rational& x_lo,
                             const Rational& x_hi, long p, unsigned long q) {
  const unsigned long a = static_cast<unsigned long>(p < 0 ? -p : p);
  Rational small = rpow(x_lo, a), large = rpow(x_hi, a);
  if (p < 0) {
    Rational t = 1 / small;
    small = 1 / large;
    large = t;
  }
  return rpow(e_lo, q) <= large && rpow(e_hi, q) >= small;
}

// Bisection bounds on x^{1/q} with the given number of halvings.
inline std::pair<Rational, Rational> root_bounds(const Rational& x, unsigned long q, int steps = 200) {
  Rational lo = 0, hi = x > 1 ? x : Rational(1);
  for (int i = 0; i < steps; ++i) {
    Rational mid = (lo + hi) / 2;
    if (rpow(mid, q) <= x) lo = mid;
    else hi = mid;
  }
  return {lo, hi};
}

// Brute-force leftmost largest dyadic cell inside the closed interval [lo, hi],
// scanning every cell of every length.
inline std::pair<Integer, unsigned> brute_largest_dyadic(const Rational& lo, const Rational& hi) {
  for (unsigned k = 0;; ++k) {
    Integer cells = Integer(1) << k;
    for (Integer m = 0; m < cells; ++m) {
      Rational a(m, cells), b(m + 1, cells);
      a.canonicalize();
      b.canonicalize();
      if (lo <= a && b <= hi) return {m, k};
    }
  }
}

// Brute-force smallest consecutive equal-length pair covering [lo, hi].
inline std::pair<Integer, unsigned> brute_two_cover(const Rational& lo, const Rational& hi, unsigned max_k) {
  for (unsigned k = max_k; k >= 1; --k) {
    Integer cells = Integer(1) << k;
    for (Integer m = 0; m + 1 < cells; ++m) {
      Rational a(m, cells), b(m + 2, cells);
      a.canonicalize();
      b.canonicalize();
      if (a <= lo && hi <= b) return {m, k};
    }
  }
  return {Integer(-1), 0};
}

class Random {
 public:
  explicit Random(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(gen_);
  }
  cfdim::CFWord word(std::size_t max_rank, std::uint64_t max_digit, std::size_t min_rank = 0) {
    std::size_t rank = uniform(min_rank, max_rank);
    std::vector<Integer> d;
    for (std::size_t i = 0; i < rank; ++i) d.emplace_back(static_cast<unsigned long>(uniform(1, max_digit)));
    return cfdim::CFWord(std::move(d));
  }
  // Random rational subinterval of [0, 1] with denominators up to max_den.
  std::pair<Rational, Rational> interval(std::uint64_t max_den) {
    for (;;) {
      std::uint64_t d1 = uniform(1, max_den), d2 = uniform(1, max_den);
      Rational a(Integer(static_cast<unsigned long>(uniform(0, d1))), Integer(static_cast<unsigned long>(d1)));
      Rational b(Integer(static_cast<unsigned long>(uniform(0, d2))), Integer(static_cast<unsigned long>(d2)));
      a.canonicalize();
      b.canonicalize();
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      return {a, b};
    }
  }
  cfdim::DyadicWord bits(std::size_t max_len) {
    std::size_t n = uniform(0, max_len);
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += uniform(0, 1) ? '1' : '0';
    return cfdim::DyadicWord(s);
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace oracle
