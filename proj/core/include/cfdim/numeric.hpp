#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace cfdim {

using Integer = mpz_class;
using Rational = mpq_class;

constexpr long kDefaultPrecision = 128;

// Parses a decimal integer, optionally signed. Throws std::invalid_argument.
Integer parse_integer(std::string_view text);

// Parses "p/q", "p" or a finite decimal such as "0.4". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

std::string to_string(const Integer& z);
std::string to_string(const Rational& q);

Integer floor(const Rational& q);
Integer ceil(const Rational& q);

inline Rational make_rational(const Integer& num, const Integer& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// 2^e for any integer e as an exact rational.
Rational pow2(long e);

// Least k >= 0 with 2^k >= z (z >= 1).
unsigned long ceil_log2(const Integer& z);

}  // namespace cfdim
