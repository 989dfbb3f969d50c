#pragma once

#include <mpfr.h>

#include <optional>
#include <stdexcept>
#include <string>

#include "cfdim/numeric.hpp"

namespace cfdim {

class EnclosureDomainError : public std::domain_error {
 public:
  EnclosureDomainError() : std::domain_error("enclosure domain error") {}
};

// A closed real interval [lo, hi] with binary floating-point (hence exact
// dyadic rational) endpoints. Every operation rounds outward, so the result
// contains the exact real value whenever the operands contain theirs.
class Enclosure {
 public:
  explicit Enclosure(long precision = kDefaultPrecision);
  Enclosure(const Rational& value, long precision);
  Enclosure(const Rational& lo, const Rational& hi, long precision);
  Enclosure(const Enclosure& other);
  Enclosure(Enclosure&& other) noexcept;
  Enclosure& operator=(const Enclosure& other);
  Enclosure& operator=(Enclosure&& other) noexcept;
  ~Enclosure();

  static Enclosure from_long(long value, long precision);

  long precision() const { return precision_; }
  Rational lo() const;
  Rational hi() const;
  double lo_double() const;
  double hi_double() const;
  double mid_double() const;
  Rational width() const;
  // Relative width |hi - lo| / max(|lo|, |hi|); 0 for [0, 0].
  double relative_width() const;

  mpfr_srcptr lower() const { return lo_; }
  mpfr_srcptr upper() const { return hi_; }
  mpfr_ptr lower() { return lo_; }
  mpfr_ptr upper() { return hi_; }

  bool contains(const Rational& q) const;
  bool contains(const Enclosure& other) const;
  bool contains_zero() const;
  bool is_point() const;
  bool positive() const;      // lo > 0
  bool nonnegative() const;   // lo >= 0
  bool negative() const;      // hi < 0
  bool less_than(const Enclosure& other) const;   // hi < other.lo
  bool less_than(const Rational& q) const;        // hi < q
  bool greater_than(const Rational& q) const;     // lo > q
  bool at_most(const Rational& q) const;          // hi <= q
  bool at_least(const Rational& q) const;         // lo >= q

  // Decimal rendering "[lo, hi]" with outward directed rounding.
  std::string str(int digits = 20) const;
  std::string lo_str(int digits = 20) const;
  std::string hi_str(int digits = 20) const;

  Enclosure operator-() const;
  Enclosure& operator+=(const Enclosure& rhs);
  Enclosure& operator-=(const Enclosure& rhs);
  Enclosure& operator*=(const Enclosure& rhs);
  Enclosure& operator/=(const Enclosure& rhs);

  friend Enclosure operator+(Enclosure a, const Enclosure& b) { return a += b; }
  friend Enclosure operator-(Enclosure a, const Enclosure& b) { return a -= b; }
  friend Enclosure operator*(Enclosure a, const Enclosure& b) { return a *= b; }
  friend Enclosure operator/(Enclosure a, const Enclosure& b) { return a /= b; }

  friend Enclosure operator+(const Enclosure& a, const Rational& q);
  friend Enclosure operator-(const Enclosure& a, const Rational& q);
  friend Enclosure operator*(const Enclosure& a, const Rational& q);
  friend Enclosure operator/(const Enclosure& a, const Rational& q);
  friend Enclosure operator*(const Rational& q, const Enclosure& a) { return a * q; }
  friend Enclosure operator+(const Rational& q, const Enclosure& a) { return a + q; }
  friend Enclosure operator-(const Rational& q, const Enclosure& a) { return -(a - q); }
  friend Enclosure operator/(const Rational& q, const Enclosure& a);

  // Multiplication by 2^e is exact.
  Enclosure scaled_pow2(long e) const;

 private:
  void init(long precision);
  long precision_;
  mpfr_t lo_;
  mpfr_t hi_;
};

Enclosure hull(const Enclosure& a, const Enclosure& b);
std::optional<Enclosure> intersect(const Enclosure& a, const Enclosure& b);

Enclosure ln2(long precision);
Enclosure log(const Enclosure& x);
Enclosure log2(const Enclosure& x);
Enclosure log1p(const Enclosure& x);
Enclosure exp(const Enclosure& x);
Enclosure exp2(const Enclosure& x);
Enclosure sqrt(const Enclosure& x);
Enclosure pow(const Enclosure& x, const Rational& s);
Enclosure pow(const Enclosure& x, const Enclosure& s);

// log1p of an exact nonnegative rational from one correctly rounded evaluation.
Enclosure log1p_exact(const Rational& r, long precision);

Enclosure log2_enclosure(const Rational& q, long precision);
Enclosure pow_enclosure(const Enclosure& x, const Rational& s, long precision);

// 2^{e} for rational e.
Enclosure exp2_rational(const Rational& e, long precision);

}  // namespace cfdim
