#pragma once

#include <string>

#include "cfdim/numeric.hpp"

namespace cfdim {

// Interval with exact rational endpoints; lo <= hi always.
struct RatInterval {
  Rational lo;
  Rational hi;
  bool lo_closed = false;
  bool hi_closed = false;

  RatInterval() = default;
  RatInterval(Rational lo_, Rational hi_, bool lo_closed_ = false, bool hi_closed_ = false);

  Rational length() const { return hi - lo; }
  bool contains(const Rational& x) const;
  bool closure_contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool interior_contains(const Rational& x) const { return lo < x && x < hi; }
  // Containment of closures.
  bool closure_contains(const RatInterval& other) const {
    return lo <= other.lo && other.hi <= hi;
  }

  std::string str() const;

  friend bool operator==(const RatInterval& a, const RatInterval& b) {
    return a.lo == b.lo && a.hi == b.hi && a.lo_closed == b.lo_closed && a.hi_closed == b.hi_closed;
  }
};

}  // namespace cfdim
