#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "cfdim/numeric.hpp"

namespace cfdim {

struct RatInterval;

// A binary string w, identified with [m/2^k, (m+1)/2^k), k = |w|.
class DyadicWord {
 public:
  DyadicWord() = default;
  explicit DyadicWord(std::string bits);

  // The word of length k whose interval starts at m / 2^k.
  static DyadicWord from_index(const Integer& m, std::size_t k);

  std::size_t length() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  const std::string& bits() const { return bits_; }

  Integer index() const;  // m
  Rational lo() const;
  Rational hi() const;
  Rational measure() const { return pow2(-static_cast<long>(length())); }
  Rational midpoint() const;
  RatInterval interval() const;

  bool all_zeros() const;
  bool all_ones() const;
  bool has_prev() const { return !all_zeros(); }
  bool has_next() const { return !all_ones(); }
  DyadicWord prev() const;  // w - 1, same length
  DyadicWord next() const;  // w + 1, same length

  DyadicWord child(char bit) const;
  DyadicWord parent() const;
  DyadicWord prefix(std::size_t n) const { return DyadicWord(bits_.substr(0, n)); }
  bool is_prefix_of(const DyadicWord& other) const;
  bool is_proper_prefix_of(const DyadicWord& other) const {
    return length() < other.length() && is_prefix_of(other);
  }

  // "λ" for the empty word, the bits otherwise.
  std::string display() const { return bits_.empty() ? std::string("λ") : bits_; }

  friend bool operator==(const DyadicWord& a, const DyadicWord& b) { return a.bits_ == b.bits_; }
  friend bool operator!=(const DyadicWord& a, const DyadicWord& b) { return a.bits_ != b.bits_; }
  friend bool operator<(const DyadicWord& a, const DyadicWord& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    return a.bits_ < b.bits_;
  }

 private:
  std::string bits_;
};

}  // namespace cfdim
