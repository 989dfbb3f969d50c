#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "cfdim/numeric.hpp"

namespace cfdim {

// A finite continued-fraction string [a_1, ..., a_n] with digits >= 1.
class CFWord {
 public:
  CFWord() = default;
  explicit CFWord(std::vector<Integer> digits);
  CFWord(std::initializer_list<long> digits);

  // Accepts "2,3", "[2,3]", "[]" and "" (the empty word).
  static CFWord parse(std::string_view text);

  std::size_t rank() const { return digits_.size(); }
  bool empty() const { return digits_.empty(); }
  const std::vector<Integer>& digits() const { return digits_; }
  const Integer& operator[](std::size_t i) const { return digits_[i]; }
  const Integer& back() const { return digits_.back(); }

  CFWord parent() const;
  CFWord child(const Integer& digit) const;
  CFWord prefix(std::size_t n) const;

  bool is_prefix_of(const CFWord& other) const;
  bool is_proper_prefix_of(const CFWord& other) const {
    return rank() < other.rank() && is_prefix_of(other);
  }

  std::string str() const;

  friend bool operator==(const CFWord& a, const CFWord& b) { return a.digits_ == b.digits_; }
  friend bool operator!=(const CFWord& a, const CFWord& b) { return !(a == b); }
  friend bool operator<(const CFWord& a, const CFWord& b);

 private:
  std::vector<Integer> digits_;
};

struct CFWordHash {
  std::size_t operator()(const CFWord& w) const;
};

// Numerators and denominators of the last two convergents: p/q is the value
// of the word, p_prev/q_prev that of its parent (with (1, 0) for the root).
struct Convergents {
  Integer p = 0;
  Integer q = 1;
  Integer p_prev = 1;
  Integer q_prev = 0;

  Convergents child(const Integer& digit) const;
  Rational value() const { return make_rational(p, q); }
  Rational mediant() const { return make_rational(p + p_prev, q + q_prev); }
  // p q_prev - p_prev q, always +1 or -1.
  Integer determinant() const { return p * q_prev - p_prev * q; }
};

Convergents convergents(const CFWord& v);

// Value of the reversed word [a_n, ..., a_1].
Rational reversal_rational(const CFWord& v);

}  // namespace cfdim
