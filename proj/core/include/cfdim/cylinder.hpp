#pragma once

#include <string>

#include "cfdim/cf_word.hpp"
#include "cfdim/fan.hpp"
#include "cfdim/rat_interval.hpp"

namespace cfdim {

// Normalized cylinder interval. The endpoint p/q (the value of v) is closed,
// the mediant endpoint is open; the empty word maps to (0, 1).
RatInterval cylinder(const CFWord& v);
RatInterval cylinder(const Convergents& c, bool is_root);

// Union of the fan's member cylinders.
RatInterval fan_interval(const Fan& f);
RatInterval fan_interval(const Convergents& base, bool base_is_root, const Integer& from,
                         const std::optional<Integer>& to);

RatInterval piece_interval(const Piece& piece);
std::string piece_str(const Piece& piece);
// The word all members of the piece extend (the word itself for singletons).
const CFWord& piece_root(const Piece& piece);
// Exact Lebesgue measure of the piece's union.
Rational piece_lebesgue(const Piece& piece);
// Single-member fans become words.
Piece normalize(Piece piece);

// Where a rational x in the closure of C_v sits among the children of v.
struct ChildLocation {
  enum class Kind {
    kValue,     // x = p/q, the accumulation point of the children
    kOuter,     // x = the mediant endpoint, inside the closure of child 1 only
    kBoundary,  // x is the shared endpoint of children digit-1 and digit
    kInterior,  // x is interior to child `digit`
  };
  Kind kind;
  Integer digit;
};

ChildLocation locate_child(const Convergents& c, const Rational& x);

}  // namespace cfdim
