#pragma once

#include <optional>
#include <string>
#include <variant>

#include "cfdim/cf_word.hpp"
#include "cfdim/rat_interval.hpp"

namespace cfdim {

// The sibling family {[base, i] : from <= i <= to}; `to` empty means infinity.
struct Fan {
  CFWord base;
  Integer from = 1;
  std::optional<Integer> to;

  Fan() = default;
  Fan(CFWord base_, Integer from_, std::optional<Integer> to_ = std::nullopt);

  bool infinite() const { return !to.has_value(); }
  bool singleton() const { return to.has_value() && *to == from; }
  bool contains_digit(const Integer& i) const { return i >= from && (!to || i <= *to); }
  // Number of members; empty for infinite fans.
  std::optional<Integer> size() const;
  CFWord member(const Integer& i) const { return base.child(i); }

  std::string str() const;

  friend bool operator==(const Fan& a, const Fan& b) {
    return a.base == b.base && a.from == b.from && a.to == b.to;
  }
};

// An element of a decomposition: a single word or a fan of siblings.
using Piece = std::variant<CFWord, Fan>;

}  // namespace cfdim
