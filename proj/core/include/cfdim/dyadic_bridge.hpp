#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cfdim/cf_word.hpp"
#include "cfdim/dyadic_word.hpp"
#include "cfdim/fan.hpp"
#include "cfdim/rat_interval.hpp"

namespace cfdim {

// Leftmost among the largest dyadic intervals contained in the closure of x.
// Requires 0 <= lo < hi <= 1.
DyadicWord largest_dyadic_inside(const RatInterval& x);

struct DyadicPair {
  DyadicWord first;
  DyadicWord second;
  // Set when x sits in the last cell [1 - 2^-k, 1) and the pair had to use
  // the left neighbor instead of the (nonexistent) right one.
  bool used_left_neighbor = false;
};

// Smallest consecutive equal-length dyadic pair whose union covers x.
DyadicPair two_dyadic_cover(const RatInterval& x);

// Bounded-rank family of words and fans tiling a dyadic interval.
struct Decomposition {
  DyadicWord source;
  std::vector<Piece> parts;  // ordered left to right
};

Decomposition divide(const DyadicWord& w);

// Refines a decomposition of w into those of w0 and w1.
std::pair<Decomposition, Decomposition> divide_children(const Decomposition& d);

// Pieces of `piece` on each side of a rational point interior to it, left to right.
std::vector<Piece> split_piece(const Piece& piece, const Rational& point);

// E(v): leftmost maximal dyadic cylinder inside the closure of C_v.
DyadicWord encode_E(const CFWord& v);

struct Encoding {
  DyadicWord prefix;  // E(v)
  unsigned tag = 0;   // rank order among the preimages of E(v): 0, 1 or 2
  std::string code() const;
};

Encoding encode_full(const CFWord& v);

// Splits a code into E-part and tag; throws std::invalid_argument with
// "not a valid 𝓔-code" when the trailing bits are 11 or missing.
Encoding parse_code(const std::string& code);

CFWord decode(const std::string& code);
CFWord decode(const Encoding& code);

// All v with E(v) = b, in increasing rank.
std::vector<CFWord> preimages_of(const DyadicWord& b);

// Fixed-width variant of encode_full/decode for words whose cylinders are
// wide enough (q(q + q') < 2^60). Returns nullopt outside that range.
struct CompactCode {
  std::uint64_t index = 0;  // m in [m/2^k, (m+1)/2^k)
  unsigned length = 0;      // k
  unsigned tag = 0;
  friend bool operator==(const CompactCode&, const CompactCode&) = default;
};

std::optional<CompactCode> encode_compact(std::span<const std::uint64_t> digits);
// Decodes into `out`; returns false if the code is not in the image.
bool decode_compact(const CompactCode& code, std::vector<std::uint64_t>& out);

// Calls fn on every word with rank <= max_rank and digits <= max_digit, in
// depth-first order, with its compact code. Prefix state is shared between
// siblings so each call costs one cell search.
void for_each_compact_code(unsigned max_rank, std::uint64_t max_digit,
                           const std::function<void(std::span<const std::uint64_t>, const CompactCode&)>& fn);

}  // namespace cfdim
