// Fixed-width encode/decode used for exhaustive sweeps. Mirrors the exact
// rational routines in dyadic_bridge.cpp with 128-bit integer arithmetic.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfdim/dyadic_bridge.hpp"

namespace cfdim {

namespace {

__extension__ typedef unsigned __int128 u128;

constexpr unsigned kMaxLog = 60;  // q (q + q') must stay below 2^60

struct Conv {
  std::uint64_t p = 0, q = 1, pp = 1, qp = 0;
  Conv child(std::uint64_t d) const {
    Conv c;
    c.p = d * p + pp;
    c.q = d * q + qp;
    c.pp = p;
    c.qp = q;
    return c;
  }
};

unsigned ceil_log2_u128(u128 x) {
  if (x <= 1) return 0;
  u128 m = x - 1;
  std::uint64_t hi = static_cast<std::uint64_t>(m >> 64);
  if (hi) return 128 - static_cast<unsigned>(__builtin_clzll(hi));
  return 64 - static_cast<unsigned>(__builtin_clzll(static_cast<std::uint64_t>(m)));
}

struct Cell {
  std::uint64_t m;
  unsigned k;
  bool operator==(const Cell& o) const { return m == o.m && k == o.k; }
};

struct Ends {
  std::uint64_t a, b, e, f;  // closure is [a/b, e/f]
};

Ends ends(const Conv& c, std::size_t rank) {
  // Value p/q sits on the left at even ranks and on the right at odd ranks.
  if (rank % 2 == 1) return {c.p + c.pp, c.q + c.qp, c.p, c.q};
  return {c.p, c.q, c.p + c.pp, c.q + c.qp};
}

// ceil(a 2^k / b) for k < 64, estimated in long double from 64-bit operands and fixed up exactly.
std::uint64_t ceil_scaled(std::uint64_t a, std::uint64_t b, unsigned k) {
  const u128 x = static_cast<u128>(a) << k;
  const long double est =
      static_cast<long double>(a) / static_cast<long double>(b) * static_cast<long double>(std::uint64_t{1} << k);
  u128 m = est < 1 ? 0 : static_cast<std::uint64_t>(est);
  while (m * b < x) ++m;
  while (m > 0 && (m - 1) * b >= x) --m;
  return static_cast<std::uint64_t>(m);
}

// E of the word with convergents c at the given rank.
Cell largest_cell(const Conv& c, std::size_t rank) {
  if (rank == 0) return {0, 0};
  const Ends x = ends(c, rank);
  const unsigned k0 = ceil_log2_u128(static_cast<u128>(c.q) * (c.q + c.qp));
  for (unsigned k = k0; k <= k0 + 3; ++k) {
    u128 m = ceil_scaled(x.a, x.b, k);
    if ((m + 1) * x.f <= static_cast<u128>(x.e) << k) return {static_cast<std::uint64_t>(m), k};
  }
  return {0, 255};
}

// Whether cell (m, k), already known to lie in the closure [a/b, e/f], is
// the leftmost largest cell there: m - 1 must stick out on the left and no
// cell of length k - 1 may fit. Cells of length k - 1 start at ceil(m/2) or later.
bool is_largest_cell(const Ends& x, std::uint64_t m, unsigned k) {
  if (k == 0) return true;
  if (m > 0 && static_cast<u128>(m - 1) * x.b >= static_cast<u128>(x.a) << k) return false;
  const u128 j = (static_cast<u128>(m) + 1) / 2;
  return (j + 1) * 2 * x.f > static_cast<u128>(x.e) << k;
}

bool fits(const Conv& c) {
  return (static_cast<u128>(c.q) * (c.q + c.qp)) < (static_cast<u128>(1) << kMaxLog);
}

u128 cell_scale(const Conv& c, std::size_t rank) {
  return rank == 0 ? 1 : static_cast<u128>(c.q) * (c.q + c.qp);
}

}  // namespace

std::optional<CompactCode> encode_compact(std::span<const std::uint64_t> digits) {
  thread_local std::vector<Conv> chain;
  chain.assign(1, Conv{});
  for (std::uint64_t d : digits) {
    if (d == 0 || d >= (std::uint64_t{1} << 31)) return std::nullopt;
    Conv next = chain.back().child(d);
    if (!fits(next)) return std::nullopt;
    chain.push_back(next);
  }
  const std::size_t n = digits.size();
  Cell cell = largest_cell(chain[n], n);
  CompactCode out{cell.m, cell.k, 0};
  const u128 limit = static_cast<u128>(1) << cell.k;  // 2^k <= 4 q(q+q') keeps u a candidate
  for (std::size_t r = n; r-- > 0;) {
    if (limit > 4 * cell_scale(chain[r], r)) break;
    const Conv& c = chain[r];
    if (largest_cell(c, r) == cell) ++out.tag;
  }
  if (out.tag > 2) return std::nullopt;
  return out;
}

bool decode_compact(const CompactCode& code, std::vector<std::uint64_t>& out) {
  out.clear();
  if (code.tag > 2 || code.length > kMaxLog + 2) return false;
  const unsigned k = code.length;
  if ((code.index >> k) != 0) return false;
  const u128 scale = static_cast<u128>(1) << k;
  const std::uint64_t m = code.index;
  // The candidates are the prefixes of the expansion of the midpoint
  // (2m+1)/2^(k+1); its digits come from the Euclidean algorithm.
  std::uint64_t num = 2 * m + 1;
  std::uint64_t den = std::uint64_t{1} << (k + 1);
  Conv c;
  unsigned seen = 0;
  for (;;) {
    const std::size_t rank = out.size();
    const u128 big_q = cell_scale(c, rank);
    if (big_q > scale) return false;
    if (scale <= 4 * big_q && is_largest_cell(ends(c, rank), m, k)) {
      if (seen == code.tag) return true;
      ++seen;
    }
    if (num == 0) return false;  // midpoint is an endpoint of every child
    const std::uint64_t j = den / num;
    const std::uint64_t r = den % num;
    den = num;
    num = r;
    if (j >= (std::uint64_t{1} << 31)) return false;
    Conv next = c.child(j);
    if (!fits(next)) return false;
    const Ends x = ends(next, rank + 1);
    if (static_cast<u128>(x.a) << k > static_cast<u128>(m) * x.b) return false;
    if (static_cast<u128>(m + 1) * x.f > static_cast<u128>(x.e) << k) return false;
    out.push_back(j);
    c = next;
  }
}

void for_each_compact_code(unsigned max_rank, std::uint64_t max_digit,
                           const std::function<void(std::span<const std::uint64_t>, const CompactCode&)>& fn) {
  if (max_digit == 0 || max_digit >= (std::uint64_t{1} << 31)) throw std::invalid_argument("digit bound out of range");
  std::vector<std::uint64_t> digits;
  std::vector<Conv> chain{Conv{}};
  std::vector<Cell> cells{Cell{0, 0}};
  fn(digits, CompactCode{0, 0, 0});
  if (max_rank == 0) return;
  digits.push_back(0);
  for (;;) {
    // Advance the last digit, popping exhausted levels.
    while (!digits.empty() && digits.back() == max_digit) {
      digits.pop_back();
      chain.pop_back();
      cells.pop_back();
    }
    if (digits.empty()) return;
    if (digits.back() != 0) {
      chain.pop_back();
      cells.pop_back();
    }
    ++digits.back();
    const std::size_t n = digits.size();
    Conv next = chain.back().child(digits.back());
    if (!fits(next)) throw std::range_error("word " + std::to_string(n) + " outside compact range");
    chain.push_back(next);
    const Cell cell = largest_cell(next, n);
    cells.push_back(cell);
    CompactCode code{cell.m, cell.k, 0};
    const u128 limit = static_cast<u128>(1) << cell.k;
    for (std::size_t r = n; r-- > 0;) {
      if (limit > 4 * cell_scale(chain[r], r)) break;
      if (cells[r] == cell) ++code.tag;
    }
    fn(digits, code);
    if (n < max_rank) digits.push_back(0);
  }
}

}  // namespace cfdim
