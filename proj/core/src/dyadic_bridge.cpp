#include "cfdim/dyadic_bridge.hpp"

#include <algorithm>
#include <stdexcept>

#include "cfdim/cylinder.hpp"
#include "cfdim/measure.hpp"

namespace cfdim {

namespace {

void require_unit_subinterval(const RatInterval& x) {
  if (sgn(x.lo) < 0 || x.hi > 1 || x.lo >= x.hi) {
    throw std::invalid_argument("interval must satisfy 0 <= lo < hi <= 1: " + x.str());
  }
}

Rational scaled(const Rational& x, unsigned long k) {
  Rational r = x;
  mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), k);
  r.canonicalize();
  return r;
}

}  // namespace

DyadicWord largest_dyadic_inside(const RatInterval& x) {
  require_unit_subinterval(x);
  const Rational length = x.length();
  // Cells of size 2^-k fit only once 2^-k <= length; one always fits by 2^-k >= length / 4.
  const unsigned long k0 = ceil_log2(ceil(1 / length));
  for (unsigned long k = k0; k <= k0 + 3; ++k) {
    Integer m = ceil(scaled(x.lo, k));
    if (Rational(m + 1) <= scaled(x.hi, k)) return DyadicWord::from_index(m, k);
  }
  throw std::logic_error("no dyadic interval found inside " + x.str());
}

DyadicPair two_dyadic_cover(const RatInterval& x) {
  require_unit_subinterval(x);
  const Rational length = x.length();
  const Integer bound = floor(2 / length);  // 2^k <= 2 / length
  unsigned long k = mpz_sizeinbase(bound.get_mpz_t(), 2) - 1;
  if (k < 1) k = 1;
  for (;; --k) {
    Integer m = floor(scaled(x.lo, k));
    Integer last = (Integer(1) << static_cast<mp_bitcnt_t>(k)) - 1;
    if (m == last) {
      return {DyadicWord::from_index(m - 1, k), DyadicWord::from_index(m, k), true};
    }
    if (Rational(m + 2) >= scaled(x.hi, k)) {
      return {DyadicWord::from_index(m, k), DyadicWord::from_index(m + 1, k), false};
    }
    if (k == 1) break;
  }
  throw std::logic_error("no dyadic pair covers " + x.str());
}

// ---- division -------------------------------------------------------------

namespace {

void push_fan(std::vector<Piece>& out, const CFWord& base, const Integer& from, const std::optional<Integer>& to) {
  if (to && *to < from) return;
  out.push_back(normalize(Fan(base, from, to)));
}

// Pieces of the children of `base` with digits in [from, to] around `point`,
// where `point` is interior to their union.
void split_range(const CFWord& base, const Convergents& c, const Integer& from, const std::optional<Integer>& to,
                 const Rational& point, std::vector<Piece>& out) {
  ChildLocation loc = locate_child(c, point);
  if (loc.kind == ChildLocation::Kind::kBoundary) {
    push_fan(out, base, from, Integer(loc.digit - 1));
    push_fan(out, base, loc.digit, to);
    return;
  }
  if (loc.kind != ChildLocation::Kind::kInterior) throw std::logic_error("split point not interior");
  const Integer& j = loc.digit;
  push_fan(out, base, from, Integer(j - 1));
  CFWord child = base.child(j);
  split_range(child, c.child(j), Integer(1), std::nullopt, point, out);
  push_fan(out, base, Integer(j + 1), to);
}

bool interval_less(const Piece& a, const Piece& b) { return piece_interval(a).lo < piece_interval(b).lo; }

}  // namespace

std::vector<Piece> split_piece(const Piece& piece, const Rational& point) {
  std::vector<Piece> out;
  if (const auto* w = std::get_if<CFWord>(&piece)) {
    split_range(*w, convergents(*w), Integer(1), std::nullopt, point, out);
  } else {
    const Fan& f = std::get<Fan>(piece);
    split_range(f.base, convergents(f.base), f.from, f.to, point, out);
  }
  std::sort(out.begin(), out.end(), interval_less);
  return out;
}

std::pair<Decomposition, Decomposition> divide_children(const Decomposition& d) {
  Decomposition left{d.source.child('0'), {}};
  Decomposition right{d.source.child('1'), {}};
  const Rational mid = d.source.midpoint();
  for (const Piece& piece : d.parts) {
    RatInterval iv = piece_interval(piece);
    if (iv.hi <= mid) {
      left.parts.push_back(piece);
    } else if (iv.lo >= mid) {
      right.parts.push_back(piece);
    } else {
      for (Piece& sub : split_piece(piece, mid)) {
        if (piece_interval(sub).hi <= mid) {
          left.parts.push_back(std::move(sub));
        } else {
          right.parts.push_back(std::move(sub));
        }
      }
    }
  }
  return {std::move(left), std::move(right)};
}

Decomposition divide(const DyadicWord& w) {
  Decomposition d{DyadicWord(), {Piece(CFWord())}};
  for (char bit : w.bits()) {
    auto [left, right] = divide_children(d);
    d = bit == '0' ? std::move(left) : std::move(right);
  }
  return d;
}

// ---- encodings ------------------------------------------------------------

DyadicWord encode_E(const CFWord& v) { return largest_dyadic_inside(cylinder(v)); }

std::string Encoding::code() const {
  static const char* kTags[] = {"00", "01", "10"};
  if (tag > 2) throw std::logic_error("encoding tag out of range");
  return prefix.bits() + kTags[tag];
}

Encoding encode_full(const CFWord& v) {
  Encoding e;
  e.prefix = encode_E(v);
  const Rational limit = 4 * e.prefix.measure();
  // Other preimages of E(v) are prefixes u of v with mu(u) <= 4 mu(E(v)).
  for (std::size_t r = v.rank(); r-- > 0;) {
    CFWord u = v.prefix(r);
    if (lebesgue(u) > limit) break;
    if (encode_E(u) == e.prefix) ++e.tag;
  }
  if (e.tag > 2) throw std::logic_error("more than three preimages of " + e.prefix.display());
  return e;
}

Encoding parse_code(const std::string& code) {
  if (code.size() < 2) throw std::invalid_argument("not a valid 𝓔-code: '" + code + "'");
  std::string tail = code.substr(code.size() - 2);
  unsigned tag = 0;
  if (tail == "00") {
    tag = 0;
  } else if (tail == "01") {
    tag = 1;
  } else if (tail == "10") {
    tag = 2;
  } else if (tail == "11") {
    throw std::invalid_argument("not a valid 𝓔-code: '" + code + "'");
  } else {
    throw std::invalid_argument("bad bit string '" + code + "'");
  }
  return {DyadicWord(code.substr(0, code.size() - 2)), tag};
}

std::vector<CFWord> preimages_of(const DyadicWord& b) {
  std::vector<CFWord> out;
  const Rational lo = b.lo();
  const Rational hi = b.hi();
  const Rational mu_b = b.measure();
  CFWord u;
  Convergents c;
  // Walk the chain of words whose closed cylinder contains [lo, hi].
  for (;;) {
    Rational mu_u = lebesgue(c, u.empty());
    if (mu_u < mu_b) break;
    if (mu_u <= 4 * mu_b && encode_E(u) == b) out.push_back(u);
    ChildLocation loc = locate_child(c, b.midpoint());
    if (loc.kind != ChildLocation::Kind::kInterior) break;
    Convergents next = c.child(loc.digit);
    RatInterval child = cylinder(next, false);
    if (!(child.lo <= lo && hi <= child.hi)) break;
    u = u.child(loc.digit);
    c = next;
  }
  return out;
}

CFWord decode(const Encoding& code) {
  std::vector<CFWord> pre = preimages_of(code.prefix);
  if (code.tag >= pre.size()) throw std::invalid_argument("not a valid 𝓔-code: '" + code.code() + "'");
  return pre[code.tag];
}

CFWord decode(const std::string& code) { return decode(parse_code(code)); }

}  // namespace cfdim
