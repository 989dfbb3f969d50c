#include <algorithm>
#include <stdexcept>

#include "cfdim/cf_word.hpp"
#include "cfdim/cylinder.hpp"
#include "cfdim/dyadic_word.hpp"
#include "cfdim/fan.hpp"
#include "cfdim/rat_interval.hpp"

namespace cfdim {

// ---- CFWord ---------------------------------------------------------------

CFWord::CFWord(std::vector<Integer> digits) : digits_(std::move(digits)) {
  for (const auto& d : digits_) {
    if (d < 1) throw std::invalid_argument("CF digit must be >= 1, got " + to_string(d));
  }
}

CFWord::CFWord(std::initializer_list<long> digits) {
  digits_.reserve(digits.size());
  for (long d : digits) {
    if (d < 1) throw std::invalid_argument("CF digit must be >= 1, got " + std::to_string(d));
    digits_.emplace_back(d);
  }
}

CFWord CFWord::parse(std::string_view text) {
  std::string_view body = text;
  if (!body.empty() && body.front() == '[') {
    if (body.back() != ']') throw std::invalid_argument("unbalanced brackets in '" + std::string(text) + "'");
    body = body.substr(1, body.size() - 2);
  }
  std::vector<Integer> digits;
  if (body.empty()) return CFWord();
  std::size_t start = 0;
  while (start <= body.size()) {
    std::size_t comma = body.find(',', start);
    std::string_view token = body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    Integer d;
    try {
      d = parse_integer(token);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("bad CF digit '" + std::string(token) + "'");
    }
    if (d < 1) throw std::invalid_argument("bad CF digit '" + std::string(token) + "'");
    digits.push_back(d);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return CFWord(std::move(digits));
}

CFWord CFWord::parent() const {
  if (digits_.empty()) return *this;
  CFWord p;
  p.digits_.assign(digits_.begin(), digits_.end() - 1);
  return p;
}

CFWord CFWord::child(const Integer& digit) const {
  if (digit < 1) throw std::invalid_argument("CF digit must be >= 1, got " + to_string(digit));
  CFWord c;
  c.digits_.reserve(digits_.size() + 1);
  c.digits_ = digits_;
  c.digits_.push_back(digit);
  return c;
}

CFWord CFWord::prefix(std::size_t n) const {
  CFWord p;
  p.digits_.assign(digits_.begin(), digits_.begin() + static_cast<std::ptrdiff_t>(std::min(n, digits_.size())));
  return p;
}

bool CFWord::is_prefix_of(const CFWord& other) const {
  if (rank() > other.rank()) return false;
  return std::equal(digits_.begin(), digits_.end(), other.digits_.begin());
}

std::string CFWord::str() const {
  std::string out = "[";
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    if (i) out += ",";
    out += digits_[i].get_str();
  }
  return out + "]";
}

bool operator<(const CFWord& a, const CFWord& b) {
  const std::size_t n = std::min(a.rank(), b.rank());
  for (std::size_t i = 0; i < n; ++i) {
    int c = cmp(a.digits_[i], b.digits_[i]);
    if (c != 0) return c < 0;
  }
  return a.rank() < b.rank();
}

std::size_t CFWordHash::operator()(const CFWord& w) const {
  std::size_t h = 0x9e3779b97f4a7c15ULL ^ w.rank();
  for (const auto& d : w.digits()) {
    std::size_t x = mpz_get_ui(d.get_mpz_t());
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

Convergents Convergents::child(const Integer& digit) const {
  Convergents c;
  c.p = digit * p + p_prev;
  c.q = digit * q + q_prev;
  c.p_prev = p;
  c.q_prev = q;
  return c;
}

Convergents convergents(const CFWord& v) {
  Convergents c;
  for (const auto& d : v.digits()) c = c.child(d);
  return c;
}

Rational reversal_rational(const CFWord& v) {
  if (v.empty()) throw std::invalid_argument("reversal undefined for λ");
  // [a_n, ..., a_1] = 1 / (a_n + [a_{n-1}, ..., a_1]).
  Rational x = 0;
  for (const auto& d : v.digits()) {
    x = 1 / (Rational(d) + x);
  }
  return x;
}

// ---- DyadicWord -----------------------------------------------------------

DyadicWord::DyadicWord(std::string bits) : bits_(std::move(bits)) {
  if (bits_ == "λ") bits_.clear();
  for (char c : bits_) {
    if (c != '0' && c != '1') throw std::invalid_argument("bad bit string '" + bits_ + "'");
  }
}

DyadicWord DyadicWord::from_index(const Integer& m, std::size_t k) {
  if (m < 0) throw std::invalid_argument("negative dyadic index");
  if (k == 0) {
    if (m != 0) throw std::invalid_argument("dyadic index out of range");
    return DyadicWord();
  }
  if (mpz_sizeinbase(m.get_mpz_t(), 2) > k && m != 0) throw std::invalid_argument("dyadic index out of range");
  std::string s = m.get_str(2);
  if (m == 0) s = "0";
  return DyadicWord(std::string(k - s.size(), '0') + s);
}

Integer DyadicWord::index() const {
  if (bits_.empty()) return 0;
  return Integer(bits_, 2);
}

Rational DyadicWord::lo() const { return make_rational(index(), Integer(1) << static_cast<mp_bitcnt_t>(length())); }
Rational DyadicWord::hi() const { return make_rational(index() + 1, Integer(1) << static_cast<mp_bitcnt_t>(length())); }
Rational DyadicWord::midpoint() const {
  return make_rational(2 * index() + 1, Integer(1) << static_cast<mp_bitcnt_t>(length() + 1));
}

RatInterval DyadicWord::interval() const { return RatInterval(lo(), hi(), true, false); }

bool DyadicWord::all_zeros() const { return bits_.find('1') == std::string::npos; }
bool DyadicWord::all_ones() const { return bits_.find('0') == std::string::npos; }

DyadicWord DyadicWord::prev() const {
  if (!has_prev()) throw std::domain_error("no left neighbor for " + display());
  std::string s = bits_;
  std::size_t i = s.size();
  while (i-- > 0) {
    if (s[i] == '1') {
      s[i] = '0';
      break;
    }
    s[i] = '1';
  }
  return DyadicWord(std::move(s));
}

DyadicWord DyadicWord::next() const {
  if (!has_next()) throw std::domain_error("no right neighbor for " + display());
  std::string s = bits_;
  std::size_t i = s.size();
  while (i-- > 0) {
    if (s[i] == '0') {
      s[i] = '1';
      break;
    }
    s[i] = '0';
  }
  return DyadicWord(std::move(s));
}

DyadicWord DyadicWord::child(char bit) const {
  if (bit != '0' && bit != '1') throw std::invalid_argument("bad bit");
  return DyadicWord(bits_ + bit);
}

DyadicWord DyadicWord::parent() const {
  if (bits_.empty()) return *this;
  return DyadicWord(bits_.substr(0, bits_.size() - 1));
}

bool DyadicWord::is_prefix_of(const DyadicWord& other) const {
  return bits_.size() <= other.bits_.size() && other.bits_.compare(0, bits_.size(), bits_) == 0;
}

// ---- RatInterval ----------------------------------------------------------

RatInterval::RatInterval(Rational lo_, Rational hi_, bool lo_closed_, bool hi_closed_)
    : lo(std::move(lo_)), hi(std::move(hi_)), lo_closed(lo_closed_), hi_closed(hi_closed_) {
  if (lo > hi) throw std::invalid_argument("interval with lo > hi");
}

bool RatInterval::contains(const Rational& x) const {
  if (x < lo || x > hi) return false;
  if (x == lo && !lo_closed) return false;
  if (x == hi && !hi_closed) return false;
  return true;
}

std::string RatInterval::str() const {
  return std::string(lo_closed ? "[" : "(") + to_string(lo) + ", " + to_string(hi) + (hi_closed ? "]" : ")");
}

// ---- Fan ------------------------------------------------------------------

Fan::Fan(CFWord base_, Integer from_, std::optional<Integer> to_)
    : base(std::move(base_)), from(std::move(from_)), to(std::move(to_)) {
  if (from < 1) throw std::invalid_argument("fan must start at a digit >= 1");
  if (to && *to < from) throw std::invalid_argument("fan with to < from");
}

std::optional<Integer> Fan::size() const {
  if (!to) return std::nullopt;
  return Integer(*to - from + 1);
}

std::string Fan::str() const {
  return "Fan(" + base.str() + "," + from.get_str() + "," + (to ? to->get_str() : std::string("inf")) + ")";
}

// ---- cylinders ------------------------------------------------------------

namespace {

RatInterval oriented(Rational closed_end, Rational open_end) {
  if (closed_end < open_end) return RatInterval(std::move(closed_end), std::move(open_end), true, false);
  return RatInterval(std::move(open_end), std::move(closed_end), false, true);
}

}  // namespace

RatInterval cylinder(const Convergents& c, bool is_root) {
  if (is_root) return RatInterval(Rational(0), Rational(1), false, false);
  return oriented(c.value(), c.mediant());
}

RatInterval cylinder(const CFWord& v) { return cylinder(convergents(v), v.empty()); }

RatInterval fan_interval(const Convergents& c, bool base_is_root, const Integer& from,
                         const std::optional<Integer>& to) {
  // Member [v,i] spans (i p + p')/(i q + q') (closed) to ((i+1) p + p')/((i+1) q + q').
  Rational first = make_rational(from * c.p + c.p_prev, from * c.q + c.q_prev);
  Rational last = to ? make_rational((*to + 1) * c.p + c.p_prev, (*to + 1) * c.q + c.q_prev) : c.value();
  (void)base_is_root;
  return oriented(std::move(first), std::move(last));
}

RatInterval fan_interval(const Fan& f) {
  return fan_interval(convergents(f.base), f.base.empty(), f.from, f.to);
}

RatInterval piece_interval(const Piece& piece) {
  if (const auto* w = std::get_if<CFWord>(&piece)) return cylinder(*w);
  return fan_interval(std::get<Fan>(piece));
}

std::string piece_str(const Piece& piece) {
  if (const auto* w = std::get_if<CFWord>(&piece)) return w->str();
  return std::get<Fan>(piece).str();
}

const CFWord& piece_root(const Piece& piece) {
  if (const auto* w = std::get_if<CFWord>(&piece)) return *w;
  return std::get<Fan>(piece).base;
}

Rational piece_lebesgue(const Piece& piece) { return piece_interval(piece).length(); }

Piece normalize(Piece piece) {
  if (auto* f = std::get_if<Fan>(&piece)) {
    if (f->singleton()) return f->member(f->from);
  }
  return piece;
}

ChildLocation locate_child(const Convergents& c, const Rational& x) {
  // x = (p + y p') / (q + y q') with y in [0, 1]; child i holds y in (1/(i+1), 1/i).
  Rational num = Rational(c.p) - x * Rational(c.q);
  Rational den = x * Rational(c.q_prev) - Rational(c.p_prev);
  if (sgn(num) == 0) return {ChildLocation::Kind::kValue, Integer(0)};
  if (sgn(den) == 0) throw std::domain_error("point outside cylinder");
  Rational y = num / den;
  if (sgn(y) < 0 || y > 1) throw std::domain_error("point outside cylinder");
  if (y == 1) return {ChildLocation::Kind::kOuter, Integer(1)};
  Rational t = 1 / y;
  if (t.get_den() == 1) return {ChildLocation::Kind::kBoundary, t.get_num()};
  return {ChildLocation::Kind::kInterior, floor(t)};
}

}  // namespace cfdim
