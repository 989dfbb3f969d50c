#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_set>

#include "cfdim/cylinder.hpp"
#include "cfdim/dyadic_bridge.hpp"
#include "cfdim/gales.hpp"
#include "cfdim/measure.hpp"

namespace cfdim {

BinGale::BinGale(Rational s) : s_(std::move(s)) {
  if (sgn(s_) < 0 || s_ > 1) throw std::invalid_argument("gale exponent must lie in [0, 1]");
}

Enclosure BinGale::subtree_mass(const DyadicWord& w, std::size_t n, long precision) const {
  if (n < w.length()) throw std::invalid_argument("subtree level above the word");
  return value(w, precision) * exp2_rational(s_ * static_cast<long>(n - w.length()), precision);
}

std::vector<Enclosure> BinGale::chain(const DyadicWord& w, char bit, std::size_t r, long precision) const {
  std::vector<Enclosure> out;
  DyadicWord at = w;
  for (std::size_t j = 0; j <= r; ++j) {
    out.push_back(value(at, precision));
    at = at.child(bit);
  }
  return out;
}

Verdict check_bin_gale_condition(const BinGale& h, const DyadicWord& w, const CertifyOptions& opts) {
  const std::string claim = "binary gale condition of " + h.describe() + " at " + w.display();
  return certify_equal(
      claim,
      [&](long prec) {
        Enclosure lhs = h.value(w.child('0'), prec) + h.value(w.child('1'), prec);
        Enclosure rhs = h.value(w, prec) * exp2_rational(h.s(), prec);
        return std::make_pair(lhs, rhs);
      },
      opts);
}

CapitalTrace run_capital_trace(const BinGale& h, const DyadicWord& path, long precision) {
  CapitalTrace out;
  for (std::size_t k = 0; k <= path.length(); ++k) {
    DyadicWord prefix = path.prefix(k);
    out.path.push_back(prefix.display());
    out.values.push_back(h.value(prefix, precision));
  }
  return out;
}

namespace {

std::string fmt(const Rational& q) { return to_string(q); }

// ---- proportional gale ------------------------------------------------------

class ProportionalGale final : public BinGale {
 public:
  explicit ProportionalGale(CFGalePtr d) : BinGale(d->s()), d_(std::move(d)) {}

  Enclosure value(const DyadicWord& w, long precision) const override {
    std::map<std::string, Enclosure> memo;
    return evaluate(divide(w), memo, precision);
  }

  std::vector<Enclosure> chain(const DyadicWord& w, char bit, std::size_t r, long precision) const override {
    std::map<std::string, Enclosure> memo;
    std::vector<Enclosure> out;
    Decomposition at = divide(w);
    out.push_back(evaluate(at, memo, precision));
    for (std::size_t j = 1; j <= r; ++j) {
      auto halves = divide_children(at);
      at = bit == '0' ? std::move(halves.first) : std::move(halves.second);
      out.push_back(evaluate(at, memo, precision));
    }
    return out;
  }

  std::string describe() const override { return "proportional(" + d_->describe() + ")"; }

 private:
  // 2^{s'|w|} sum of piece masses; masses of pieces carried over from the
  // parent decomposition are reused.
  Enclosure evaluate(const Decomposition& dec, std::map<std::string, Enclosure>& memo, long precision) const {
    Enclosure total(precision);
    for (const auto& piece : dec.parts) {
      std::string key = piece_str(piece);
      auto it = memo.find(key);
      if (it == memo.end()) it = memo.emplace(std::move(key), d_->piece_mass(piece, precision)).first;
      total += it->second;
    }
    return total * exp2_rational(s() * static_cast<long>(dec.source.length()), precision);
  }

  CFGalePtr d_;
};

// ---- smoothed gale ----------------------------------------------------------

class SmoothedGale final : public BinGale {
 public:
  SmoothedGale(BinGalePtr h, const Rational& s, std::size_t n_max) : BinGale(s), h_(std::move(h)), n_max_(n_max) {
    if (s <= h_->s()) throw std::invalid_argument("smoothing requires s > s'");
    if (n_max_ == 0) throw std::invalid_argument("smoothing needs at least one explicit term");
  }

  Enclosure value(const DyadicWord& w, long precision) const override {
    const Rational& s = this->s();
    const Rational& si = h_->s();
    const std::size_t len = w.length();
    const std::size_t top = std::max(n_max_, len + 1);

    // n = 0.
    Enclosure hl = h_->value(DyadicWord(), precision);
    Enclosure total = hl * exp2_rational((s - 1) * static_cast<long>(len), precision);

    // 1 <= n <= |w|: h_n(w) = 2^{(s-1)(|w|-n+1)} h_n(w[:n-1]).
    for (std::size_t n = 1; n <= len; ++n) {
      DyadicWord u = w.prefix(n - 1);
      Enclosure hn = level_term(u, 1, h_->value(u, precision), h_->value(u.child('0'), precision),
                                h_->value(u.child('1'), precision), neighbour(u.child('0'), false, precision),
                                neighbour(u.child('1'), true, precision), u.all_zeros(), u.all_ones());
      total += hn * exp2_rational((s - 1) * static_cast<long>(len - n + 1) - s * static_cast<long>(n), precision);
    }

    // |w| < n <= top from the four chains around w.
    const std::size_t r_top = top - len;
    const bool left_edge = w.all_zeros();
    const bool right_edge = w.all_ones();
    auto f = cached_chain(w, '0', r_top, precision);
    auto l = cached_chain(w, '1', r_top, precision);
    std::vector<Enclosure> lo_side, hi_side;
    if (!left_edge) lo_side = cached_chain(w.prev(), '1', r_top, precision);
    if (!right_edge) hi_side = cached_chain(w.next(), '0', r_top, precision);
    const Enclosure& hw = f[0];
    const Enclosure zero(precision);
    const Enclosure step = exp2_rational(-s, precision);
    Enclosure weight = exp2_rational(-s * static_cast<long>(len), precision);  // 2^{-sn}
    for (std::size_t r = 1; r <= r_top; ++r) {
      weight *= step;
      Enclosure hn = level_term(w, r, hw, f[r], l[r], left_edge ? zero : lo_side[r], right_edge ? zero : hi_side[r],
                                left_edge, right_edge);
      total += hn * weight;
    }

    // n > top. Main part in closed form; boundary words bounded through
    // h(xu) <= 2^{s'|u|} h(x).
    const Enclosure q = exp2_rational(si - s, precision);
    const Enclosure geometric = Rational(1) / (Rational(1) - q);
    Enclosure main = hw * exp2_rational((si - s) * static_cast<long>(r_top + 1), precision) * geometric;
    // sum_{r > R} 2^{-s(|w|+r)} 2^{s'(r-R)} times 2^{s|w|} from h_n.
    Enclosure t = exp2_rational((si - s) * static_cast<long>(r_top + 1) - si * static_cast<long>(r_top), precision) *
                  geometric;
    Enclosure down(precision), up(precision);
    if (!left_edge) {
      down += f[r_top];
      up += lo_side[r_top];
    }
    if (!right_edge) {
      down += l[r_top];
      up += hi_side[r_top];
    }
    Enclosure low = -(t * down * Rational(1, 2));
    Enclosure high = t * up * Rational(1, 2);
    total += main + hull(low, high);
    return total;
  }

  std::string describe() const override {
    return "smoothed(" + h_->describe() + ", s=" + fmt(s()) + ", N=" + std::to_string(n_max_) + ")";
  }

 private:
  // 2^{s|w|} times the smoothed level-n mass, n = |w| + r:
  // 2^{s'r} h(w) - [w != 0*](h(f) - h(f-1))/2 - [w != 1*](h(l) - h(l+1))/2, scaled by 2^{s|w|}.
  // The caller multiplies by 2^{-sn}; here the 2^{s|w|} factor is folded in.
  Enclosure level_term(const DyadicWord& w, std::size_t r, const Enclosure& hw, const Enclosure& hf,
                       const Enclosure& hl, const Enclosure& h_left, const Enclosure& h_right, bool left_edge,
                       bool right_edge) const {
    const long prec = hw.precision();
    Enclosure out = hw * exp2_rational(h_->s() * static_cast<long>(r), prec);
    if (!left_edge) out -= (hf - h_left) * Rational(1, 2);
    if (!right_edge) out -= (hl - h_right) * Rational(1, 2);
    return out * exp2_rational(s() * static_cast<long>(w.length()), prec);
  }

  // h(x - 1) for `right == false`, h(x + 1) otherwise; zero when undefined.
  Enclosure neighbour(const DyadicWord& x, bool right, long precision) const {
    if (right ? x.all_ones() : x.all_zeros()) return Enclosure(precision);
    return h_->value(right ? x.next() : x.prev(), precision);
  }

  // h(w b^j) for j = 0..r, sharing work between words on one run of b's.
  std::vector<Enclosure> cached_chain(const DyadicWord& w, char bit, std::size_t r, long precision) const {
    std::string root = w.bits();
    std::size_t offset = 0;
    while (!root.empty() && root.back() == bit) {
      root.pop_back();
      ++offset;
    }
    const std::size_t need = offset + r;
    const auto key = std::make_tuple(root, bit, precision);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = cache_.find(key);
      if (it != cache_.end() && it->second.size() > need) {
        return std::vector<Enclosure>(it->second.begin() + static_cast<long>(offset),
                                      it->second.begin() + static_cast<long>(need + 1));
      }
    }
    std::vector<Enclosure> full = h_->chain(DyadicWord(root), bit, need, precision);
    std::vector<Enclosure> out(full.begin() + static_cast<long>(offset), full.end());
    std::lock_guard<std::mutex> lock(mutex_);
    if (cache_.size() > kCacheLimit) cache_.clear();
    auto& slot = cache_[key];
    if (slot.size() < full.size()) slot = std::move(full);
    return out;
  }

  static constexpr std::size_t kCacheLimit = 4096;

  BinGalePtr h_;
  std::size_t n_max_;
  mutable std::mutex mutex_;
  mutable std::map<std::tuple<std::string, char, long>, std::vector<Enclosure>> cache_;
};

// ---- cover gales --------------------------------------------------------------

class ExplicitLevel final : public CoverLevel {
 public:
  explicit ExplicitLevel(std::vector<DyadicWord> words) {
    std::vector<std::string> bits;
    for (const auto& w : words) bits.push_back(w.bits());
    std::sort(bits.begin(), bits.end());
    for (std::size_t i = 1; i < bits.size(); ++i) {
      if (bits[i].compare(0, bits[i - 1].size(), bits[i - 1]) == 0) {
        throw std::invalid_argument("level is not prefix-free: " + DyadicWord(bits[i - 1]).display() + " and " +
                                    DyadicWord(bits[i]).display());
      }
    }
    sorted_ = std::move(bits);
    members_.insert(sorted_.begin(), sorted_.end());
  }

  std::optional<DyadicWord> member_prefix_of(const DyadicWord& w) const override {
    for (std::size_t n = 0; n <= w.length(); ++n) {
      std::string p = w.bits().substr(0, n);
      if (members_.count(p)) return DyadicWord(p);
    }
    return std::nullopt;
  }

  Enclosure extension_mass(const DyadicWord& w, const Rational& s, long precision) const override {
    std::map<std::size_t, unsigned long> by_length;
    const std::string& prefix = w.bits();
    for (auto it = std::upper_bound(sorted_.begin(), sorted_.end(), prefix);
         it != sorted_.end() && it->compare(0, prefix.size(), prefix) == 0; ++it) {
      ++by_length[it->size()];
    }
    Enclosure total(precision);
    for (const auto& [len, count] : by_length) {
      total += exp2_rational(-s * static_cast<long>(len), precision) * Rational(count);
    }
    return total;
  }

  std::string describe() const override { return "explicit(" + std::to_string(sorted_.size()) + " words)"; }

 private:
  std::vector<std::string> sorted_;
  std::unordered_set<std::string> members_;
};

class LevelGale final : public BinGale {
 public:
  LevelGale(CoverLevelPtr level, const Rational& s, Rational weight)
      : BinGale(s), level_(std::move(level)), weight_(std::move(weight)) {}

  Enclosure value(const DyadicWord& w, long precision) const override {
    if (auto v = level_->member_prefix_of(w)) {
      return exp2_rational((s() - 1) * static_cast<long>(w.length() - v->length()), precision) * weight_;
    }
    return level_->extension_mass(w, s(), precision) *
           exp2_rational(s() * static_cast<long>(w.length()), precision) * weight_;
  }

  std::string describe() const override {
    return "level(" + level_->describe() + ", s=" + fmt(s()) + ", weight=" + fmt(weight_) + ")";
  }

 private:
  CoverLevelPtr level_;
  Rational weight_;
};

class SumGale final : public BinGale {
 public:
  SumGale(std::vector<BinGalePtr> parts, Rational s) : BinGale(std::move(s)), parts_(std::move(parts)) {}

  Enclosure value(const DyadicWord& w, long precision) const override {
    Enclosure total(precision);
    for (const auto& p : parts_) total += p->value(w, precision);
    return total;
  }

  std::string describe() const override {
    std::string out = "sum(";
    for (std::size_t i = 0; i < parts_.size(); ++i) out += (i ? ", " : "") + parts_[i]->describe();
    return out + ")";
  }

 private:
  std::vector<BinGalePtr> parts_;
};

}  // namespace

BinGalePtr proportional_gale(CFGalePtr d) { return std::make_shared<ProportionalGale>(std::move(d)); }

BinGalePtr smoothed_gale(BinGalePtr h, const Rational& s, std::size_t n_max) {
  return std::make_shared<SmoothedGale>(std::move(h), s, n_max);
}

// ---- neighbour sets -----------------------------------------------------------

bool NeighborSets::in_interior(const DyadicWord& u) const {
  if (u.length() != n || !w.is_prefix_of(u)) return false;
  return std::find(excluded.begin(), excluded.end(), u) == excluded.end();
}

bool NeighborSets::in_boundary(const DyadicWord& u) const {
  return std::find(boundary.begin(), boundary.end(), u) != boundary.end();
}

std::string NeighborSets::interior_description() const {
  std::string out = "{u : |u| = " + std::to_string(n) + ", " + w.display() + " prefix of u}";
  for (const auto& e : excluded) out += " \\ {" + e.bits() + "}";
  return out;
}

NeighborSets neighbor_sets(const DyadicWord& w, std::size_t n) {
  if (n <= w.length()) throw std::invalid_argument("neighbor sets need n > |w|");
  const std::size_t r = n - w.length();
  NeighborSets out;
  out.w = w;
  out.n = n;
  DyadicWord f(w.bits() + std::string(r, '0'));
  DyadicWord l(w.bits() + std::string(r, '1'));
  if (!w.all_zeros()) {
    out.boundary.push_back(f.prev());
    out.boundary.push_back(f);
    out.excluded.push_back(f);
  }
  if (!w.all_ones()) {
    out.boundary.push_back(l);
    out.boundary.push_back(l.next());
    out.excluded.push_back(l);
  }
  out.interior_size = (Integer(1) << static_cast<mp_bitcnt_t>(r)) - static_cast<unsigned long>(out.excluded.size());
  return out;
}

// ---- pipeline -----------------------------------------------------------------

Enclosure Pipeline::c1(long precision) const {
  return Rational(1) / pow(ln2(precision) * Rational(2), s);
}

Enclosure Pipeline::c2(long precision) const {
  return c1(precision) * exp2_rational(-(2 * s + 1), precision);
}

Enclosure Pipeline::c3(long precision) const {
  return c2(precision) * exp2_rational(5 * (s - 1), precision);
}

Pipeline cf_to_binary_pipeline(CFGalePtr d, const Rational& s, std::size_t n_max) {
  if (s <= d->s()) throw std::invalid_argument("smoothing requires s > s'");
  Pipeline p;
  p.source = d;
  p.proportional = proportional_gale(d);
  p.gale = smoothed_gale(p.proportional, s, n_max);
  p.s = s;
  return p;
}

bool in_pipeline_window(const CFWord& v, const DyadicWord& b) {
  const Rational mv = lebesgue(v);
  const Rational mb = b.measure();
  if (mb > 2 * mv || 16 * mb < mv) return false;
  RatInterval cv = cylinder(v);
  return std::max(cv.lo, b.lo()) < std::min(cv.hi, b.hi());
}

Verdict check_pipeline_inequality(const Pipeline& p, const CFWord& v, const DyadicWord& b, const CertifyOptions& opts) {
  if (!in_pipeline_window(v, b)) throw std::invalid_argument("pair outside the admissible window");
  const std::string claim = "h(" + b.display() + ") >= c3 d(" + v.str() + ")";
  return certify_positive(
      claim,
      [&](long prec) { return p.gale->value(b, prec) - p.c3(prec) * p.source->value(v, prec); },
      opts, false);
}

// ---- covers -------------------------------------------------------------------

Enclosure CoverLevel::total_mass(const Rational& s, long precision) const {
  if (member_prefix_of(DyadicWord())) return Enclosure(Rational(1), precision);
  return extension_mass(DyadicWord(), s, precision);
}

CoverLevelPtr explicit_level(std::vector<DyadicWord> words) { return std::make_shared<ExplicitLevel>(std::move(words)); }

Verdict check_cover_budgets(const Cover& cover, long precision) {
  Verdict out;
  out.claim = "cover level budgets";
  out.precision = precision;
  out.status = Status::kProved;
  for (const auto& [index, level] : cover.levels) {
    if (index % 2 != 0) continue;
    Enclosure mass = level->total_mass(cover.s, precision);
    Verdict v;
    if (index == 0) {
      v = decide_positive("level 0 unused", -mass, false);
    } else {
      v = decide_positive("level " + std::to_string(index), pow2(-index) - mass, true);
    }
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += "B_" + std::to_string(index) + " mass " + mass.str(12);
    if (v.refuted()) out.status = Status::kRefuted;
    else if (v.indeterminate() && out.status == Status::kProved) out.status = Status::kIndeterminate;
  }
  return out;
}

BinGalePtr level_gale(CoverLevelPtr level, const Rational& s, const Rational& weight) {
  return std::make_shared<LevelGale>(std::move(level), s, weight);
}

BinGalePtr cover_to_gale(const Cover& cover) {
  std::vector<BinGalePtr> parts;
  for (const auto& [index, level] : cover.levels) {
    if (index < 0) throw std::invalid_argument("negative cover level");
    if (index % 2 != 0) continue;
    parts.push_back(level_gale(level, cover.s, pow2(index / 2)));
  }
  return std::make_shared<SumGale>(std::move(parts), cover.s);
}

}  // namespace cfdim
