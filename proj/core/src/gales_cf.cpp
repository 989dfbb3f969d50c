#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

#include "cfdim/cylinder.hpp"
#include "cfdim/gales.hpp"
#include "cfdim/measure.hpp"

namespace cfdim {

CFGale::CFGale(Rational s) : s_(std::move(s)) {
  if (sgn(s_) < 0 || s_ > 1) throw std::invalid_argument("gale exponent must lie in [0, 1]");
}

Enclosure CFGale::mass(const CFWord& v, long precision) const {
  Enclosure d = value(v, precision);
  if (d.is_point() && mpfr_zero_p(d.lower())) return d;
  return d * pow(gauss(v, precision), s_);
}

Enclosure CFGale::piece_mass(const Piece& piece, long precision) const {
  if (const auto* w = std::get_if<CFWord>(&piece)) return mass(*w, precision);
  return fan_mass(std::get<Fan>(piece), precision);
}

namespace {

std::string fmt(const Rational& q) { return to_string(q); }

bool is_zero(const Enclosure& e) { return e.is_point() && mpfr_zero_p(e.lower()); }

// ---- gauss gale -------------------------------------------------------------

class GaussGale final : public CFGale {
 public:
  explicit GaussGale(const Rational& s) : CFGale(s) {
    if (sgn(s) <= 0) throw std::invalid_argument("gauss gale needs s in (0, 1]");
  }

  Enclosure value(const CFWord& v, long precision) const override {
    if (s() == 1 || v.empty()) return Enclosure(Rational(1), precision);
    return pow(gauss(v, precision), Rational(1 - s()));
  }

  Enclosure mass(const CFWord& v, long precision) const override { return gauss(v, precision); }

  Enclosure fan_mass(const Fan& f, long precision) const override { return gauss(f, precision); }

  std::string describe() const override { return "gauss(s=" + fmt(s()) + ")"; }
};

// ---- modified gale ----------------------------------------------------------

struct PatchGroup {
  std::vector<GalePatch> patches;  // sorted by first digit
  std::optional<std::size_t> balance;
};

class ModifiedGale final : public CFGale {
 public:
  ModifiedGale(CFGalePtr base, std::vector<GalePatch> patches, long precision)
      : CFGale(base->s()), base_(std::move(base)) {
    for (auto& p : patches) groups_[p.target.base].patches.push_back(std::move(p));
    for (auto& [parent, g] : groups_) {
      std::sort(g.patches.begin(), g.patches.end(),
                [](const GalePatch& a, const GalePatch& b) { return a.target.from < b.target.from; });
      for (std::size_t i = 0; i < g.patches.size(); ++i) {
        const GalePatch& p = g.patches[i];
        if (p.multiplier && sgn(*p.multiplier) < 0) throw std::invalid_argument("negative multiplier at " + parent.str());
        if (!p.multiplier) {
          if (g.balance) throw std::invalid_argument("two balance patches at " + parent.str());
          g.balance = i;
        }
        if (i > 0) {
          const Fan& prev = g.patches[i - 1].target;
          if (prev.infinite() || *prev.to >= p.target.from) {
            throw std::invalid_argument("overlapping patches at " + parent.str());
          }
        }
      }
      validate(parent, g, precision);
    }
  }

  Enclosure value(const CFWord& v, long precision) const override {
    Enclosure d = base_->value(v, precision);
    return apply_ancestors(d, v, v.rank(), precision);
  }

  Enclosure mass(const CFWord& v, long precision) const override {
    Enclosure m = base_->mass(v, precision);
    return apply_ancestors(m, v, v.rank(), precision);
  }

  Enclosure fan_mass(const Fan& f, long precision) const override {
    Enclosure total(precision);
    auto it = groups_.find(f.base);
    if (it == groups_.end()) {
      total = base_->fan_mass(f, precision);
    } else {
      // Split f at the patch boundaries of its parent.
      Integer at = f.from;
      const PatchGroup& g = it->second;
      std::vector<Enclosure> multipliers;
      for (std::size_t i = 0; i < g.patches.size(); ++i) multipliers.push_back(multiplier(g, i, precision));
      auto add = [&](const Integer& from, const std::optional<Integer>& to, const Enclosure* m) {
        if (to && *to < from) return;
        Enclosure part = base_->fan_mass(Fan(f.base, from, to), precision);
        total += m ? part * *m : part;
      };
      for (std::size_t i = 0; i < g.patches.size() && (f.infinite() || at <= *f.to); ++i) {
        const Fan& t = g.patches[i].target;
        if (!t.infinite() && *t.to < at) continue;
        if (!f.infinite() && t.from > *f.to) break;
        if (t.from > at) add(at, Integer(t.from - 1), nullptr);
        Integer lo = std::max(at, t.from);
        std::optional<Integer> hi = t.to;
        if (f.to && (!hi || *f.to < *hi)) hi = f.to;
        add(lo, hi, &multipliers[i]);
        if (!hi) return apply_ancestors(total, f.base, f.base.rank(), precision);
        at = *hi + 1;
      }
      if (f.infinite() || at <= *f.to) add(at, f.to, nullptr);
    }
    return apply_ancestors(total, f.base, f.base.rank(), precision);
  }

  std::string describe() const override {
    std::string out = "modified(" + base_->describe();
    for (const auto& [parent, g] : groups_) {
      for (const auto& p : g.patches) {
        out += ", " + p.target.str() + "*" + (p.multiplier ? fmt(*p.multiplier) : std::string("balance"));
      }
    }
    return out + ")";
  }

 private:
  Enclosure multiplier(const PatchGroup& g, std::size_t i, long precision) const {
    if (g.patches[i].multiplier) return Enclosure(*g.patches[i].multiplier, precision);
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto key = std::make_pair(&g, precision);
    auto it = balance_cache_.find(key);
    if (it == balance_cache_.end()) it = balance_cache_.emplace(key, balance_multiplier(g, precision)).first;
    return it->second;
  }

  Enclosure balance_multiplier(const PatchGroup& g, long precision) const {
    Enclosure shift(precision);
    for (std::size_t i = 0; i < g.patches.size(); ++i) {
      if (i == *g.balance) continue;
      shift += base_->fan_mass(g.patches[i].target, precision) * Rational(*g.patches[i].multiplier - 1);
    }
    Enclosure own = base_->fan_mass(g.patches[*g.balance].target, precision);
    return Rational(1) - shift / own;
  }

  void validate(const CFWord& parent, const PatchGroup& g, long precision) const {
    const std::string claim = "gale condition violated at " + parent.str();
    CertifyOptions opts;
    opts.precision = precision;
    Verdict v;
    if (g.balance) {
      v = certify_positive(
          claim, [&](long prec) { return balance_multiplier(g, prec); }, opts, false);
    } else {
      v = certify_equal(
          claim,
          [&](long prec) {
            Enclosure shift(prec);
            for (const auto& p : g.patches) shift += base_->fan_mass(p.target, prec) * Rational(*p.multiplier - 1);
            return std::make_pair(shift, Enclosure(prec));
          },
          opts);
    }
    if (!v.proved()) throw std::invalid_argument(claim);
  }

  // Multiplies x by the patch multipliers on the digits of v[0..rank).
  Enclosure apply_ancestors(Enclosure x, const CFWord& v, std::size_t rank, long precision) const {
    if (is_zero(x)) return x;
    for (const auto& [parent, g] : groups_) {
      if (parent.rank() >= rank || !parent.is_prefix_of(v)) continue;
      const Integer& digit = v[parent.rank()];
      for (std::size_t i = 0; i < g.patches.size(); ++i) {
        if (g.patches[i].target.contains_digit(digit)) {
          x *= multiplier(g, i, precision);
          break;
        }
      }
    }
    return x;
  }

  CFGalePtr base_;
  std::map<CFWord, PatchGroup> groups_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<const PatchGroup*, long>, Enclosure> balance_cache_;
};

// ---- set gale -----------------------------------------------------------------

class SetGale final : public CFGale {
 public:
  SetGale(std::vector<CFWord> words, Rational s_inner, const Rational& s)
      : CFGale(s), words_(std::move(words)), s_inner_(std::move(s_inner)) {
    if (sgn(s_inner_) < 0 || s_inner_ >= s) throw std::invalid_argument("set gale needs 0 <= s' < s");
    std::sort(words_.begin(), words_.end());
    words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
  }

  Enclosure mass(const CFWord& v, long precision) const override {
    const auto& pw = powers(precision);
    Enclosure inside(precision), above(precision);
    bool has_inside = false, has_above = false;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      const CFWord& w = words_[i];
      if (v.is_prefix_of(w)) {
        inside += pw[i].first;
        has_inside = true;
      } else if (w.is_proper_prefix_of(v)) {
        above += pw[i].second;
        has_above = true;
      }
    }
    if (!has_above) return inside;
    Enclosure r = above * gauss(v, precision);
    return has_inside ? inside + r : r;
  }

  Enclosure value(const CFWord& v, long precision) const override {
    Enclosure m = mass(v, precision);
    if (is_zero(m)) return m;
    return m / pow(gauss(v, precision), s());
  }

  Enclosure fan_mass(const Fan& f, long precision) const override {
    const auto& pw = powers(precision);
    const std::size_t r = f.base.rank();
    Enclosure inside(precision), above(precision);
    bool has_above = false;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      const CFWord& w = words_[i];
      if (w.rank() > r && f.base.is_prefix_of(w) && f.contains_digit(w[r])) {
        inside += pw[i].first;
      } else if (w.is_prefix_of(f.base)) {
        above += pw[i].second;
        has_above = true;
      }
    }
    if (!has_above) return inside;
    return inside + above * gauss(f, precision);
  }

  std::string describe() const override {
    std::string out = "set(s'=" + fmt(s_inner_) + ", s=" + fmt(s()) + ", G={";
    for (std::size_t i = 0; i < words_.size(); ++i) out += (i ? "," : "") + words_[i].str();
    return out + "})";
  }

 private:
  // gamma(w)^{s'} and gamma(w)^{s'-1} for each member, per precision.
  const std::vector<std::pair<Enclosure, Enclosure>>& powers(long precision) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(precision);
    if (it != cache_.end()) return it->second;
    std::vector<std::pair<Enclosure, Enclosure>> out;
    for (const auto& w : words_) {
      Enclosure g = gauss(w, precision);
      out.emplace_back(pow(g, s_inner_), pow(g, Rational(s_inner_ - 1)));
    }
    return cache_.emplace(precision, std::move(out)).first->second;
  }

  std::vector<CFWord> words_;
  Rational s_inner_;
  mutable std::mutex mutex_;
  mutable std::map<long, std::vector<std::pair<Enclosure, Enclosure>>> cache_;
};

// ---- combination --------------------------------------------------------------

class CombinedGale final : public CFGale {
 public:
  CombinedGale(std::vector<CFGalePtr> gales, std::vector<Rational> weights, Rational s)
      : CFGale(std::move(s)), gales_(std::move(gales)), weights_(std::move(weights)) {}

  Enclosure value(const CFWord& v, long precision) const override {
    return sum([&](const CFGale& g) { return g.value(v, precision); }, precision);
  }
  Enclosure mass(const CFWord& v, long precision) const override {
    return sum([&](const CFGale& g) { return g.mass(v, precision); }, precision);
  }
  Enclosure fan_mass(const Fan& f, long precision) const override {
    return sum([&](const CFGale& g) { return g.fan_mass(f, precision); }, precision);
  }

  std::string describe() const override {
    std::string out = "combined(";
    for (std::size_t i = 0; i < gales_.size(); ++i) {
      out += (i ? ", " : "") + fmt(weights_[i]) + "*" + gales_[i]->describe();
    }
    return out + ")";
  }

 private:
  template <class F>
  Enclosure sum(F&& term, long precision) const {
    Enclosure total(precision);
    for (std::size_t i = 0; i < gales_.size(); ++i) {
      if (sgn(weights_[i]) == 0) continue;
      total += term(*gales_[i]) * weights_[i];
    }
    return total;
  }

  std::vector<CFGalePtr> gales_;
  std::vector<Rational> weights_;
};

}  // namespace

CFGalePtr gauss_gale(const Rational& s) { return std::make_shared<GaussGale>(s); }

CFGalePtr modified_gale(CFGalePtr base, std::vector<GalePatch> patches, long precision) {
  return std::make_shared<ModifiedGale>(std::move(base), std::move(patches), precision);
}

CFGalePtr set_gale(std::vector<CFWord> words, const Rational& s_inner, const Rational& s) {
  return std::make_shared<SetGale>(std::move(words), s_inner, s);
}

Rational unassigned_weight(const std::vector<Rational>& weights) {
  Rational total = 0;
  for (const auto& w : weights) total += w;
  return 1 - total;
}

CFGalePtr combine_gales(std::vector<CFGalePtr> gales, std::vector<Rational> weights) {
  if (gales.empty()) throw std::invalid_argument("no gales to combine");
  if (gales.size() != weights.size()) throw std::invalid_argument("one weight per gale");
  for (const auto& w : weights) {
    if (sgn(w) < 0) throw std::invalid_argument("negative weight");
  }
  if (sgn(unassigned_weight(weights)) < 0) throw std::invalid_argument("weight overflow");
  const Rational s = gales.front()->s();
  for (const auto& g : gales) {
    if (g->s() != s) throw std::invalid_argument("gales must share one exponent");
  }
  return std::make_shared<CombinedGale>(std::move(gales), std::move(weights), s);
}

Verdict check_gale_condition(const CFGale& d, const CFWord& v, const Integer& truncation, const CertifyOptions& opts) {
  if (truncation < 0) throw std::invalid_argument("truncation must be >= 0");
  const std::string claim = "gale condition of " + d.describe() + " at " + v.str();
  return certify_equal(
      claim,
      [&](long prec) {
        Enclosure lhs = d.value(v, prec) * pow(gauss(v, prec), d.s());
        Enclosure rhs(prec);
        for (Integer i = 1; i <= truncation; ++i) {
          CFWord child = v.child(i);
          Enclosure value = d.value(child, prec);
          if (is_zero(value)) continue;
          rhs += value * pow(gauss(child, prec), d.s());
        }
        rhs += d.fan_mass(Fan(v, truncation + 1), prec);
        return std::make_pair(lhs, rhs);
      },
      opts);
}

bool is_decomposition_of(const CFWord& v, const std::vector<Piece>& pieces) {
  if (pieces.empty()) return false;
  std::vector<RatInterval> parts;
  Rational total = 0;
  for (const auto& piece : pieces) {
    if (const auto* w = std::get_if<CFWord>(&piece)) {
      if (!v.is_prefix_of(*w)) return false;
    } else if (!v.is_prefix_of(std::get<Fan>(piece).base)) {
      return false;
    }
    RatInterval r = piece_interval(piece);
    if (r.lo >= r.hi) return false;
    total += r.length();
    parts.push_back(std::move(r));
  }
  std::sort(parts.begin(), parts.end(), [](const RatInterval& a, const RatInterval& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (parts[i - 1].hi > parts[i].lo) return false;
  }
  return total == lebesgue(v);
}

Verdict check_kolmogorov_equality(const CFGale& d, const CFWord& v, const std::vector<Piece>& pieces,
                                  const CertifyOptions& opts) {
  if (!is_decomposition_of(v, pieces)) throw std::invalid_argument("invalid decomposition");
  const std::string claim = "kolmogorov equality of " + d.describe() + " at " + v.str() + " over " +
                            std::to_string(pieces.size()) + " pieces";
  return certify_equal(
      claim,
      [&](long prec) {
        Enclosure lhs = d.value(v, prec) * pow(gauss(v, prec), d.s());
        Enclosure rhs(prec);
        for (const auto& piece : pieces) {
          if (const auto* w = std::get_if<CFWord>(&piece)) {
            Enclosure value = d.value(*w, prec);
            if (!is_zero(value)) rhs += value * pow(gauss(*w, prec), d.s());
          } else {
            rhs += d.fan_mass(std::get<Fan>(piece), prec);
          }
        }
        return std::make_pair(lhs, rhs);
      },
      opts);
}

CapitalTrace run_capital_trace(const CFGale& d, const CFWord& path, long precision) {
  CapitalTrace out;
  for (std::size_t k = 0; k <= path.rank(); ++k) {
    CFWord prefix = path.prefix(k);
    out.path.push_back(prefix.str());
    out.values.push_back(d.value(prefix, precision));
  }
  return out;
}

}  // namespace cfdim
