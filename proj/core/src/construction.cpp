#include "cfdim/construction.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>

#include "cfdim/cylinder.hpp"
#include "cfdim/measure.hpp"

namespace cfdim {

namespace {

// Least integer r with r^n >= y (y >= 0).
Integer ceil_root(const Integer& y, unsigned long n) {
  Integer r;
  mpz_root(r.get_mpz_t(), y.get_mpz_t(), n);
  Integer rn;
  mpz_pow_ui(rn.get_mpz_t(), r.get_mpz_t(), n);
  if (rn < y) ++r;
  return r;
}

Integer ipow(const Integer& base, unsigned long e) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

unsigned long as_ulong(const Integer& z, const char* what) {
  if (z < 0 || !z.fits_ulong_p()) throw std::invalid_argument(std::string(what) + " out of range");
  return z.get_ui();
}

void require_level(const Schedule& sched, std::size_t k) {
  if (k < 1 || k > sched.depth()) {
    throw std::invalid_argument("level " + std::to_string(k) + " outside schedule of depth " +
                                std::to_string(sched.depth()));
  }
}

// k prod_{i<k} 100 a_i.
Integer schedule_base(const Schedule& sched, std::size_t k) {
  Integer x = static_cast<unsigned long>(k);
  for (std::size_t i = 1; i < k; ++i) x *= 100 * sched.lower(i);
  return x;
}

// (2/a_k) prod_{i<k} 2/(a_i(a_i+1)): no member of S_k is longer.
Rational member_length_bound(const Schedule& sched, std::size_t k) {
  Rational r = make_rational(2, sched.lower(k));
  for (std::size_t i = 1; i < k; ++i) {
    const Integer& a = sched.lower(i);
    r *= make_rational(2, a * (a + 1));
  }
  return r;
}

struct Window {
  Rational lo;
  Rational hi;
};

// Digits of the children of c whose closures meet the closure of [x, y],
// for x <= y inside the closure of C_c. Unbounded when the value of c is hit.
std::pair<Integer, std::optional<Integer>> child_digits(const Convergents& c, const Rational& x, const Rational& y) {
  auto range = [&](const Rational& pt) -> std::pair<Integer, std::optional<Integer>> {
    ChildLocation loc = locate_child(c, pt);
    switch (loc.kind) {
      case ChildLocation::Kind::kValue:
        return {Integer(0), std::nullopt};
      case ChildLocation::Kind::kOuter:
        return {Integer(1), Integer(1)};
      case ChildLocation::Kind::kBoundary:
        return {loc.digit - 1, loc.digit};
      case ChildLocation::Kind::kInterior:
        break;
    }
    return {loc.digit, loc.digit};
  };
  auto [lx, hx] = range(x);
  auto [ly, hy] = range(y);
  bool unbounded = !hx || !hy;
  Integer first;
  if (!hx) first = ly;
  else if (!hy) first = lx;
  else first = std::min(lx, ly);
  if (unbounded) return {first, std::nullopt};
  return {first, std::max(*hx, *hy)};
}

bool meets(const RatInterval& x, const Window& w) { return std::max(x.lo, w.lo) < std::min(x.hi, w.hi); }

// Walks the members S of S_k whose interval meets the window and whose
// measure is at least min_measure. Returns false once more than `budget`
// nodes have been visited.
class MemberSearch {
 public:
  using Visit = std::function<void(const Fan&, const RatInterval&)>;

  MemberSearch(const Schedule& sched, std::size_t k, Window window, Rational min_measure, std::size_t budget)
      : sched_(sched), k_(k), window_(std::move(window)), min_(std::move(min_measure)), budget_(budget) {}

  bool run(const Visit& visit) {
    std::vector<Integer> prefix;
    return descend(Convergents{}, true, prefix, visit);
  }

 private:
  bool descend(const Convergents& c, bool root, std::vector<Integer>& prefix, const Visit& visit) {
    if (++visited_ > budget_) return false;
    std::size_t level = prefix.size() + 1;
    if (level == k_) {
      Fan f(CFWord(prefix), sched_.lower(k_), sched_.upper(k_));
      RatInterval x = fan_interval(c, root, f.from, f.to);
      if (x.length() >= min_ && meets(x, window_)) visit(f, x);
      return true;
    }
    RatInterval here = cylinder(c, root);
    Rational x = std::max(window_.lo, here.lo);
    Rational y = std::min(window_.hi, here.hi);
    if (x >= y) return true;
    auto [first, last] = child_digits(c, x, y);
    Integer d = std::max(first, sched_.lower(level));
    Integer stop = last ? std::min(*last, sched_.upper(level)) : sched_.upper(level);
    for (; d <= stop; ++d) {
      Convergents cc = c.child(d);
      if (min_ > 0 && lebesgue(cc, false) < min_) break;
      if (!meets(cylinder(cc, false), window_)) continue;
      prefix.push_back(d);
      bool ok = descend(cc, false, prefix, visit);
      prefix.pop_back();
      if (!ok) return false;
      if (visited_ > budget_) return false;
    }
    return true;
  }

  const Schedule& sched_;
  std::size_t k_;
  Window window_;
  Rational min_;
  std::size_t budget_;
  std::size_t visited_ = 0;
};

Window clamp_window(Rational lo, Rational hi) {
  if (lo < 0) lo = 0;
  if (hi > 1) hi = 1;
  return {std::move(lo), std::move(hi)};
}

constexpr std::size_t kExtensionBudget = 4096;
constexpr std::size_t kLocalBudget = 1u << 16;
constexpr long kEnumerableMembers = 1000;

// B_k answered by local searches of the continued-fraction tree.
// A pair word u of length l comes from a member S with l in {l0 - 1, l0},
// 2^{l0} <= 2/mu(S) < 2^{l0+1}, so mu(S) > 2^{-l}/2 and S lies within 2^{-l}
// of u.
class SymbolicLevel final : public CoverLevel {
 public:
  SymbolicLevel(Schedule sched, std::size_t k) : sched_(std::move(sched)), k_(k) {
    members_ = level_size(sched_, k_);
    length_bound_ = member_length_bound(sched_, k_);
  }

  std::optional<DyadicWord> member_prefix_of(const DyadicWord& w) const override {
    for (std::size_t n = 1; n <= w.length(); ++n) {
      DyadicWord u = w.prefix(n);
      if (is_pair_word(u)) return u;
    }
    return std::nullopt;
  }

  Enclosure extension_mass(const DyadicWord& w, const Rational& s, long precision) const override {
    for (std::size_t n = 1; n <= w.length(); ++n) {
      if (is_pair_word(w.prefix(n))) return Enclosure(precision);
    }
    Rational margin = pow2(-static_cast<long>(w.length()) - 1);
    MemberSearch search(sched_, k_, clamp_window(w.lo() - margin, w.hi() + margin), 0, kExtensionBudget);
    std::set<std::string> found;
    bool complete = search.run([&](const Fan&, const RatInterval& x) {
      DyadicPair pair = two_dyadic_cover(x);
      for (const DyadicWord* v : {&pair.first, &pair.second}) {
        if (w.is_proper_prefix_of(*v)) found.insert(v->bits());
      }
    });
    if (!complete) {
      // Whole-level bound: sum 2^{-s|v|} <= 2^{1+s} sum mu^s(S) <= 2^{1+s} |S_k| max mu^s.
      Enclosure bound = pow_enclosure(Enclosure(length_bound_, precision), s, precision) *
                        Rational(members_) * exp2_rational(1 + s, precision);
      Enclosure out(precision);
      return hull(out, bound);
    }
    Enclosure total(precision);
    for (const auto& bits : found) {
      bool pruned = false;
      for (std::size_t n = w.length() + 1; n < bits.size() && !pruned; ++n) {
        pruned = found.count(bits.substr(0, n)) > 0;
      }
      if (!pruned) total += exp2_rational(-s * static_cast<long>(bits.size()), precision);
    }
    return total;
  }

  std::string describe() const override {
    return "B_" + std::to_string(k_) + " (symbolic, " + to_string(members_) + " members)";
  }

 private:
  bool is_pair_word(const DyadicWord& u) const {
    if (u.empty()) return false;
    Rational cell = u.measure();
    MemberSearch search(sched_, k_, clamp_window(u.lo() - cell, u.hi() + cell), cell / 2, kLocalBudget);
    bool hit = false;
    bool complete = search.run([&](const Fan&, const RatInterval& x) {
      if (hit) return;
      DyadicPair pair = two_dyadic_cover(x);
      hit = pair.first == u || pair.second == u;
    });
    if (!complete) throw std::logic_error("local cover search exceeded its budget at " + u.display());
    return hit;
  }

  Schedule sched_;
  std::size_t k_;
  Integer members_;
  Rational length_bound_;
};

std::string word_label(const CFWord& v) { return v.str(); }

}  // namespace

Schedule build_schedule(const Rational& s, std::size_t depth) {
  if (!(s > 0 && s < Rational(1, 2))) throw std::invalid_argument("schedule requires 0 < s < 1/2");
  if (depth < 1) throw std::invalid_argument("schedule depth must be at least 1");
  Schedule out;
  out.s = s;
  out.s.canonicalize();
  unsigned long p = as_ulong(out.s.get_num(), "numerator of s");
  unsigned long q = as_ulong(out.s.get_den(), "denominator of s");
  out.a.push_back(1);
  out.b.push_back(50);
  for (std::size_t k = 2; k <= depth; ++k) {
    // a >= 2 X^{q/p}  <=>  a^p >= 2^p X^q.
    Integer x = schedule_base(out, k);
    Integer y = ipow(x, q) << static_cast<mp_bitcnt_t>(p);
    Integer a = ceil_root(y, p);
    out.a.push_back(a);
    out.b.push_back(50 * a);
  }
  return out;
}

Enclosure schedule_target(const Schedule& sched, std::size_t k, long precision) {
  require_level(sched, k);
  if (k == 1) return Enclosure(Rational(1), precision);
  Enclosure x(Rational(schedule_base(sched, k)), precision);
  return pow_enclosure(x, 1 / sched.s, precision) * Rational(2);
}

Integer level_size(const Schedule& sched, std::size_t k) {
  require_level(sched, k);
  Integer n = 1;
  for (std::size_t i = 1; i < k; ++i) n *= sched.upper(i) - sched.lower(i) + 1;
  return n;
}

Fan level_member(const Schedule& sched, const std::vector<Integer>& prefix) {
  std::size_t k = prefix.size() + 1;
  require_level(sched, k);
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (prefix[i] < sched.lower(i + 1) || prefix[i] > sched.upper(i + 1)) {
      throw std::invalid_argument("digit " + to_string(prefix[i]) + " outside [a_" + std::to_string(i + 1) + ", b_" +
                                  std::to_string(i + 1) + "]");
    }
  }
  return Fan(CFWord(prefix), sched.lower(k), sched.upper(k));
}

namespace {

template <typename Fn>
void for_each_member(const Schedule& sched, std::size_t k, Fn&& fn) {
  std::vector<Integer> prefix;
  std::function<void()> rec = [&]() {
    if (prefix.size() + 1 == k) {
      fn(level_member(sched, prefix));
      return;
    }
    std::size_t i = prefix.size() + 1;
    for (Integer d = sched.lower(i); d <= sched.upper(i); ++d) {
      prefix.push_back(d);
      rec();
      prefix.pop_back();
    }
  };
  rec();
}

}  // namespace

LevelMass level_cover_mass(const Schedule& sched, std::size_t k, const CertifyOptions& opts) {
  require_level(sched, k);
  LevelMass out;
  out.k = k;
  out.members = level_size(sched, k);
  const Rational longest = member_length_bound(sched, k);
  auto analytic = [&](long prec) {
    return pow_enclosure(Enclosure(longest, prec), sched.s, prec) * Rational(out.members);
  };
  std::vector<Rational> lengths;
  if (out.members <= kEnumerableMembers) {
    for_each_member(sched, k, [&](const Fan& f) { lengths.push_back(lebesgue(f)); });
  }
  auto enumerated = [&](long prec) {
    Enclosure sum(prec);
    for (const auto& m : lengths) sum += pow_enclosure(Enclosure(m, prec), sched.s, prec);
    return sum;
  };
  out.analytic = analytic(opts.precision);
  if (!lengths.empty()) out.enumerated = enumerated(opts.precision);

  const Rational budget(1, static_cast<long>(k));
  const std::string claim = "level " + std::to_string(k) + " mass <= 1/" + std::to_string(k);
  Verdict v = certify_positive(
      claim, [&](long prec) { return budget - analytic(prec); }, opts, false);
  v.detail = "analytic bound";
  if (!v.proved() && !lengths.empty()) {
    v = certify_positive(
        claim, [&](long prec) { return budget - enumerated(prec); }, opts, false);
    v.detail = "enumeration of " + to_string(out.members) + " members";
  }
  out.verdict = std::move(v);
  return out;
}

BinaryLevel binary_level_cover(const Schedule& sched, std::size_t k, const CertifyOptions& opts) {
  require_level(sched, k);
  BinaryLevel out;
  out.k = k;
  const Rational budget = make_rational(1, Integer(static_cast<unsigned long>(k)));
  const std::string claim = "B_" + std::to_string(k) + " mass <= 2^(1+s)/" + std::to_string(k);
  if (level_size(sched, k) <= kEnumerableMembers) {
    std::set<std::string> pairs;
    for_each_member(sched, k, [&](const Fan& f) {
      DyadicPair pair = two_dyadic_cover(fan_interval(f));
      pairs.insert(pair.first.bits());
      pairs.insert(pair.second.bits());
    });
    std::vector<DyadicWord> words;
    for (const auto& bits : pairs) {
      bool pruned = false;
      for (std::size_t n = 1; n < bits.size() && !pruned; ++n) pruned = pairs.count(bits.substr(0, n)) > 0;
      if (!pruned) words.emplace_back(bits);
    }
    std::sort(words.begin(), words.end());
    out.level = explicit_level(words);
    out.words = std::move(words);
    auto mass = [&](long prec) { return out.level->total_mass(sched.s, prec); };
    out.mass = mass(opts.precision);
    out.verdict = certify_positive(
        claim, [&](long prec) { return exp2_rational(1 + sched.s, prec) * budget - mass(prec); }, opts, false);
    out.verdict.detail = std::to_string(out.words->size()) + " words";
    return out;
  }
  out.level = symbolic_level(sched, k);
  const Rational longest = member_length_bound(sched, k);
  const Integer members = level_size(sched, k);
  auto bound = [&](long prec) {
    return pow_enclosure(Enclosure(longest, prec), sched.s, prec) * Rational(members) *
           exp2_rational(1 + sched.s, prec);
  };
  out.mass = hull(Enclosure(opts.precision), bound(opts.precision));
  out.verdict = certify_positive(
      claim, [&](long prec) { return exp2_rational(1 + sched.s, prec) * budget - bound(prec); }, opts, false);
  out.verdict.detail = "symbolic level, analytic bound";
  return out;
}

CoverLevelPtr symbolic_level(const Schedule& sched, std::size_t k) {
  require_level(sched, k);
  return std::make_shared<SymbolicLevel>(sched, k);
}

Counterexample counterexample_gale(const Schedule& sched, long n, const CertifyOptions& opts) {
  if (sched.depth() == 0) throw std::invalid_argument("empty schedule");
  if (n < 0) throw std::invalid_argument("n must be nonnegative");
  // k = ceil(2^{1+s+n}) = least k with k^q >= 2^{(1+n)q + p}.
  unsigned long p = as_ulong(sched.s.get_num(), "numerator of s");
  unsigned long q = as_ulong(sched.s.get_den(), "denominator of s");
  Integer target = Integer(1) << static_cast<mp_bitcnt_t>((1 + n) * q + p);
  Integer k = ceil_root(target, q);
  if (k > static_cast<unsigned long>(sched.depth())) {
    throw std::invalid_argument("schedule too short: n = " + std::to_string(n) + " needs depth " + to_string(k));
  }
  Counterexample out;
  out.n = n;
  out.k = k.get_ui();
  out.level = binary_level_cover(sched, out.k, opts);
  out.gale = level_gale(out.level.level, sched.s, pow2(n));
  out.initial_capital = certify_positive(
      "initial capital <= 1", [&](long prec) { return Rational(1) - out.gale->value(DyadicWord(), prec); }, opts, false);
  return out;
}

Enclosure growth_constant(long precision) {
  return (log(Enclosure(Rational(25), precision)) - Rational(1)) * Rational(1, 2);
}

Walk diagonal_walk(const CFGale& d, const Schedule& sched, std::size_t depth, const CertifyOptions& opts) {
  if (depth > sched.depth()) throw std::invalid_argument("walk deeper than the schedule");
  Walk out;
  CFWord v;
  for (std::size_t k = 1; k <= depth; ++k) {
    std::optional<Verdict> chosen;
    for (Integer i = sched.lower(k); i <= sched.upper(k) && !chosen; ++i) {
      CFWord child = v.child(i);
      Verdict step = certify_positive(
          "d(" + word_label(child) + ") < d(" + word_label(v) + ")/c",
          [&](long prec) { return d.value(v, prec) / growth_constant(prec) - d.value(child, prec); }, opts, true);
      if (step.proved()) {
        chosen = std::move(step);
        v = child;
      }
    }
    if (!chosen) throw std::runtime_error("indeterminate at node " + word_label(v) + "; raise precision");
    out.steps.push_back(std::move(*chosen));
  }
  out.path = v;
  out.trace = run_capital_trace(d, v, opts.precision);

  Verdict decay;
  decay.claim = "d(v_n) c^n < d(lambda) along the walk";
  decay.status = Status::kProved;
  decay.precision = opts.precision;
  for (std::size_t n = 1; n <= depth; ++n) {
    CFWord vn = v.prefix(n);
    Verdict step = certify_positive(
        decay.claim,
        [&](long prec) {
          Enclosure cn = Enclosure(Rational(1), prec);
          Enclosure c = growth_constant(prec);
          for (std::size_t j = 0; j < n; ++j) cn *= c;
          return d.value(CFWord(), prec) - d.value(vn, prec) * cn;
        },
        opts, true);
    decay.lo = step.lo;
    decay.hi = step.hi;
    decay.precision = std::max(decay.precision, step.precision);
    if (!step.proved()) {
      decay.status = step.status;
      decay.detail = "fails at n = " + std::to_string(n);
      break;
    }
  }
  if (depth == 0) decay.detail = "empty walk";
  out.decay = std::move(decay);
  return out;
}

Verdict verify_level_growth(const Schedule& sched, const CFWord& v, const CertifyOptions& opts,
                            const std::optional<Rational>& constant) {
  std::size_t k = v.rank() + 1;
  require_level(sched, k);
  const Integer& a = sched.lower(k);
  const Integer& b = sched.upper(k);
  Fan fan(v, a, b);
  auto c = [&](long prec) { return constant ? Enclosure(*constant, prec) : growth_constant(prec); };
  const std::string claim = "sum gamma^(1/2) over Fan(" + v.str() + ", a_" + std::to_string(k) + ", b_" +
                            std::to_string(k) + ") > c gamma^(1/2)(" + v.str() + ")";
  if (b - a + 1 <= kLargeFanTerms) {
    Verdict out = certify_positive(
        claim,
        [&](long prec) {
          return gauss_power_sum(fan, Rational(1, 2), prec) - c(prec) * sqrt(gauss(v, prec));
        },
        opts, true);
    out.detail = "term by term";
    return out;
  }
  // gamma([v,i])/gamma(v) lies in [mu ratio/2, 2 mu ratio] and the mu ratio in
  // [1/((i+1)(i+2)), 2/(i(i+1))], so the fan ratio lies in
  // [ln((b+3)/(a+2))/sqrt 2, 2 sum_{i=a}^{b} 1/i].
  const long prec = opts.precision;
  Enclosure lower = log(Enclosure(make_rational(b + 3, a + 2), prec)) / sqrt(Enclosure(Rational(2), prec));
  Enclosure upper = a == 1 ? (log(Enclosure(Rational(b), prec)) + Rational(1)) * Rational(2)
                           : log(Enclosure(make_rational(b, a - 1), prec)) * Rational(2);
  Enclosure cc = c(prec);
  Verdict out = decide_positive(claim, lower - cc, true);
  if (!out.proved()) {
    Verdict up = decide_positive(claim, cc - upper, true);
    if (up.proved()) {
      out.status = Status::kRefuted;
      out.lo = up.lo;
      out.hi = up.hi;
    }
  }
  out.detail = "harmonic bounds";
  return out;
}

}  // namespace cfdim
