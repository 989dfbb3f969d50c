#include "cfdim/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

#include "cfdim/construction.hpp"
#include "cfdim/cylinder.hpp"
#include "cfdim/dyadic_bridge.hpp"
#include "cfdim/gales.hpp"
#include "cfdim/measure.hpp"

namespace cfdim {

namespace {

// Seeded corpus generator. Draws are mapped to ranges by rejection so the
// corpus depends only on the seed and the 64-bit Mersenne Twister stream.
class Corpus {
 public:
  Corpus(std::uint64_t seed, std::uint64_t stream) : gen_(seed * 0x9E3779B97F4A7C15ull + stream) {}

  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do r = gen_();
    while (r >= limit);
    return r % n;
  }
  std::uint64_t range(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

  CFWord word(std::size_t min_rank, std::size_t max_rank, std::uint64_t max_digit) {
    std::size_t rank = range(min_rank, max_rank);
    std::vector<Integer> d;
    for (std::size_t i = 0; i < rank; ++i) d.emplace_back(static_cast<unsigned long>(range(1, max_digit)));
    return CFWord(std::move(d));
  }

  // Digits mostly small so that patched and set-gale subtrees are visited.
  CFWord mixed_word(std::size_t max_rank) {
    std::size_t rank = range(0, max_rank);
    std::vector<Integer> d;
    for (std::size_t i = 0; i < rank; ++i) {
      std::uint64_t top = below(4) == 0 ? 1000 : 5;
      d.emplace_back(static_cast<unsigned long>(range(1, top)));
    }
    return CFWord(std::move(d));
  }

  RatInterval interval() {
    std::uint64_t den = range(2, 1000000000000ull);
    std::uint64_t a = range(0, den - 1);
    std::uint64_t b = range(a + 1, den);
    return RatInterval(make_rational(Integer(static_cast<unsigned long>(a)), Integer(static_cast<unsigned long>(den))),
                       make_rational(Integer(static_cast<unsigned long>(b)), Integer(static_cast<unsigned long>(den))));
  }

  DyadicWord bits(std::size_t min_len, std::size_t max_len) {
    std::size_t len = range(min_len, max_len);
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s += below(2) ? '1' : '0';
    return DyadicWord(s);
  }

 private:
  std::mt19937_64 gen_;
};

double as_double(const std::string& s) {
  if (s.empty()) return 0;
  if (s.find('/') != std::string::npos) {
    try {
      return parse_rational(s).get_d();
    } catch (...) {
      return 0;
    }
  }
  return std::strtod(s.c_str(), nullptr);
}

constexpr std::size_t kListedFailures = 25;

// Aggregates the verdicts of one property over a corpus. The witness lo/hi
// is the tightest proved instance, or the first failing one.
class Claim {
 public:
  Claim(Report& report, std::string id, std::string anchor)
      : report_(report), start_(std::chrono::steady_clock::now()) {
    result_.id = std::move(id);
    result_.anchor = std::move(anchor);
    result_.precision = report.config.precision;
  }
  Claim(const Claim&) = delete;
  Claim& operator=(const Claim&) = delete;
  ~Claim() { finish(); }

  void add(const Verdict& v, const std::string& label) {
    const std::string instance = label.size() > 96 ? label.substr(0, 93) + "..." : label;
    ++result_.instances;
    switch (v.status) {
      case Status::kProved: {
        ++result_.proved;
        double key = as_double(v.lo);
        if (!have_failure_ && (!have_witness_ || key < witness_key_)) {
          witness_key_ = key;
          have_witness_ = true;
          result_.lo = v.lo;
          result_.hi = v.hi;
          witness_detail_ = instance;
        }
        if (v.precision > result_.precision) result_.precision = v.precision;
        return;
      }
      case Status::kRefuted:
        ++result_.refuted;
        break;
      case Status::kIndeterminate:
        ++result_.indeterminate;
        break;
    }
    if (!have_failure_) {
      have_failure_ = true;
      result_.lo = v.lo;
      result_.hi = v.hi;
      witness_detail_ = instance + (v.detail.empty() ? "" : ": " + v.detail);
    }
    if (listed_ < kListedFailures) {
      ClaimResult r;
      char buf[16];
      std::snprintf(buf, sizeof buf, "/%05llu", static_cast<unsigned long long>(result_.instances));
      r.id = result_.id + buf;
      r.anchor = result_.anchor;
      r.status = v.status;
      r.lo = v.lo;
      r.hi = v.hi;
      r.precision = v.precision;
      r.instances = 1;
      (v.status == Status::kRefuted ? r.refuted : r.indeterminate) = 1;
      r.detail = instance + (v.detail.empty() ? "" : ": " + v.detail);
      failures_.push_back(std::move(r));
      ++listed_;
    }
  }

  void add_exact(bool holds, const std::string& instance, const std::string& lo = "", const std::string& hi = "") {
    Verdict v;
    v.status = holds ? Status::kProved : Status::kRefuted;
    v.lo = lo;
    v.hi = hi;
    v.precision = 0;
    v.detail = holds ? "" : "exact check failed";
    add(v, instance);
  }

  void note(std::string detail) { extra_ = std::move(detail); }

 private:
  void finish() {
    if (result_.refuted) result_.status = Status::kRefuted;
    else if (result_.indeterminate || result_.instances == 0) result_.status = Status::kIndeterminate;
    else result_.status = Status::kProved;
    std::string d = std::to_string(result_.proved) + "/" + std::to_string(result_.instances) + " proved";
    if (!witness_detail_.empty()) d += (have_failure_ ? "; first failure " : "; tightest ") + witness_detail_;
    if (!extra_.empty()) d += "; " + extra_;
    result_.detail = d;
    if (report_.config.timing) {
      auto dt = std::chrono::steady_clock::now() - start_;
      result_.ms = std::chrono::duration<double, std::milli>(dt).count();
    }
    report_.claims.push_back(std::move(result_));
    for (auto& f : failures_) report_.claims.push_back(std::move(f));
  }

  Report& report_;
  ClaimResult result_;
  std::vector<ClaimResult> failures_;
  std::chrono::steady_clock::time_point start_;
  bool have_witness_ = false;
  bool have_failure_ = false;
  double witness_key_ = 0;
  std::string witness_detail_;
  std::string extra_;
  std::size_t listed_ = 0;
};

std::size_t sized(const RunConfig& c, std::size_t full, std::size_t quick) { return c.quick ? quick : full; }

// ---- kraaikamp --------------------------------------------------------------

void suite_kraaikamp(Report& r, const RunConfig& cfg) {
  {
    Claim claim(r, "kraaikamp.identity", "child length ratio (s+1)/((s+i)(s+i+1)) times mu(v) equals mu([v,i])");
    Corpus rng(cfg.seed, 1);
    const std::size_t n = sized(cfg, 10000, 1000);
    for (std::size_t t = 0; t < n; ++t) {
      CFWord v = rng.word(0, 20, 1000000);
      Integer i = static_cast<unsigned long>(rng.range(1, 1000000));
      Rational lhs = lebesgue_ratio(v, i) * lebesgue(v);
      Rational rhs = lebesgue(v.child(i));
      claim.add_exact(lhs == rhs, "v=" + v.str() + " i=" + to_string(i));
    }
  }
  {
    Claim claim(r, "kraaikamp.additivity", "mu(v) = sum_{i<=M} mu([v,i]) + mu(Fan(v,M+1,inf))");
    Corpus rng(cfg.seed, 2);
    const std::size_t n = sized(cfg, 1000, 100);
    for (std::size_t t = 0; t < n; ++t) {
      CFWord v = rng.word(0, 10, 1000);
      Integer m = static_cast<unsigned long>(rng.range(1, 200));
      Rational sum = lebesgue(Fan(v, m + 1));
      for (Integer i = 1; i <= m; ++i) sum += lebesgue(v.child(i));
      claim.add_exact(sum == lebesgue(v), "v=" + v.str() + " M=" + to_string(m));
    }
  }
}

// ---- measure-bounds ---------------------------------------------------------

void suite_measure_bounds(Report& r, const RunConfig& cfg) {
  const std::size_t n = sized(cfg, 1000, 200);
  const CertifyOptions opts = cfg.certify();
  {
    Claim claim(r, "measure.lebesgue-gauss", "mu(B)/(2 ln 2) <= gamma(B) <= mu(B)/ln 2");
    Corpus rng(cfg.seed, 10);
    for (std::size_t t = 0; t < n; ++t) {
      RatInterval x = t % 2 == 0 ? cylinder(rng.word(0, 8, 1000)) : rng.interval();
      claim.add(check_lebesgue_gauss_bound(x, opts), x.str());
    }
  }
  {
    Claim claim(r, "measure.product-bounds", "prod 1/((a_i+1)(a_i+2)) <= mu(v) <= prod 2/(a_i(a_i+1))");
    Corpus rng(cfg.seed, 11);
    for (std::size_t t = 0; t < n; ++t) {
      CFWord v = rng.word(1, 20, 1000000);
      claim.add(check_kraaikamp_product_bounds(v), v.str());
    }
  }
  {
    Claim claim(r, "measure.fan-bound", "mu(Fan(v,a,b)) <= (2/a) prod 2/(v_i(v_i+1))");
    Corpus rng(cfg.seed, 12);
    for (std::size_t t = 0; t < n; ++t) {
      CFWord v = rng.word(0, 10, 1000);
      Integer a = static_cast<unsigned long>(rng.range(1, 1000000));
      Integer b = a + static_cast<unsigned long>(rng.range(1, 1000000));
      Fan f(v, a, b);
      claim.add(fan_lebesgue_bound(f).verdict, f.str());
    }
  }
  Corpus rng(cfg.seed, 13);
  std::vector<RatInterval> corpus;
  for (std::size_t t = 0; t < n; ++t) corpus.push_back(rng.interval());
  {
    Claim claim(r, "measure.largest-dyadic", "largest dyadic subinterval has length >= mu(x)/4");
    for (const auto& x : corpus) {
      DyadicWord w = largest_dyadic_inside(x);
      bool inside = x.lo <= w.lo() && w.hi() <= x.hi;
      claim.add_exact(inside && w.measure() >= x.length() / 4, x.str(), to_string(w.measure()),
                      to_string(Rational(x.length() / 4)));
    }
  }
  {
    Claim claim(r, "measure.two-cell-cover", "two consecutive dyadic cells of length <= 2 mu(x) cover x");
    for (const auto& x : corpus) {
      DyadicPair p = two_dyadic_cover(x);
      bool covers = p.first.lo() <= x.lo && x.hi <= p.second.hi() && p.first.hi() == p.second.lo();
      claim.add_exact(covers && p.first.measure() <= 2 * x.length(), x.str(), to_string(p.first.measure()),
                      to_string(Rational(2 * x.length())));
    }
  }
  {
    Claim claim(r, "measure.fan-growth", "sum_{i=a}^{50a} gamma^(1/2)([v,i]) > 0.5 (ln 25 - 1) gamma^(1/2)(v)");
    Corpus grng(cfg.seed, 14);
    const std::size_t m = sized(cfg, 20, 5);
    for (std::size_t t = 0; t < m; ++t) {
      CFWord v = grng.word(0, 5, 20);
      Integer a = static_cast<unsigned long>(grng.range(1, 20));
      Fan f(v, a, 50 * a);
      claim.add(certify_positive(
                    "fan growth",
                    [&](long prec) {
                      return gauss_power_sum(f, Rational(1, 2), prec) - growth_constant(prec) * sqrt(gauss(v, prec));
                    },
                    opts),
                f.str());
    }
  }
}

// ---- encoding ---------------------------------------------------------------

std::string digits_str(std::span<const std::uint64_t> d) {
  std::string s = "[";
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
  return s + "]";
}

void suite_encoding(Report& r, const RunConfig& cfg) {
  {
    const unsigned max_rank = cfg.quick ? 3 : 5;
    Claim round(r, "encoding.exhaustive", "decode(encode(v)) = v for every word with rank <= 5 and digits <= 50");
    Claim cross(r, "encoding.cross-check", "fixed-width and general encoders agree");
    std::uint64_t count = 0, bad = 0, tags[3] = {0, 0, 0};
    std::string first_bad;
    std::vector<std::uint64_t> back;
    for_each_compact_code(max_rank, 50, [&](std::span<const std::uint64_t> digits, const CompactCode& code) {
      ++count;
      if (code.tag < 3) ++tags[code.tag];
      if (!decode_compact(code, back) || !std::equal(back.begin(), back.end(), digits.begin(), digits.end())) {
        if (bad++ == 0) first_bad = digits_str(digits);
      }
      if (count % 65536 == 1) {
        std::vector<Integer> big(digits.begin(), digits.end());
        CFWord v(std::move(big));
        Encoding e = encode_full(v);
        bool same = e.prefix.length() == code.length && e.tag == code.tag &&
                    e.prefix.index() == Integer(static_cast<unsigned long>(code.index));
        cross.add_exact(same && decode(e) == v, v.str());
      }
    });
    // One aggregated instance per word is too many to list; record counts.
    Verdict v;
    v.status = bad == 0 ? Status::kProved : Status::kRefuted;
    v.lo = std::to_string(count - bad);
    v.hi = std::to_string(count);
    v.precision = 0;
    v.detail = bad ? "first mismatch " + first_bad : "";
    round.add(v, std::to_string(count) + " words");
    round.note("tags 0/1/2: " + std::to_string(tags[0]) + "/" + std::to_string(tags[1]) + "/" +
               std::to_string(tags[2]));
  }
  Corpus rng(cfg.seed, 20);
  const std::size_t n = sized(cfg, 10000, 1000);
  std::vector<CFWord> words;
  for (std::size_t t = 0; t < n; ++t) words.push_back(rng.word(1, 12, 1000000));
  {
    Claim claim(r, "encoding.random", "decode(encode(v)) = v on random words");
    for (const auto& v : words) {
      std::string code = encode_full(v).code();
      claim.add_exact(decode(code) == v, v.str(), code.size() > 64 ? code.substr(0, 64) + "..." : code);
    }
  }
  {
    Claim claim(r, "encoding.prefix-measure", "mu(E(v)) >= mu(v)/4");
    for (const auto& v : words) {
      DyadicWord e = encode_E(v);
      claim.add_exact(e.measure() >= lebesgue(v) / 4 && cylinder(v).closure_contains(e.interval()), v.str());
    }
  }
  {
    Claim claim(r, "encoding.preimages", "at most three words share an E-prefix");
    const std::size_t m = sized(cfg, 2000, 200);
    for (std::size_t t = 0; t < m; ++t) {
      const CFWord& v = words[t];
      std::vector<CFWord> pre = preimages_of(encode_E(v));
      bool has = std::find(pre.begin(), pre.end(), v) != pre.end();
      claim.add_exact(pre.size() <= 3 && has, v.str(), std::to_string(pre.size()), "3");
    }
    Corpus brng(cfg.seed, 21);
    for (std::size_t t = 0; t < m; ++t) {
      DyadicWord b = brng.bits(1, 24);
      std::vector<CFWord> pre = preimages_of(b);
      claim.add_exact(pre.size() <= 3, b.display(), std::to_string(pre.size()), "3");
    }
  }
}

// ---- division ---------------------------------------------------------------

bool tiles(const std::vector<Piece>& parts, const Rational& lo, const Rational& hi) {
  Rational at = lo;
  for (const auto& p : parts) {
    RatInterval x = piece_interval(p);
    if (x.lo != at || x.lo >= x.hi) return false;
    at = x.hi;
  }
  return at == hi;
}

bool same_piece(const Piece& a, const Piece& b) { return piece_str(a) == piece_str(b); }

// parts(w0) ++ parts(w1) equals parts(w) with the single piece holding the
// midpoint in its interior replaced by a tiling of it by finer pieces.
bool refines_once(const Decomposition& parent, const Decomposition& left, const Decomposition& right) {
  std::vector<Piece> joined = left.parts;
  joined.insert(joined.end(), right.parts.begin(), right.parts.end());
  const auto& p = parent.parts;
  std::size_t head = 0;
  while (head < p.size() && head < joined.size() && same_piece(p[head], joined[head])) ++head;
  std::size_t tail = 0;
  while (tail + head < p.size() && tail + head < joined.size() &&
         same_piece(p[p.size() - 1 - tail], joined[joined.size() - 1 - tail]))
    ++tail;
  if (head + tail != p.size() - 1) return false;
  const Piece& u = p[head];
  RatInterval ux = piece_interval(u);
  if (!ux.interior_contains(parent.source.midpoint())) return false;
  std::vector<Piece> middle(joined.begin() + static_cast<long>(head), joined.end() - static_cast<long>(tail));
  if (middle.size() < 2) return false;
  for (const auto& q : middle) {
    if (!piece_root(u).is_prefix_of(piece_root(q))) return false;
  }
  return tiles(middle, ux.lo, ux.hi);
}

void suite_division(Report& r, const RunConfig& cfg) {
  const std::size_t depth = cfg.quick ? 10 : 14;
  Claim tiling(r, "division.tiling", "divide(w) tiles C_w up to its endpoints");
  Claim measure(r, "division.measure", "sum of mu over divide(w) equals 2^-|w|");
  Claim refine(r, "division.refinement", "divide(w0) and divide(w1) refine divide(w) at exactly one piece");
  Claim disjoint(r, "division.disjoint", "divide(w0) and divide(w1) share no piece");
  Claim rank(r, "division.rank", "members of divide(w) have bounded rank");
  Claim direct(r, "division.direct", "divide(w) from the root equals the level-by-level refinement");

  auto check = [&](const Decomposition& d) {
    const DyadicWord& w = d.source;
    tiling.add_exact(tiles(d.parts, w.lo(), w.hi()), w.display());
    Rational total = 0;
    std::size_t max_rank = 0;
    for (const auto& p : d.parts) {
      total += piece_lebesgue(p);
      max_rank = std::max(max_rank, piece_root(p).rank() + (std::holds_alternative<Fan>(p) ? 1 : 0));
    }
    measure.add_exact(total == w.measure(), w.display(), to_string(total), to_string(w.measure()));
    return max_rank;
  };

  std::vector<Decomposition> level{divide(DyadicWord())};
  std::size_t worst = check(level[0]);
  std::uint64_t visited = 0;
  for (std::size_t k = 0; k < depth; ++k) {
    std::vector<Decomposition> next;
    next.reserve(level.size() * 2);
    std::size_t level_rank = 0;
    for (const auto& d : level) {
      auto [l, rr] = divide_children(d);
      level_rank = std::max({level_rank, check(l), check(rr)});
      refine.add_exact(refines_once(d, l, rr), d.source.display());
      bool shared = false;
      for (const auto& a : l.parts) {
        for (const auto& b : rr.parts) shared = shared || same_piece(a, b);
      }
      RatInterval last = piece_interval(l.parts.back());
      RatInterval first = piece_interval(rr.parts.front());
      disjoint.add_exact(!shared && last.hi <= first.lo, d.source.display());
      for (const auto* c : {&l, &rr}) {
        if (++visited % 1024 == 0) {
          Decomposition fresh = divide(c->source);
          bool same = fresh.parts.size() == c->parts.size();
          for (std::size_t i = 0; same && i < fresh.parts.size(); ++i) same = same_piece(fresh.parts[i], c->parts[i]);
          direct.add_exact(same, c->source.display());
        }
      }
      next.push_back(std::move(l));
      next.push_back(std::move(rr));
    }
    rank.add_exact(level_rank < std::numeric_limits<std::size_t>::max(), "depth " + std::to_string(k + 1),
                   std::to_string(level_rank), "");
    worst = std::max(worst, level_rank);
    level = std::move(next);
  }
  rank.note("max rank " + std::to_string(worst) + " up to depth " + std::to_string(depth));
}

// ---- gales ------------------------------------------------------------------

struct CFGales {
  std::vector<std::pair<std::string, CFGalePtr>> all;
};

CFGales make_cf_gales(const RunConfig& cfg) {
  const Rational half(1, 2);
  CFGalePtr g = gauss_gale(half);
  std::vector<GalePatch> patches{
      {Fan(CFWord(), 1, Integer(1)), Rational(3, 2)},
      {Fan(CFWord(), 2), std::nullopt},
      {Fan(CFWord{1}, 1, Integer(3)), Rational(1, 2)},
      {Fan(CFWord{1}, 4), std::nullopt},
      {Fan(CFWord{2, 3}, 5, Integer(5)), Rational(2)},
      {Fan(CFWord{2, 3}, 6, Integer(10)), std::nullopt},
  };
  CFGalePtr mod = modified_gale(g, patches, cfg.precision);
  CFGalePtr set = set_gale({CFWord{1, 2}, CFWord{3}, CFWord{2, 1, 4}}, Rational(2, 5), half);
  CFGalePtr mix = combine_gales({g, set, mod}, {Rational(1, 2), Rational(1, 4), Rational(1, 8)});
  return {{{"gauss", g}, {"modified", mod}, {"set", set}, {"combined", mix}}};
}

void check_binary(Claim& claim, const BinGale& h, std::size_t depth, const CertifyOptions& opts) {
  std::vector<DyadicWord> level{DyadicWord()};
  for (std::size_t k = 0; k < depth; ++k) {
    std::vector<DyadicWord> next;
    for (const auto& w : level) {
      claim.add(check_bin_gale_condition(h, w, opts), w.display());
      next.push_back(w.child('0'));
      next.push_back(w.child('1'));
    }
    level = std::move(next);
  }
}

// A cover meeting its budgets at s = 2/5: two words at level 2, one at level 4.
Cover budget_cover() {
  Cover c;
  c.s = Rational(2, 5);
  c.levels[2] = explicit_level({DyadicWord("0110100110"), DyadicWord("1011001110")});
  c.levels[3] = explicit_level({DyadicWord("01")});
  c.levels[4] = explicit_level({DyadicWord("0110100110010110")});
  return c;
}

void suite_gales(Report& r, const RunConfig& cfg) {
  const CertifyOptions opts = cfg.certify();
  CFGales gales = make_cf_gales(cfg);
  Corpus rng(cfg.seed, 30);
  const std::size_t n = sized(cfg, 200, 20);
  std::vector<CFWord> nodes;
  for (std::size_t t = 0; t < n; ++t) nodes.push_back(rng.mixed_word(6));
  for (const auto& [name, d] : gales.all) {
    Claim claim(r, "gales." + name + ".condition", "d(v) gamma(v)^s = sum_i d([v,i]) gamma([v,i])^s");
    for (const auto& v : nodes) claim.add(check_gale_condition(*d, v, cfg.truncation, opts), v.str());
  }

  const std::size_t depth = cfg.quick ? 6 : 10;
  {
    BinGalePtr h = proportional_gale(gauss_gale(Rational(2, 5)));
    {
      Claim claim(r, "gales.proportional.condition", "h(w0) + h(w1) = 2^s h(w)");
      check_binary(claim, *h, depth, opts);
    }
    Claim claim(r, "gales.proportional.initial-capital", "H_d(lambda) = d(lambda)");
    CFGalePtr d = gauss_gale(Rational(2, 5));
    claim.add(certify_equal(
                  "initial capital",
                  [&](long prec) { return std::make_pair(h->value(DyadicWord(), prec), d->value(CFWord(), prec)); },
                  opts),
              "lambda");
  }
  {
    Cover cover = budget_cover();
    BinGalePtr h = cover_to_gale(cover);
    {
      Claim claim(r, "gales.cover.condition", "h(w0) + h(w1) = 2^s h(w)");
      check_binary(claim, *h, depth, opts);
      Schedule sched = build_schedule(cfg.schedule_s, std::min<std::size_t>(cfg.schedule_depth, 2));
      Cover from_schedule;
      from_schedule.s = sched.s;
      for (std::size_t k = 1; k <= sched.depth(); ++k) {
        from_schedule.levels[static_cast<long>(2 * k)] = binary_level_cover(sched, k, opts).level;
      }
      check_binary(claim, *cover_to_gale(from_schedule), depth, opts);
    }
    {
      Claim claim(r, "gales.cover.budgets", "level masses below 2^-n");
      claim.add(check_cover_budgets(cover, cfg.precision), "budget cover");
    }
    {
      Claim claim(r, "gales.cover.initial-capital", "d(lambda) <= 1 when level budgets are met");
      claim.add(certify_positive(
                    "initial capital",
                    [&](long prec) { return Rational(1) - h->value(DyadicWord(), prec); }, opts, false),
                "budget cover");
    }
  }
  if (cfg.schedule_depth >= 3) {
    // The symbolic level B_3: exact wherever the local member search completes.
    Schedule sched = build_schedule(cfg.schedule_s, 3);
    BinGalePtr h = level_gale(symbolic_level(sched, 3), sched.s);
    Claim claim(r, "gales.cover.symbolic", "h(w0) + h(w1) = 2^s h(w) near points of the counterexample set");
    Corpus prng(cfg.seed, 31);
    const std::size_t points = sized(cfg, 6, 2);
    for (std::size_t t = 0; t < points; ++t) {
      std::vector<Integer> digits;
      for (std::size_t k = 1; k <= 3; ++k) digits.push_back(sched.lower(k) + Integer(static_cast<unsigned long>(prng.below(1000000))));
      digits.push_back(2);
      RatInterval c = cylinder(CFWord(digits));
      Rational x = (c.lo + c.hi) / 2;
      DyadicWord deep = DyadicWord::from_index(floor(x * Rational(Integer(1) << 256)), 256);
      std::size_t top = 0;
      for (std::size_t len = 1; len <= deep.length(); ++len) {
        if (h->value(deep.prefix(len), 64).is_point()) {
          top = len;
          break;
        }
      }
      for (std::size_t len = top; len < top + 12 && len < deep.length(); ++len) {
        claim.add(check_bin_gale_condition(*h, deep.prefix(len), opts), deep.prefix(len).display());
      }
    }
  }
}

void suite_smoothing(Report& r, const RunConfig& cfg) {
  const CertifyOptions opts = cfg.certify();
  BinGalePtr base = proportional_gale(gauss_gale(Rational(2, 5)));
  BinGalePtr h = smoothed_gale(base, Rational(1, 2), cfg.n_max);
  {
    Claim claim(r, "smoothing.condition", "S_h(w0) + S_h(w1) = 2^s S_h(w)");
    check_binary(claim, *h, cfg.quick ? 5 : 10, opts);
  }
  {
    Claim claim(r, "smoothing.tail", "evaluations with N and 2N explicit terms intersect");
    BinGalePtr wide = smoothed_gale(base, Rational(1, 2), 2 * cfg.n_max);
    Corpus rng(cfg.seed, 40);
    const std::size_t n = sized(cfg, 16, 4);
    for (std::size_t t = 0; t < n; ++t) {
      DyadicWord w = rng.bits(0, 12);
      Enclosure a = h->value(w, cfg.precision);
      Enclosure b = wide->value(w, cfg.precision);
      Verdict v = decide_equal("tail", a, b, opts.equality_tolerance);
      if (v.indeterminate() && intersect(a, b)) v.status = Status::kProved;
      claim.add(v, w.display());
    }
  }
}

// ---- kolmogorov -------------------------------------------------------------

void suite_kolmogorov(Report& r, const RunConfig& cfg) {
  const CertifyOptions opts = cfg.certify();
  CFGales gales = make_cf_gales(cfg);
  const std::size_t wanted = sized(cfg, 200, 40);
  const std::size_t max_level = 9;

  std::vector<std::vector<Piece>> unions(max_level + 1);
  std::vector<Decomposition> level{divide(DyadicWord())};
  unions[0] = level[0].parts;
  for (std::size_t k = 1; k <= max_level; ++k) {
    std::vector<Decomposition> next;
    for (const auto& d : level) {
      auto [a, b] = divide_children(d);
      next.push_back(std::move(a));
      next.push_back(std::move(b));
    }
    for (const auto& d : next) unions[k].insert(unions[k].end(), d.parts.begin(), d.parts.end());
    level = std::move(next);
  }

  std::vector<CFWord> roots{CFWord()};
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (roots[i].rank() == 3) continue;
    for (long a = 1; a <= 4; ++a) roots.push_back(roots[i].child(a));
  }
  std::vector<std::pair<CFWord, std::vector<Piece>>> decompositions;
  for (std::size_t k = 1; k <= max_level && decompositions.size() < wanted; ++k) {
    for (const auto& v : roots) {
      if (decompositions.size() >= wanted) break;
      std::vector<Piece> inside;
      for (const auto& p : unions[k]) {
        if (v.is_prefix_of(piece_root(p))) {
          inside.push_back(p);
        }
      }
      if (inside.size() < 2 || !is_decomposition_of(v, inside)) continue;
      decompositions.emplace_back(v, std::move(inside));
    }
  }
  for (const auto& [name, d] : gales.all) {
    Claim claim(r, "kolmogorov." + name, "d(v) gamma(v)^s = sum over a decomposition of C_v");
    for (const auto& [v, pieces] : decompositions) {
      claim.add(check_kolmogorov_equality(*d, v, pieces, opts), v.str() + " (" + std::to_string(pieces.size()) + " pieces)");
    }
    if (decompositions.size() < wanted) claim.note("only " + std::to_string(decompositions.size()) + " decompositions");
  }
}

// ---- pipeline ---------------------------------------------------------------

void suite_pipeline(Report& r, const RunConfig& cfg) {
  const CertifyOptions opts = cfg.certify();
  Pipeline p = cf_to_binary_pipeline(gauss_gale(Rational(2, 5)), Rational(1, 2), cfg.n_max);
  Claim claim(r, "pipeline.inequality", "h(b) >= c3 d(v), c3 = 2^(5(s-1)) 2^(-(2s+1)) (2 ln 2)^(-s)");
  Corpus rng(cfg.seed, 50);
  const std::size_t n = sized(cfg, 500, 50);
  for (std::size_t t = 0; t < n; ++t) {
    CFWord v = rng.word(0, 3, 12);
    RatInterval c = cylinder(v);
    Rational mu = c.length();
    // Lengths l with mu/16 <= 2^-l <= 2 mu.
    long lmin = 0;
    while (pow2(-lmin) > 2 * mu) ++lmin;
    long lmax = lmin;
    while (pow2(-(lmax + 1)) >= mu / 16) ++lmax;
    long l = lmin + static_cast<long>(rng.below(static_cast<std::uint64_t>(lmax - lmin + 1)));
    Rational scale(Integer(1) << static_cast<mp_bitcnt_t>(l));
    Integer first = floor(c.lo * scale);
    Integer last = ceil(c.hi * scale) - 1;
    Integer span = last - first;
    Integer m = first + Integer(static_cast<unsigned long>(rng.below(span.get_ui() + 1)));
    DyadicWord b = DyadicWord::from_index(m, static_cast<std::size_t>(l));
    if (!in_pipeline_window(v, b)) {
      claim.add_exact(false, "generator left the window: " + v.str() + " " + b.display());
      continue;
    }
    claim.add(check_pipeline_inequality(p, v, b, opts), "v=" + v.str() + " b=" + b.display());
  }
}

// ---- counterexample ---------------------------------------------------------

void suite_counterexample(Report& r, const RunConfig& cfg) {
  const CertifyOptions opts = cfg.certify();
  Schedule sched = build_schedule(cfg.schedule_s, cfg.schedule_depth);
  const std::size_t depth = sched.depth();
  {
    Claim claim(r, "construct.schedule", "a_k >= 2 (k prod 100 a_i)^(1/s) > a_k - 1 and a_k increasing");
    for (std::size_t k = 2; k <= depth; ++k) {
      Enclosure t = schedule_target(sched, k, cfg.precision);
      Verdict v = decide_positive("schedule", Enclosure(Rational(sched.lower(k)), cfg.precision) - t, false);
      if (v.proved() && !t.greater_than(Rational(sched.lower(k) - 1))) v.status = Status::kRefuted;
      if (sched.lower(k) <= sched.lower(k - 1)) v.status = Status::kRefuted;
      claim.add(v, "k=" + std::to_string(k) + " a_k=" + to_string(sched.lower(k)));
    }
  }
  for (std::size_t k = 1; k <= depth; ++k) {
    LevelMass m = level_cover_mass(sched, k, opts);
    const std::string ks = std::to_string(k);
    {
      Claim claim(r, "construct.level-mass.k" + ks, "sum of mu^s over S_k <= 1/k");
      claim.add(m.verdict, "k=" + ks + " (" + m.verdict.detail + ")");
    }
    if (m.enumerated) {
      Claim claim(r, "construct.level-mass.k" + ks + "-enumerated", "sum of mu^s over S_k <= 1/k by enumeration");
      const Rational budget(1, static_cast<long>(k));
      claim.add(certify_positive(
                    "enumerated level mass",
                    [&](long prec) {
                      LevelMass again = level_cover_mass(sched, k, CertifyOptions{prec, 0, opts.equality_tolerance});
                      return budget - *again.enumerated;
                    },
                    opts, false),
                "k=" + ks + " (" + to_string(m.members) + " members)");
    }
    if (m.enumerated) {
      Claim claim(r, "construct.majorization.k" + ks, "analytic level bound dominates the enumerated mass");
      claim.add(decide_positive("majorization", m.analytic - *m.enumerated, false), "k=" + ks);
    }
    if (k == 1 && m.enumerated) {
      Claim claim(r, "construct.level-mass.k1-width", "level 1 mass (50/51)^s enclosed within 2^-100");
      claim.add_exact(m.enumerated->width() <= pow2(-100), m.enumerated->str(30), m.enumerated->lo_str(30),
                      m.enumerated->hi_str(30));
    }
    BinaryLevel b = binary_level_cover(sched, k, opts);
    Claim claim(r, "construct.binary-level.k" + ks, "sum of 2^(-s|v|) over B_k <= 2^(1+s)/k");
    claim.add(b.verdict, "k=" + ks + " (" + b.verdict.detail + ")");
  }
  {
    Claim initial(r, "construct.counterexample.initial-capital", "d(lambda) <= 1 for the cover gale 2^n d_{B_k}");
    Claim covered(r, "construct.counterexample.capital", "capital >= 2^n on the B_k word over a point of the set");
    try {
      Counterexample c = counterexample_gale(sched, 0, opts);
      initial.add(c.initial_capital, "n=0 k=" + std::to_string(c.k));
      Corpus rng(cfg.seed, 60);
      const std::size_t points = sized(cfg, 8, 2);
      for (std::size_t t = 0; t < points; ++t) {
        std::vector<Integer> digits;
        for (std::size_t k = 1; k <= c.k; ++k) {
          Integer span = sched.upper(k) - sched.lower(k);
          std::uint64_t cap = span.fits_ulong_p() ? span.get_ui() : 1000000000ull;
          digits.push_back(sched.lower(k) + Integer(static_cast<unsigned long>(rng.range(0, cap))));
        }
        digits.push_back(2);
        RatInterval cyl = cylinder(CFWord(digits));
        Rational x = (cyl.lo + cyl.hi) / 2;
        DyadicWord deep = DyadicWord::from_index(floor(x * Rational(Integer(1) << 512)), 512);
        auto member = c.level.level->member_prefix_of(deep);
        if (!member) {
          covered.add_exact(false, "no member over point " + CFWord(digits).str());
          continue;
        }
        Enclosure cap = c.gale->value(*member, cfg.precision);
        covered.add(decide_positive("capital", cap - Rational(1), false), member->display());
      }
    } catch (const std::invalid_argument& e) {
      Verdict v;
      v.detail = e.what();
      initial.add(v, "schedule");
      covered.add(v, "schedule");
    }
  }
  {
    const std::size_t walk_depth = std::min<std::size_t>(3, depth);
    CFGalePtr d = gauss_gale(Rational(1, 2));
    Claim steps(r, "construct.walk.step", "d([v,i]) < d(v)/c with c = 0.5 (ln 25 - 1)");
    Claim decay(r, "construct.walk.decay", "d(v_n) c^n < d(lambda) along the walk");
    Claim inside(r, "construct.walk.digits", "walk digits lie in [a_k, 50 a_k]");
    Claim growth(r, "construct.level-growth", "sum over Fan(v, a_k, b_k) of gamma^(1/2) > c gamma^(1/2)(v)");
    try {
      Walk w = diagonal_walk(*d, sched, walk_depth, opts);
      for (std::size_t k = 1; k <= walk_depth; ++k) {
        steps.add(w.steps[k - 1], w.path.prefix(k).str());
        const Integer& digit = w.path[k - 1];
        inside.add_exact(digit >= sched.lower(k) && digit <= sched.upper(k), w.path.prefix(k).str());
      }
      decay.add(w.decay, w.path.str());
      for (std::size_t k = 0; k < walk_depth; ++k) {
        CFWord v = w.path.prefix(k);
        growth.add(verify_level_growth(sched, v, opts), v.str());
      }
    } catch (const std::runtime_error& e) {
      Verdict v;
      v.detail = e.what();
      steps.add(v, "walk");
    }
  }
}

using SuiteFn = void (*)(Report&, const RunConfig&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"kraaikamp", suite_kraaikamp},   {"measure-bounds", suite_measure_bounds}, {"encoding", suite_encoding},
      {"division", suite_division},     {"gales", suite_gales},                   {"smoothing", suite_smoothing},
      {"kolmogorov", suite_kolmogorov}, {"pipeline", suite_pipeline},             {"counterexample", suite_counterexample},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

bool is_suite(const std::string& name) {
  if (name == "all") return true;
  const auto& n = suite_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

Report run_suite(const std::string& name, const RunConfig& config) {
  config.validate();
  Report report;
  report.suite = name;
  report.config = config;
  bool found = false;
  for (const auto& [suite, fn] : registry()) {
    if (name == "all" || name == suite) {
      fn(report, config);
      found = true;
    }
  }
  if (!found) throw std::invalid_argument("unknown suite: " + name);
  report.sort_claims();
  return report;
}

}  // namespace cfdim
