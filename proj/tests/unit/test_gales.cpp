#include <doctest.h>

#include "cfdim/cylinder.hpp"
#include "cfdim/dyadic_bridge.hpp"
#include "cfdim/gales.hpp"
#include "cfdim/measure.hpp"
#include "support/oracles.hpp"

using namespace cfdim;

namespace {

const Rational kHalf(1, 2);
const Rational kTwoFifths(2, 5);

std::pair<Rational, Rational> gamma_of(const CFWord& v) {
  RatInterval c = cylinder(v);
  return oracle::gauss_bounds(c.lo, c.hi);
}

// Gale whose values on rank-1 words are inflated by 1/1000.
class Inflated final : public CFGale {
 public:
  explicit Inflated(CFGalePtr base) : CFGale(base->s()), base_(std::move(base)) {}
  Enclosure value(const CFWord& v, long prec) const override {
    Enclosure d = base_->value(v, prec);
    return v.rank() == 1 ? d * Rational(1001, 1000) : d;
  }
  Enclosure fan_mass(const Fan& f, long prec) const override { return base_->fan_mass(f, prec); }
  std::string describe() const override { return "inflated"; }

 private:
  CFGalePtr base_;
};

std::vector<Piece> union_of_divisions(std::size_t level) {
  std::vector<Decomposition> row{divide(DyadicWord())};
  for (std::size_t k = 0; k < level; ++k) {
    std::vector<Decomposition> next;
    for (const auto& d : row) {
      auto [l, r] = divide_children(d);
      next.push_back(std::move(l));
      next.push_back(std::move(r));
    }
    row = std::move(next);
  }
  std::vector<Piece> out;
  for (const auto& d : row) out.insert(out.end(), d.parts.begin(), d.parts.end());
  return out;
}

}  // namespace

TEST_CASE("gauss gale values") {
  auto one = gauss_gale(Rational(1));
  CHECK(one->value(CFWord{7, 2}, 128).lo() == 1);
  CHECK(one->value(CFWord{7, 2}, 128).hi() == 1);

  auto g = gauss_gale(kHalf);
  Enclosure d1 = g->value(CFWord{1}, 128);
  auto [lo, hi] = gamma_of(CFWord{1});
  CHECK(oracle::power_consistent(d1.lo(), d1.hi(), lo, hi, 1, 2));
  CHECK(d1.mid_double() == doctest::Approx(0.6442).epsilon(1e-4));
  CHECK(g->value(CFWord(), 128).lo() == 1);
}

TEST_CASE("gale condition verdicts") {
  auto g = gauss_gale(kHalf);
  CHECK(check_gale_condition(*g, CFWord(), Integer(10000)).proved());
  CHECK(check_gale_condition(*g, CFWord{3, 1}, Integer(2000)).proved());

  Inflated bad(g);
  CHECK(check_gale_condition(bad, CFWord(), Integer(1000)).refuted());

  CertifyOptions starved;
  starved.precision = 24;
  starved.max_doublings = 0;
  Verdict v = check_gale_condition(*g, CFWord{2}, Integer(200), starved);
  CHECK(v.indeterminate());
  CHECK(v.detail.find("stalled at precision 24") != std::string::npos);
}

TEST_CASE("modified gales") {
  auto g = gauss_gale(kHalf);
  auto same = modified_gale(g, {});
  Enclosure a = same->value(CFWord{4, 2}, 128), b = g->value(CFWord{4, 2}, 128);
  CHECK(a.lo() == b.lo());
  CHECK(a.hi() == b.hi());

  // Everything on [1]: zero on the other children, [1] takes the balance.
  auto all_in = modified_gale(g, {{Fan(CFWord(), Integer(2)), Rational(0)}, {Fan(CFWord(), Integer(1), Integer(1)), {}}});
  Enclosure d1 = all_in->value(CFWord{1}, 128);
  auto [lo, hi] = gamma_of(CFWord{1});
  CHECK(oracle::power_consistent(d1.lo(), d1.hi(), lo, hi, -1, 2));
  CHECK(all_in->value(CFWord{2, 5}, 128).hi() == 0);
  CHECK(check_gale_condition(*all_in, CFWord(), Integer(1000)).proved());
  CHECK(check_gale_condition(*all_in, CFWord{1}, Integer(1000)).proved());
  CHECK(check_gale_condition(*all_in, CFWord{2}, Integer(1000)).proved());

  try {
    modified_gale(g, {{Fan(CFWord(), Integer(1), Integer(1)), Rational(2)}});
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()) == "gale condition violated at []");
  }
  CHECK_THROWS_AS(modified_gale(g, {{Fan(CFWord(), Integer(1), Integer(3)), Rational(1)},
                                    {Fan(CFWord(), Integer(3)), {}}}),
                  std::invalid_argument);

  // Nested patches: shift mass between two fans under [2], then inside [2,1].
  auto nested = modified_gale(g, {{Fan(CFWord{2}, Integer(1), Integer(3)), Rational(11, 10)},
                                  {Fan(CFWord{2}, Integer(4)), {}},
                                  {Fan(CFWord{2, 1}, Integer(5), Integer(5)), Rational(0)},
                                  {Fan(CFWord{2, 1}, Integer(6), Integer(9)), {}}});
  for (const CFWord& v : {CFWord(), CFWord{2}, CFWord{2, 1}, CFWord{2, 4}, CFWord{2, 1, 7}}) {
    CHECK(check_gale_condition(*nested, v, Integer(500)).proved());
  }
}

TEST_CASE("set gales") {
  auto empty = set_gale({}, kTwoFifths, kHalf);
  CHECK(empty->value(CFWord{3}, 128).hi() == 0);
  CHECK(check_gale_condition(*empty, CFWord(), Integer(10)).proved());

  auto single = set_gale({CFWord{1}}, kTwoFifths, kHalf);
  Enclosure d = single->value(CFWord{1}, 128);
  auto [lo, hi] = gamma_of(CFWord{1});
  CHECK(oracle::power_consistent(d.lo(), d.hi(), lo, hi, -1, 10));

  auto pair = set_gale({CFWord{1}, CFWord{2, 3}}, kTwoFifths, kHalf);
  CHECK(check_gale_condition(*pair, CFWord(), Integer(10000)).proved());
  CHECK(check_gale_condition(*pair, CFWord{1}, Integer(10000)).proved());
  CHECK(check_gale_condition(*pair, CFWord{2}, Integer(1000)).proved());
  CHECK(check_gale_condition(*pair, CFWord{2, 3, 4}, Integer(1000)).proved());
  // The bet pays out on its members.
  for (const CFWord& w : {CFWord{1}, CFWord{2, 3}}) {
    Enclosure kick = pow(gauss(w, 128), Rational(kTwoFifths - kHalf));
    CHECK(pair->value(w, 128).hi() >= kick.lo());
    CHECK_FALSE(pair->value(w, 128).less_than(kick));
  }
  CHECK_THROWS_AS(set_gale({}, kHalf, kHalf), std::invalid_argument);
}

TEST_CASE("combined gales") {
  auto g = gauss_gale(kHalf);
  auto solo = combine_gales({g}, {Rational(1)});
  CHECK(solo->value(CFWord{5}, 128).contains(g->value(CFWord{5}, 128)));

  auto s = set_gale({CFWord{2}}, kTwoFifths, kHalf);
  auto mix = combine_gales({g, s}, {Rational(1, 2), Rational(1, 4)});
  CHECK(unassigned_weight({Rational(1, 2), Rational(1, 4)}) == Rational(1, 4));
  for (const CFWord& v : {CFWord(), CFWord{2}, CFWord{2, 9}, CFWord{1, 1}}) {
    Enclosure expect = g->value(v, 128) * Rational(1, 2) + s->value(v, 128) * Rational(1, 4);
    CHECK(intersect(mix->value(v, 128), expect).has_value());
    CHECK(check_gale_condition(*mix, v, Integer(1000)).proved());
  }
  try {
    combine_gales({g, g}, {Rational(3, 4), Rational(1, 2)});
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()) == "weight overflow");
  }
  CHECK_THROWS_AS(combine_gales({g, gauss_gale(kTwoFifths)}, {kHalf, kHalf}), std::invalid_argument);
}

TEST_CASE("kolmogorov equality") {
  auto g = gauss_gale(kHalf);
  auto s = set_gale({CFWord{1}, CFWord{2, 3}}, kTwoFifths, kHalf);
  CHECK(check_kolmogorov_equality(*g, CFWord{2}, {CFWord{2}}).proved());
  CHECK(check_kolmogorov_equality(*s, CFWord{2}, {Fan(CFWord{2}, Integer(1))}).proved());

  Decomposition zero = divide(DyadicWord("0")), one = divide(DyadicWord("1"));
  std::vector<Piece> both = zero.parts;
  both.insert(both.end(), one.parts.begin(), one.parts.end());
  CHECK(check_kolmogorov_equality(*g, CFWord(), both).proved());
  CHECK(check_kolmogorov_equality(*s, CFWord(), both).proved());

  std::vector<Piece> fine = union_of_divisions(6);
  CHECK(is_decomposition_of(CFWord(), fine));
  CHECK(check_kolmogorov_equality(*s, CFWord(), fine).proved());

  try {
    check_kolmogorov_equality(*g, CFWord(), {Fan(CFWord(), Integer(2))});
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()) == "invalid decomposition");
  }
  CHECK_FALSE(is_decomposition_of(CFWord{2}, {CFWord{2, 1}, Fan(CFWord{2}, Integer(1))}));
  CHECK_FALSE(is_decomposition_of(CFWord{2}, {CFWord{3}}));
}

TEST_CASE("proportional gale") {
  auto g = gauss_gale(kHalf);
  auto h = proportional_gale(g);
  CHECK(h->s() == kHalf);
  Enclosure root = h->value(DyadicWord(), 128);
  CHECK(root.contains(Rational(1)));
  CHECK(root.width() < pow2(-100));

  // I("1") = {[1]}: H("1") = d([1]) (gamma([1]) / (1/2))^{1/2} = 2^{1/2} gamma([1]).
  Enclosure h1 = h->value(DyadicWord("1"), 128);
  auto [lo, hi] = gamma_of(CFWord{1});
  CHECK(oracle::power_consistent(h1.lo(), h1.hi(), 2 * lo * lo, 2 * hi * hi, 1, 2));

  for (int len = 0; len <= 6; ++len) {
    for (unsigned long m = 0; m < (1ul << len); ++m) {
      DyadicWord w = DyadicWord::from_index(Integer(m), static_cast<std::size_t>(len));
      CHECK(check_bin_gale_condition(*h, w).proved());
    }
  }
  auto chain = h->chain(DyadicWord("01"), '1', 5, 128);
  CHECK(intersect(chain[5], h->value(DyadicWord("0111111"), 128)).has_value());
}

TEST_CASE("neighbor sets") {
  NeighborSets a = neighbor_sets(DyadicWord("0"), 2);
  REQUIRE(a.boundary.size() == 2);
  CHECK(a.boundary[0].bits() == "01");
  CHECK(a.boundary[1].bits() == "10");
  CHECK(a.interior_size == 1);
  CHECK(a.in_interior(DyadicWord("00")));
  CHECK_FALSE(a.in_interior(DyadicWord("01")));

  NeighborSets b = neighbor_sets(DyadicWord(), 2);
  CHECK(b.boundary.empty());
  CHECK(b.interior_size == 4);
  CHECK(b.in_interior(DyadicWord("00")));
  CHECK(b.in_interior(DyadicWord("11")));

  NeighborSets c = neighbor_sets(DyadicWord("01"), 3);
  std::vector<std::string> bits;
  for (const auto& u : c.boundary) bits.push_back(u.bits());
  CHECK(bits == std::vector<std::string>{"001", "010", "011", "100"});
  CHECK(c.interior_size == 0);
  CHECK_THROWS_AS(neighbor_sets(DyadicWord("01"), 2), std::invalid_argument);
}

TEST_CASE("smoothed gale") {
  // 2^{-0.1} by bisection on 10th powers.
  auto [r_lo, r_hi] = oracle::root_bounds(kHalf, 10);
  const Rational series_lo = 1 / (1 - r_lo), series_hi = 1 / (1 - r_hi);

  auto p = cf_to_binary_pipeline(gauss_gale(kTwoFifths), kHalf);
  Enclosure root = p.gale->value(DyadicWord(), 128);
  CHECK(root.lo() <= series_hi);
  CHECK(root.hi() >= series_lo);
  CHECK(root.relative_width() < 0x1p-60);

  // Uniform s'-gale h(w) = 2^{(s'-1)|w|}: same series.
  auto uniform = level_gale(explicit_level({DyadicWord()}), kTwoFifths);
  auto flat = smoothed_gale(uniform, kHalf);
  Enclosure f0 = flat->value(DyadicWord(), 128);
  CHECK(f0.lo() <= series_hi);
  CHECK(f0.hi() >= series_lo);

  for (int len = 0; len <= 5; ++len) {
    for (unsigned long m = 0; m < (1ul << len); ++m) {
      DyadicWord w = DyadicWord::from_index(Integer(m), static_cast<std::size_t>(len));
      CHECK(check_bin_gale_condition(*p.gale, w).proved());
      CHECK(check_bin_gale_condition(*flat, w).proved());
    }
  }

  // Doubling the explicit range tightens, never contradicts.
  auto wide = smoothed_gale(p.proportional, kHalf, 128);
  for (const char* bits : {"", "0110", "1", "000111"}) {
    Enclosure x = p.gale->value(DyadicWord(bits), 128);
    Enclosure y = wide->value(DyadicWord(bits), 128);
    CHECK(intersect(x, y).has_value());
    CHECK(y.width() <= x.width() * Rational(2));
  }

  try {
    smoothed_gale(p.proportional, kTwoFifths);
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()) == "smoothing requires s > s'");
  }
}

TEST_CASE("pipeline constants and inequality") {
  auto p = cf_to_binary_pipeline(gauss_gale(kTwoFifths), kHalf);
  // c1^2 = 1 / (2 ln 2).
  auto [l_lo, l_hi] = oracle::ln_bounds(Rational(2), 80);
  Enclosure c1 = p.c1(128);
  CHECK(oracle::power_consistent(c1.lo(), c1.hi(), 2 * l_lo, 2 * l_hi, -1, 2));
  Enclosure ratio = p.c3(128) / c1;
  // c3 / c1 = 2^{-2} 2^{-5/2} = 2^{-9/2}.
  CHECK(oracle::power_consistent(ratio.lo(), ratio.hi(), Rational(1, 512), Rational(1, 512), 1, 2));

  CHECK(in_pipeline_window(CFWord{1}, DyadicWord("1")));
  CHECK(check_pipeline_inequality(p, CFWord{1}, DyadicWord("1")).proved());
  CHECK_FALSE(in_pipeline_window(CFWord{1, 1}, DyadicWord("1")));
  CHECK_THROWS_AS(check_pipeline_inequality(p, CFWord{1, 1}, DyadicWord("1")), std::invalid_argument);
  CHECK_THROWS_AS(cf_to_binary_pipeline(gauss_gale(kHalf), kTwoFifths), std::invalid_argument);
}

TEST_CASE("cover gales") {
  Cover one;
  one.s = 1;
  one.levels[0] = explicit_level({DyadicWord()});
  auto d0 = cover_to_gale(one);
  CHECK(d0->value(DyadicWord("0110"), 128).lo() == 1);
  CHECK(d0->value(DyadicWord("0110"), 128).hi() == 1);
  CHECK(check_cover_budgets(one).refuted());

  Cover small;
  small.s = kTwoFifths;
  small.levels[2] = explicit_level({DyadicWord("0000")});
  auto d = cover_to_gale(small);
  CHECK(d->value(DyadicWord("0000"), 128).at_least(Rational(2)));
  CHECK(d->value(DyadicWord("00001"), 128).at_least(Rational(1)));
  // Level mass 2^{-1.6} exceeds 2^{-2}.
  CHECK(check_cover_budgets(small).refuted());

  Cover ok;
  ok.s = kTwoFifths;
  ok.levels[2] = explicit_level({DyadicWord("0000000000"), DyadicWord("1011011000")});
  ok.levels[4] = explicit_level({DyadicWord("0101010101010101")});
  ok.levels[3] = explicit_level({DyadicWord("1")});  // odd levels are not used
  CHECK(check_cover_budgets(ok).proved());
  auto dk = cover_to_gale(ok);
  CHECK(dk->value(DyadicWord(), 128).at_most(Rational(1)));
  CHECK(dk->value(DyadicWord("0101010101010101"), 128).at_least(Rational(4)));
  for (int len = 0; len <= 6; ++len) {
    for (unsigned long m = 0; m < (1ul << len); ++m) {
      DyadicWord w = DyadicWord::from_index(Integer(m), static_cast<std::size_t>(len));
      CHECK(check_bin_gale_condition(*dk, w).proved());
    }
  }
  CHECK_THROWS_AS(explicit_level({DyadicWord("01"), DyadicWord("011")}), std::invalid_argument);
  CHECK_THROWS_AS(explicit_level({DyadicWord("01"), DyadicWord("01")}), std::invalid_argument);
}

TEST_CASE("capital traces") {
  CapitalTrace flat = run_capital_trace(*gauss_gale(Rational(1)), CFWord{3, 1, 4, 1, 5}, 128);
  REQUIRE(flat.values.size() == 6);
  for (const auto& v : flat.values) CHECK(v.lo() == 1);
  CHECK(flat.path.front() == "[]");
  CHECK(flat.path.back() == "[3,1,4,1,5]");

  auto s = set_gale({CFWord{2, 3}}, kTwoFifths, kHalf);
  CapitalTrace spike = run_capital_trace(*s, CFWord{2, 3, 1}, 128);
  Enclosure kick = pow(gauss(CFWord{2, 3}, 128), Rational(kTwoFifths - kHalf));
  CHECK_FALSE(spike.values[2].less_than(kick));
  CHECK(spike.values[2].greater_than(spike.values[1].hi()));

  Cover c;
  c.s = kTwoFifths;
  c.levels[4] = explicit_level({DyadicWord("1101011001010010")});
  CapitalTrace up = run_capital_trace(*cover_to_gale(c), DyadicWord("11010110010100101"), 128);
  CHECK(up.values.front().at_most(Rational(1)));
  CHECK(up.values[16].at_least(Rational(4)));
}

TEST_CASE("property: random nodes satisfy the gale condition") {
  oracle::Random rng(31);
  auto g = gauss_gale(kHalf);
  auto s = set_gale({CFWord{1}, CFWord{2, 3}, CFWord{1, 1, 2}}, kTwoFifths, kHalf);
  auto m = modified_gale(g, {{Fan(CFWord(), Integer(3), Integer(5)), Rational(1, 3)}, {Fan(CFWord(), Integer(6)), {}}});
  auto c = combine_gales({g, s, m}, {Rational(1, 4), Rational(1, 4), Rational(1, 4)});
  for (int i = 0; i < 12; ++i) {
    CFWord v = rng.word(6, 8);
    for (const CFGalePtr& d : {g, s, m, c}) CHECK(check_gale_condition(*d, v, Integer(300)).proved());
  }
}
