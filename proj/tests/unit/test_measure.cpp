#include <doctest.h>

#include "cfdim/measure.hpp"
#include "support/oracles.hpp"

using namespace cfdim;

namespace {

// Rational bounds of log2((1+hi)/(1+lo)).
std::pair<Rational, Rational> gauss_oracle(const Rational& lo, const Rational& hi) {
  return oracle::log2_bounds((1 + hi) / (1 + lo), 80);
}

bool overlaps(const Enclosure& e, const std::pair<Rational, Rational>& b) {
  return e.lo() <= b.second && e.hi() >= b.first;
}

}  // namespace

TEST_CASE("lebesgue measure of cylinders") {
  CHECK(lebesgue(CFWord{1}) == Rational(1, 2));
  CHECK(lebesgue(CFWord{2, 3}) == Rational(1, 63));
  CHECK(lebesgue(CFWord()) == 1);
}

TEST_CASE("gauss measure examples") {
  Enclosure whole = gauss(RatInterval(Rational(0), Rational(1)), 128);
  CHECK(whole.lo() == 1);
  CHECK(whole.hi() == 1);
  Enclosure g1 = gauss(CFWord{1}, 128);
  CHECK(overlaps(g1, gauss_oracle(Rational(1, 2), Rational(1))));
  CHECK(g1.mid_double() == doctest::Approx(0.41503749927884));
  Enclosure fan = gauss(Fan(CFWord(), Integer(2)), 128);
  CHECK(overlaps(fan, gauss_oracle(Rational(0), Rational(1, 2))));
  CHECK(fan.mid_double() == doctest::Approx(0.58496250072116));
}

TEST_CASE("lebesgue ratio examples") {
  CHECK(lebesgue_ratio(CFWord{2}, Integer(3)) == Rational(2, 21));
  CHECK(lebesgue_ratio(CFWord(), Integer(1)) == Rational(1, 2));
  CHECK(lebesgue_ratio(CFWord{1, 1}, Integer(2)) == Rational(6, 35));
  CHECK(lebesgue(CFWord{2, 3}) / lebesgue(CFWord{2}) == Rational(2, 21));
}

TEST_CASE("property: ratio identity is exact") {
  oracle::Random rng(1);
  for (int i = 0; i < 10000; ++i) {
    CFWord v = rng.word(20, 1000000);
    Integer d(static_cast<unsigned long>(rng.uniform(1, 1000000)));
    CHECK(lebesgue_ratio(v, d) * lebesgue(v) == lebesgue(v.child(d)));
  }
}

TEST_CASE("lebesgue-gauss bound examples") {
  CHECK(check_lebesgue_gauss_bound(RatInterval(Rational(1, 2), Rational(1))).proved());
  CHECK(check_lebesgue_gauss_bound(RatInterval(Rational(0), Rational(1, 2))).proved());
  CHECK(check_lebesgue_gauss_bound(RatInterval(Rational(1, 3), Rational(2, 3))).proved());
}

TEST_CASE("kraaikamp product bounds") {
  Verdict v = check_kraaikamp_product_bounds(CFWord{2, 3});
  CHECK(v.proved());
  CHECK(v.lo == "1/240");
  CHECK(v.hi == "1/18");
  CHECK(check_kraaikamp_product_bounds(CFWord{1}).proved());
  oracle::Random rng(3);
  for (int i = 0; i < 500; ++i) {
    CHECK(check_kraaikamp_product_bounds(rng.word(20, 10000, 1)).proved());
  }
}

TEST_CASE("fan lebesgue bound") {
  FanBound a = fan_lebesgue_bound(Fan(CFWord(), Integer(2), Integer(100)));
  CHECK(a.measure == Rational(1, 2) - Rational(1, 101));
  CHECK(a.bound == 1);
  CHECK(a.verdict.proved());
  CHECK(fan_lebesgue_bound(Fan(CFWord{2}, Integer(5))).verdict.proved());
  CHECK(fan_lebesgue_bound(Fan(CFWord{1}, Integer(1), Integer(50))).verdict.proved());
}

TEST_CASE("gauss power sums") {
  Enclosure single = gauss_power_sum(Fan(CFWord(), Integer(1), Integer(1)), Rational(1), 128);
  CHECK(intersect(single, gauss(CFWord{1}, 128)).has_value());

  const Rational c_lo(1109, 1000);
  Enclosure s50 = gauss_power_sum(Fan(CFWord(), Integer(1), Integer(50)), Rational(1, 2), 128);
  CHECK(s50.greater_than(c_lo));

  Enclosure s3 = gauss_power_sum(Fan(CFWord{3}, Integer(7), Integer(350)), Rational(1, 2), 128);
  Enclosure rhs = pow(gauss(CFWord{3}, 128), Rational(1, 2)) * c_lo;
  CHECK(rhs.less_than(s3));

  CHECK_THROWS_AS(gauss_power_sum(Fan(CFWord(), Integer(1)), Rational(1, 2), 64), std::invalid_argument);
  CHECK_THROWS_AS(gauss_power_sum(Fan(CFWord(), Integer(1), Integer(200000)), Rational(1, 2), 64),
                  std::length_error);
}

TEST_CASE("property: gauss enclosures are additive on adjacent intervals") {
  oracle::Random rng(8);
  for (int i = 0; i < 300; ++i) {
    auto [a, b] = rng.interval(100000);
    Rational mid = (a + b) / 2;
    Enclosure left = gauss(RatInterval(a, mid), 128);
    Enclosure right = gauss(RatInterval(mid, b), 128);
    Enclosure whole = gauss(RatInterval(a, b), 128);
    CHECK(intersect(left + right, whole).has_value());
    CHECK(overlaps(whole, gauss_oracle(a, b)));
    CHECK(check_lebesgue_gauss_bound(RatInterval(a, b)).proved());
  }
}

TEST_CASE("property: lebesgue-gauss bound on random cylinders") {
  oracle::Random rng(10);
  for (int i = 0; i < 1000; ++i) {
    CFWord v = rng.word(12, 100000);
    CHECK(check_lebesgue_gauss_bound(cylinder(v)).proved());
  }
}
