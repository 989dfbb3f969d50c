#include <doctest.h>

#include "cfdim/cf_word.hpp"
#include "cfdim/cylinder.hpp"
#include "cfdim/dyadic_word.hpp"
#include "cfdim/fan.hpp"
#include "cfdim/measure.hpp"
#include "support/oracles.hpp"

using namespace cfdim;

TEST_CASE("convergents of small words") {
  Convergents e = convergents(CFWord());
  CHECK(e.p == 0);
  CHECK(e.q == 1);
  CHECK(e.p_prev == 1);
  CHECK(e.q_prev == 0);

  Convergents c = convergents(CFWord{2, 3});
  CHECK(c.value() == Rational(3, 7));
  CHECK(make_rational(c.p_prev, c.q_prev) == Rational(1, 2));

  Convergents one = convergents(CFWord{1});
  CHECK(one.value() == 1);
  CHECK(one.p_prev == 0);
  CHECK(one.q_prev == 1);
}

TEST_CASE("cylinders") {
  RatInterval c1 = cylinder(CFWord{1});
  CHECK(c1.lo == Rational(1, 2));
  CHECK(c1.hi == 1);
  RatInterval c23 = cylinder(CFWord{2, 3});
  CHECK(c23.lo == Rational(3, 7));
  CHECK(c23.hi == Rational(4, 9));
  RatInterval root = cylinder(CFWord());
  CHECK(root.lo == 0);
  CHECK(root.hi == 1);
  CHECK_FALSE(root.lo_closed);
  CHECK_FALSE(root.hi_closed);
  // Consecutive children share exactly one endpoint, owned by one of them.
  RatInterval a = cylinder(CFWord{2, 3}), b = cylinder(CFWord{2, 4});
  CHECK(a.hi == b.lo);
  CHECK(a.contains(a.hi) != b.contains(b.lo));
}

TEST_CASE("reversal rational") {
  CHECK(reversal_rational(CFWord{2}) == Rational(1, 2));
  CHECK(reversal_rational(CFWord{2, 3}) == Rational(2, 7));
  CHECK(reversal_rational(CFWord{1, 1}) == Rational(1, 2));
  try {
    reversal_rational(CFWord());
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()) == "reversal undefined for λ");
  }
}

TEST_CASE("fan intervals") {
  RatInterval f = fan_interval(Fan(CFWord(), Integer(2)));
  CHECK(f.lo == 0);
  CHECK(f.hi == Rational(1, 2));
  RatInterval g = fan_interval(Fan(CFWord(), Integer(1), Integer(50)));
  CHECK(g.lo == Rational(1, 51));
  CHECK(g.hi == 1);
  RatInterval h = fan_interval(Fan(CFWord{2}, Integer(3), Integer(3)));
  CHECK(h == cylinder(CFWord{2, 3}));
  CHECK_THROWS_AS(Fan(CFWord(), Integer(0)), std::invalid_argument);
  CHECK_THROWS_AS(Fan(CFWord(), Integer(5), Integer(4)), std::invalid_argument);
}

TEST_CASE("word parsing and prefix relations") {
  CHECK(CFWord::parse("2,3") == CFWord{2, 3});
  CHECK(CFWord::parse("[2, 3]") == CFWord{2, 3});
  CHECK(CFWord::parse("[]").empty());
  CHECK_THROWS_AS(CFWord::parse("2,0"), std::invalid_argument);
  CHECK_THROWS_AS(CFWord::parse("2,x"), std::invalid_argument);
  CHECK(CFWord{2}.is_prefix_of(CFWord{2, 3}));
  CHECK(CFWord().is_proper_prefix_of(CFWord{1}));
  CHECK_FALSE(CFWord{2, 3}.is_prefix_of(CFWord{2}));
  CHECK(CFWord{2, 3}.parent() == CFWord{2});
  CHECK(CFWord().parent() == CFWord());
  CHECK(CFWord{2, 3}.str() == "[2,3]");
}

TEST_CASE("dyadic words") {
  DyadicWord w("011");
  CHECK(w.index() == 3);
  CHECK(w.lo() == Rational(3, 8));
  CHECK(w.hi() == Rational(1, 2));
  CHECK(w.prev().bits() == "010");
  CHECK(w.next().bits() == "100");
  CHECK_THROWS_AS(DyadicWord("000").prev(), std::domain_error);
  CHECK_THROWS_AS(DyadicWord("11").next(), std::domain_error);
  CHECK(DyadicWord::from_index(Integer(5), 4).bits() == "0101");
  CHECK(DyadicWord().display() == "λ");
  CHECK(DyadicWord("01").is_prefix_of(DyadicWord("011")));
  CHECK(DyadicWord("").midpoint() == Rational(1, 2));
  CHECK_THROWS_AS(DyadicWord("012"), std::invalid_argument);
}

TEST_CASE("property: convergents against nested evaluation and determinant identity") {
  oracle::Random rng(2024);
  for (int i = 0; i < 10000; ++i) {
    CFWord v = rng.word(30, 1000000);
    Convergents c = convergents(v);
    CHECK((c.determinant() == 1 || c.determinant() == -1));
    CHECK(c.q >= c.q_prev);
    CHECK(c.q >= 1);
    if (!v.empty()) {
      CHECK(c.value() == oracle::cf_value(v.digits()));
    }
  }
}

TEST_CASE("property: children nest, are disjoint and fans measure their members") {
  oracle::Random rng(77);
  for (int i = 0; i < 300; ++i) {
    CFWord v = rng.word(8, 1000);
    RatInterval parent = cylinder(v);
    auto [olo, ohi] = oracle::cylinder_ends(v.digits());
    CHECK(parent.lo == olo);
    CHECK(parent.hi == ohi);
    Integer a(static_cast<unsigned long>(rng.uniform(1, 40)));
    Integer b = a + static_cast<unsigned long>(rng.uniform(0, 40));
    Rational sum = 0;
    RatInterval prev;
    for (Integer j = a; j <= b; ++j) {
      RatInterval c = cylinder(v.child(j));
      CHECK(parent.closure_contains(c));
      if (j > a) CHECK((c.hi <= prev.lo || c.lo >= prev.hi));
      sum += c.length();
      prev = c;
    }
    CHECK(fan_interval(Fan(v, a, b)).length() == sum);
    // Children 1..M plus the infinite tail tile the parent exactly.
    CHECK(sum + lebesgue(Fan(v, b + 1)) + (a > 1 ? lebesgue(Fan(v, Integer(1), Integer(a - 1))) : Rational(0)) ==
          lebesgue(v));
  }
}
