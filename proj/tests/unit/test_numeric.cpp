#include <doctest.h>

#include "cfdim/enclosure.hpp"
#include "cfdim/numeric.hpp"
#include "support/oracles.hpp"

using namespace cfdim;

TEST_CASE("parse rationals and integers") {
  CHECK(parse_rational("2/5") == Rational(2, 5));
  CHECK(parse_rational("0.4") == Rational(2, 5));
  CHECK(parse_rational("-1.25") == Rational(-5, 4));
  CHECK(parse_rational("7") == Rational(7));
  CHECK(parse_integer("123456789012345678901234567890").get_str() == "123456789012345678901234567890");
  CHECK_THROWS_AS(parse_integer("12a"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
}

TEST_CASE("floor, ceil, pow2, ceil_log2") {
  CHECK(floor(Rational(-7, 2)) == -4);
  CHECK(ceil(Rational(-7, 2)) == -3);
  CHECK(floor(Rational(7, 2)) == 3);
  CHECK(ceil(Rational(7, 2)) == 4);
  CHECK(pow2(-3) == Rational(1, 8));
  CHECK(pow2(5) == 32);
  CHECK(ceil_log2(Integer(1)) == 0);
  CHECK(ceil_log2(Integer(2)) == 1);
  CHECK(ceil_log2(Integer(3)) == 2);
  CHECK(ceil_log2(Integer(64)) == 6);
  CHECK(ceil_log2(Integer(65)) == 7);
}

TEST_CASE("exact enclosure cases") {
  Enclosure l4 = log2_enclosure(Rational(4), 128);
  CHECK(l4.lo() == 2);
  CHECK(l4.hi() == 2);
  Enclosure one(Rational(1), 128);
  Enclosure p = pow_enclosure(one, Rational(2, 5), 128);
  CHECK(p.lo() == 1);
  CHECK(p.hi() == 1);
  CHECK(pow(Enclosure(Rational(9, 4), 64), Rational(1, 2)).contains(Rational(3, 2)));
  CHECK(pow(Enclosure(Rational(7), 64), Rational(0)).lo() == 1);
}

TEST_CASE("log2(4/3) against a series oracle") {
  auto [lo, hi] = oracle::log2_bounds(Rational(4, 3), 120);
  for (long prec : {53L, 128L, 256L}) {
    Enclosure e = log2_enclosure(Rational(4, 3), prec);
    CHECK(e.lo() <= hi);
    CHECK(e.hi() >= lo);
    CHECK(e.lo() <= lo);
    CHECK(e.hi() >= hi);
    CHECK(e.relative_width() < std::ldexp(1.0, static_cast<int>(-prec + 4)));
  }
  CHECK(log2_enclosure(Rational(4, 3), 64).mid_double() == doctest::Approx(0.415037499278844));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(log2_enclosure(Rational(0), 64), EnclosureDomainError);
  CHECK_THROWS_AS(log(Enclosure(Rational(-1), Rational(1), 64)), EnclosureDomainError);
  CHECK_THROWS_AS(pow(Enclosure(Rational(-1), 64), Rational(1, 2)), EnclosureDomainError);
  CHECK_THROWS_AS(Enclosure(Rational(1), 64) / Enclosure(Rational(-1), Rational(1), 64), EnclosureDomainError);
  try {
    log2_enclosure(Rational(-3), 64);
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()) == "enclosure domain error");
  }
}

TEST_CASE("log1p_exact matches the two-sided evaluation") {
  oracle::Random rng(11);
  for (int i = 0; i < 500; ++i) {
    auto [a, b] = rng.interval(1000000);
    Rational r = b - a;
    Enclosure fast = log1p_exact(r, 128);
    Enclosure slow = log1p(Enclosure(r, 128));
    CHECK(intersect(fast, slow).has_value());
    auto [lo, hi] = oracle::ln_bounds(1 + r, 40);
    CHECK(fast.lo() <= hi);
    CHECK(fast.hi() >= lo);
  }
}

TEST_CASE("precision refinement: doubling never widens and enclosures intersect") {
  oracle::Random rng(5);
  for (int i = 0; i < 300; ++i) {
    auto [a, b] = rng.interval(100000);
    if (a == 0) continue;
    Rational s(static_cast<long>(rng.uniform(1, 9)), 10);
    s.canonicalize();
    for (long prec : {32L, 64L, 128L}) {
      Enclosure x1(a, prec), x2(a, 2 * prec);
      Enclosure y1 = log2(x1 + Rational(b)) * exp2(Enclosure(s, prec)) - sqrt(x1);
      Enclosure y2 = log2(x2 + Rational(b)) * exp2(Enclosure(s, 2 * prec)) - sqrt(x2);
      CHECK(intersect(y1, y2).has_value());
      CHECK(y2.width() <= y1.width());
      Enclosure p1 = pow(x1, s), p2 = pow(x2, s);
      CHECK(intersect(p1, p2).has_value());
      CHECK(p2.width() <= p1.width());
    }
  }
}

TEST_CASE("interval arithmetic contains exact rational results") {
  oracle::Random rng(9);
  for (int i = 0; i < 1000; ++i) {
    auto [a, b] = rng.interval(1u << 30);
    auto [c, d] = rng.interval(1u << 30);
    Rational x = a - d, y = b + c + 1;
    Enclosure ex(x, 64), ey(y, 64);
    CHECK((ex + ey).contains(x + y));
    CHECK((ex - ey).contains(x - y));
    CHECK((ex * ey).contains(x * y));
    CHECK((ex / ey).contains(x / y));
    CHECK((ex * Rational(c - d)).contains(x * (c - d)));
  }
}
