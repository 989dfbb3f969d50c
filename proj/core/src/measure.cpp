#include "cfdim/measure.hpp"

#include <optional>
#include <stdexcept>

namespace cfdim {

Rational lebesgue(const Convergents& c, bool is_root) {
  if (is_root) return Rational(1);
  return make_rational(Integer(1), c.q * (c.q + c.q_prev));
}

Rational lebesgue(const CFWord& v) { return lebesgue(convergents(v), v.empty()); }
Rational lebesgue(const Fan& f) { return fan_interval(f).length(); }
Rational lebesgue(const Piece& piece) { return piece_lebesgue(piece); }

Enclosure gauss(const RatInterval& x, long precision) {
  if (sgn(x.lo) < 0 || x.hi > 1) throw std::invalid_argument("interval outside [0, 1]");
  if (x.lo == x.hi) return Enclosure(precision);
  if (sgn(x.lo) == 0 && x.hi == 1) return Enclosure(Rational(1), precision);
  // log1p((hi - lo) / (1 + lo)) keeps full relative accuracy on tiny intervals.
  Rational r = (x.hi - x.lo) / (1 + x.lo);
  return log1p_exact(r, precision + 4) / ln2(precision + 4);
}

Enclosure gauss(const Convergents& c, bool is_root, long precision) {
  if (is_root) return Enclosure(Rational(1), precision);
  return gauss(cylinder(c, false), precision);
}

Enclosure gauss(const CFWord& v, long precision) {
  // Gale checks ask for the same child's measure twice in a row.
  struct Recent {
    CFWord word;
    long precision = 0;
    std::optional<Enclosure> value;
  };
  thread_local Recent recent[2];
  thread_local unsigned next = 0;
  for (const auto& r : recent) {
    if (r.value && r.precision == precision && r.word == v) return *r.value;
  }
  Enclosure g = gauss(convergents(v), v.empty(), precision);
  Recent& slot = recent[next++ % 2];
  slot.word = v;
  slot.precision = precision;
  slot.value = g;
  return g;
}
Enclosure gauss(const Fan& f, long precision) { return gauss(fan_interval(f), precision); }
Enclosure gauss(const Piece& piece, long precision) { return gauss(piece_interval(piece), precision); }

MeasureValue measure_of(const CFWord& v, long precision) {
  Convergents c = convergents(v);
  return {lebesgue(c, v.empty()), gauss(c, v.empty(), precision)};
}

Rational lebesgue_ratio(const CFWord& v, const Integer& i) {
  if (i < 1) throw std::invalid_argument("digit must be >= 1");
  if (v.empty()) return make_rational(Integer(1), i * (i + 1));
  Rational s = reversal_rational(v);
  return (s + 1) / ((s + i) * (s + i + 1));
}

Verdict check_lebesgue_gauss_bound(const RatInterval& x, const CertifyOptions& opts) {
  const std::string claim = "lebesgue-gauss bound on " + x.str();
  const Rational mu = x.length();
  return certify_positive(
      claim,
      [&](long prec) {
        Enclosure g = gauss(x, prec);
        Enclosure l2 = ln2(prec);
        Enclosure lower_gap = g - Enclosure(mu, prec) / (l2 * Rational(2));
        Enclosure upper_gap = Enclosure(mu, prec) / l2 - g;
        // Both gaps must be nonnegative; report the smaller one.
        Enclosure m(prec);
        mpfr_min(m.lower(), lower_gap.lower(), upper_gap.lower(), MPFR_RNDD);
        mpfr_min(m.upper(), lower_gap.upper(), upper_gap.upper(), MPFR_RNDU);
        return m;
      },
      opts, false);
}

Verdict check_kraaikamp_product_bounds(const CFWord& v) {
  if (v.empty()) throw std::invalid_argument("rank must be >= 1");
  Rational lower = 1;
  Rational upper = 1;
  for (const auto& a : v.digits()) {
    lower /= Rational((a + 1) * (a + 2));
    upper *= make_rational(Integer(2), a * (a + 1));
  }
  Rational mu = lebesgue(v);
  bool holds = lower <= mu && mu <= upper;
  Verdict out = exact_verdict("kraaikamp product bounds on " + v.str(), holds, lower, upper);
  out.detail = "mu = " + to_string(mu);
  return out;
}

FanBound fan_lebesgue_bound(const Fan& f) {
  Rational bound = make_rational(Integer(2), f.from);
  for (const auto& a : f.base.digits()) bound *= make_rational(Integer(2), a * (a + 1));
  Rational mu = lebesgue(f);
  Verdict v = exact_verdict("fan measure bound on " + f.str(), mu <= bound, mu, bound);
  return {mu, bound, v};
}

Enclosure gauss_power_sum(const Fan& f, const Rational& s, long precision, bool allow_large) {
  if (f.infinite()) throw std::invalid_argument("requires finite fan");
  Integer count = *f.size();
  if (!allow_large && count > kLargeFanTerms) {
    throw std::length_error("fan of " + count.get_str() + " terms exceeds " + std::to_string(kLargeFanTerms) +
                            "; pass allow_large");
  }
  Convergents base = convergents(f.base);
  Enclosure sum(precision);
  for (Integer i = f.from; i <= *f.to; ++i) {
    sum += pow(gauss(base.child(i), false, precision), s);
  }
  return sum;
}

}  // namespace cfdim
