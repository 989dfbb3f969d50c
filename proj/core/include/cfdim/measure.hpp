#pragma once

#include "cfdim/cf_word.hpp"
#include "cfdim/cylinder.hpp"
#include "cfdim/enclosure.hpp"
#include "cfdim/fan.hpp"
#include "cfdim/rat_interval.hpp"
#include "cfdim/verdict.hpp"

namespace cfdim {

// Fans longer than this need an explicit opt-in for term-by-term sums.
inline constexpr long kLargeFanTerms = 100000;

// Exact Lebesgue measures.
Rational lebesgue(const CFWord& v);
Rational lebesgue(const Convergents& c, bool is_root);
Rational lebesgue(const Fan& f);
Rational lebesgue(const Piece& piece);

// Gauss measure log2((1 + hi) / (1 + lo)) of an interval in [0, 1].
Enclosure gauss(const RatInterval& x, long precision);
Enclosure gauss(const CFWord& v, long precision);
Enclosure gauss(const Convergents& c, bool is_root, long precision);
Enclosure gauss(const Fan& f, long precision);
Enclosure gauss(const Piece& piece, long precision);

struct MeasureValue {
  Rational lebesgue;
  Enclosure gauss;
};
MeasureValue measure_of(const CFWord& v, long precision);

// mu([v, i]) / mu(v) from the reversed word: (s+1) / ((s+i)(s+i+1)).
Rational lebesgue_ratio(const CFWord& v, const Integer& i);

// mu(B) / (2 ln 2) <= gamma(B) <= mu(B) / ln 2.
Verdict check_lebesgue_gauss_bound(const RatInterval& x, const CertifyOptions& opts = {});

// prod 1/((a_i+1)(a_i+2)) <= mu(v) <= prod 2/(a_i(a_i+1)).
Verdict check_kraaikamp_product_bounds(const CFWord& v);

struct FanBound {
  Rational measure;
  Rational bound;
  Verdict verdict;
};
// mu(union of fan) <= (2/a) prod 2/(a_i(a_i+1)).
FanBound fan_lebesgue_bound(const Fan& f);

// Sum over the fan of gamma^s of its members, ascending digit order.
// Throws for infinite fans and, unless allow_large, for fans longer than
// kLargeFanTerms.
Enclosure gauss_power_sum(const Fan& f, const Rational& s, long precision, bool allow_large = false);

}  // namespace cfdim
