#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cfdim/cf_word.hpp"
#include "cfdim/dyadic_bridge.hpp"
#include "cfdim/enclosure.hpp"
#include "cfdim/fan.hpp"
#include "cfdim/gales.hpp"
#include "cfdim/verdict.hpp"

namespace cfdim {

// Digit windows [a_k, b_k] of the counterexample set: reals whose k-th
// continued-fraction digit lies in [a_k, 50 a_k] for every k.
struct Schedule {
  Rational s;
  std::vector<Integer> a;  // a[k-1] = a_k
  std::vector<Integer> b;  // b_k = 50 a_k

  std::size_t depth() const { return a.size(); }
  const Integer& lower(std::size_t k) const { return a.at(k - 1); }
  const Integer& upper(std::size_t k) const { return b.at(k - 1); }
};

// a_1 = 1 and a_k the least integer >= 2 (k prod_{i<k} 100 a_i)^{1/s}.
// Requires 0 < s < 1/2 and K >= 1.
Schedule build_schedule(const Rational& s, std::size_t depth);

// 2 (k prod_{i<k} 100 a_i)^{1/s} as an enclosure, for cross-checking a_k.
Enclosure schedule_target(const Schedule& sched, std::size_t k, long precision);

// Number of members of S_k: prod_{i<k} (b_i - a_i + 1).
Integer level_size(const Schedule& sched, std::size_t k);

// The member of S_k below the given first k-1 digits.
Fan level_member(const Schedule& sched, const std::vector<Integer>& prefix);

struct LevelMass {
  std::size_t k = 0;
  Integer members;
  // |S_k| times mu^s of the largest conceivable member, bounded through
  // mu(Fan(v, a, b)) <= (2/a) prod 2/(v_i (v_i + 1)).
  Enclosure analytic;
  std::optional<Enclosure> enumerated;  // k <= 2
  Verdict verdict;                      // sum mu^s(S_k) <= 1/k
};

LevelMass level_cover_mass(const Schedule& sched, std::size_t k, const CertifyOptions& opts = {});

// B_k: the two_dyadic_cover pairs of the members of S_k, with every word
// that extends another word of the family removed.
struct BinaryLevel {
  std::size_t k = 0;
  CoverLevelPtr level;
  std::optional<std::vector<DyadicWord>> words;  // explicit for k <= 2
  Enclosure mass;                                // sum 2^{-s|v|}, or an upper bound for k >= 3
  Verdict verdict;                               // mass <= 2^{1+s}/k
};

BinaryLevel binary_level_cover(const Schedule& sched, std::size_t k, const CertifyOptions& opts = {});

// B_k answered by local searches of the continued-fraction tree instead of a
// word list. extension_mass falls back to [0, whole-level bound] when the
// search window holds too many members.
CoverLevelPtr symbolic_level(const Schedule& sched, std::size_t k);

// 2^n d_{B_k} with k = ceil(2^{1+s+n}).
struct Counterexample {
  long n = 0;
  std::size_t k = 0;
  BinaryLevel level;
  BinGalePtr gale;
  Verdict initial_capital;  // d(lambda) <= 1
};

Counterexample counterexample_gale(const Schedule& sched, long n, const CertifyOptions& opts = {});

// 0.5 (ln 25 - 1).
Enclosure growth_constant(long precision);

struct Walk {
  CFWord path;
  CapitalTrace trace;
  std::vector<Verdict> steps;  // d([v, i]) < d(v) / c at each rank
  Verdict decay;               // d(v_n) c^n < d(lambda) for all n <= depth
};

// Extends v by the least digit i in [a_k, b_k] with certified d([v, i]) < d(v)/c.
// Throws std::runtime_error "indeterminate at node v; raise precision" when no
// digit certifies.
Walk diagonal_walk(const CFGale& d, const Schedule& sched, std::size_t depth, const CertifyOptions& opts = {});

// Certifies sum_{i=a_k}^{b_k} gamma^{1/2}([v, i]) > c gamma^{1/2}(v), k = rank(v) + 1,
// term by term for short fans and through harmonic bounds otherwise. With
// `constant` the threshold c is replaced.
Verdict verify_level_growth(const Schedule& sched, const CFWord& v, const CertifyOptions& opts = {},
                            const std::optional<Rational>& constant = std::nullopt);

}  // namespace cfdim
