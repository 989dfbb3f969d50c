#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cfdim/cf_word.hpp"
#include "cfdim/dyadic_word.hpp"
#include "cfdim/enclosure.hpp"
#include "cfdim/fan.hpp"
#include "cfdim/verdict.hpp"

namespace cfdim {

// An s-gale on continued-fraction words: d(v) gamma(v)^s equals the sum of
// d(vi) gamma(vi)^s over all children. Exposed through oracles because the
// branching is infinite.
class CFGale {
 public:
  explicit CFGale(Rational s);
  virtual ~CFGale() = default;

  const Rational& s() const { return s_; }

  virtual Enclosure value(const CFWord& v, long precision) const = 0;
  // d(v) gamma(v)^s.
  virtual Enclosure mass(const CFWord& v, long precision) const;
  // Sum of d(y) gamma(y)^s over the members of the fan.
  virtual Enclosure fan_mass(const Fan& f, long precision) const = 0;
  virtual std::string describe() const = 0;

  Enclosure piece_mass(const Piece& piece, long precision) const;

 private:
  Rational s_;
};

using CFGalePtr = std::shared_ptr<const CFGale>;

// d(v) = gamma(v)^{1-s}, so d(v) gamma(v)^s = gamma(v).
CFGalePtr gauss_gale(const Rational& s);

// A patch rescales the subtrees of a fan of siblings. Multipliers compound
// along ancestors. A "balance" patch takes whatever multiplier keeps the
// parent's mass unchanged, given the other patches at that parent.
struct GalePatch {
  Fan target;
  std::optional<Rational> multiplier;  // empty = balance
};

// Throws std::invalid_argument "gale condition violated at v" when the
// patches at parent v cannot be certified to conserve mass (or a balance
// multiplier would be negative), and "overlapping patches at v" when two
// patches at one parent share a digit.
CFGalePtr modified_gale(CFGalePtr base, std::vector<GalePatch> patches, long precision = kDefaultPrecision);

// The gale that bets everything on a finite set G of words:
// d(v) gamma(v)^s = sum_{w in G, v <= w} gamma(w)^{s'} + gamma(v) sum_{w in G, w < v} gamma(w)^{s'-1}.
// Requires 0 <= s' < s <= 1.
CFGalePtr set_gale(std::vector<CFWord> words, const Rational& s_inner, const Rational& s);

// Weighted sum of gales with a common exponent; weights nonnegative with sum <= 1
// ("weight overflow" otherwise).
CFGalePtr combine_gales(std::vector<CFGalePtr> gales, std::vector<Rational> weights);

// Total weight not assigned by a combination, 1 - sum of weights.
Rational unassigned_weight(const std::vector<Rational>& weights);

// d(v) gamma(v)^s against the sum over children i <= truncation plus the fan
// mass of the tail i > truncation.
Verdict check_gale_condition(const CFGale& d, const CFWord& v, const Integer& truncation,
                             const CertifyOptions& opts = {});

// d(v) gamma(v)^s against the sum over a finite prefix-free family of words
// and fans tiling C_v. Throws std::invalid_argument "invalid decomposition".
Verdict check_kolmogorov_equality(const CFGale& d, const CFWord& v, const std::vector<Piece>& pieces,
                                  const CertifyOptions& opts = {});

// Exact test that the pieces tile C_v: each lies inside C_v, interiors are
// disjoint and the Lebesgue measures add up to mu(v).
bool is_decomposition_of(const CFWord& v, const std::vector<Piece>& pieces);

// Binary s-gale: h(w0) + h(w1) = 2^s h(w).
class BinGale {
 public:
  explicit BinGale(Rational s);
  virtual ~BinGale() = default;

  const Rational& s() const { return s_; }

  virtual Enclosure value(const DyadicWord& w, long precision) const = 0;
  virtual std::string describe() const = 0;

  // Sum of h(u) over |u| = n extending w, n >= |w|: 2^{s(n-|w|)} h(w).
  virtual Enclosure subtree_mass(const DyadicWord& w, std::size_t n, long precision) const;
  // h(w b^j) for j = 0..r.
  virtual std::vector<Enclosure> chain(const DyadicWord& w, char bit, std::size_t r, long precision) const;

 private:
  Rational s_;
};

using BinGalePtr = std::shared_ptr<const BinGale>;

Verdict check_bin_gale_condition(const BinGale& h, const DyadicWord& w, const CertifyOptions& opts = {});

// H_d(w) = sum_{y in I(w)} d(y) (gamma(y) / mu(w))^{s'} with s' the exponent of d.
BinGalePtr proportional_gale(CFGalePtr d);

// The four level-n words around the dyadic cylinder of w (n > |w|): first
// and last descendants f = w0^r, l = w1^r and their outside neighbours
// f - 1, l + 1 where those exist. H_n(w) holds the words with a neighbour on
// the other side of the cylinder's boundary; F_n(w) is the rest of the
// subtree, kept symbolic.
struct NeighborSets {
  DyadicWord w;
  std::size_t n = 0;
  std::vector<DyadicWord> boundary;  // H_n(w), left to right
  std::vector<DyadicWord> excluded;  // subtree words moved from F_n(w) to H_n(w)
  Integer interior_size;             // |F_n(w)|

  bool in_interior(const DyadicWord& u) const;
  bool in_boundary(const DyadicWord& u) const;
  std::string interior_description() const;
};

// Throws std::invalid_argument when n <= |w|.
NeighborSets neighbor_sets(const DyadicWord& w, std::size_t n);

inline constexpr std::size_t kDefaultSmoothingTerms = 64;

// S_h(w) = sum_n 2^{-sn} h_n(w), explicit up to max(n_max, |w| + 1) and a
// certified tail beyond. Throws "smoothing requires s > s'" unless s > s'.
BinGalePtr smoothed_gale(BinGalePtr h, const Rational& s, std::size_t n_max = kDefaultSmoothingTerms);

// The smoothed proportional gale together with the constants of the
// inequality h(b) >= c3 d(v).
struct Pipeline {
  CFGalePtr source;
  BinGalePtr proportional;
  BinGalePtr gale;
  Rational s;

  Enclosure c1(long precision) const;  // (2 ln 2)^{-s}
  Enclosure c2(long precision) const;  // 2^{-(2s+1)} c1
  Enclosure c3(long precision) const;  // 2^{5(s-1)} c2
};

Pipeline cf_to_binary_pipeline(CFGalePtr d, const Rational& s, std::size_t n_max = kDefaultSmoothingTerms);

// Whether (v, b) satisfy mu(v)/16 <= mu(b) <= 2 mu(v) and C_b meets C_v.
bool in_pipeline_window(const CFWord& v, const DyadicWord& b);

// Certifies h(b) >= c3 d(v); throws std::invalid_argument outside the window.
Verdict check_pipeline_inequality(const Pipeline& p, const CFWord& v, const DyadicWord& b,
                                  const CertifyOptions& opts = {});

// One level of a binary cover: a prefix-free set B of words.
class CoverLevel {
 public:
  virtual ~CoverLevel() = default;
  // The member that is a prefix of w, if any.
  virtual std::optional<DyadicWord> member_prefix_of(const DyadicWord& w) const = 0;
  // Sum of 2^{-s|v|} over members v strictly extending w.
  virtual Enclosure extension_mass(const DyadicWord& w, const Rational& s, long precision) const = 0;
  virtual std::string describe() const = 0;

  Enclosure total_mass(const Rational& s, long precision) const;
};

using CoverLevelPtr = std::shared_ptr<const CoverLevel>;

// Throws std::invalid_argument "level is not prefix-free" on a violation.
CoverLevelPtr explicit_level(std::vector<DyadicWord> words);

struct Cover {
  Rational s;
  std::map<long, CoverLevelPtr> levels;  // B_n by index n
};

// Whether each used level B_{2n}, n >= 1, has s-mass below 2^{-2n} and
// level 0 is unused.
Verdict check_cover_budgets(const Cover& cover, long precision = kDefaultPrecision);

// d_B(w) = 2^{(s-1)(|w|-|v|)} when a member v is a prefix of w, else
// 2^{s|w|} sum_{v in B, w < v} 2^{-s|v|}; scaled by `weight`.
BinGalePtr level_gale(CoverLevelPtr level, const Rational& s, const Rational& weight = 1);

// sum_n 2^n d_{B_{2n}} over the even-indexed levels present in the cover.
BinGalePtr cover_to_gale(const Cover& cover);

struct CapitalTrace {
  std::vector<std::string> path;  // prefixes, shortest first
  std::vector<Enclosure> values;
};

CapitalTrace run_capital_trace(const CFGale& d, const CFWord& path, long precision);
CapitalTrace run_capital_trace(const BinGale& h, const DyadicWord& path, long precision);

}  // namespace cfdim
