#pragma once

#include <functional>
#include <string>
#include <utility>

#include "cfdim/enclosure.hpp"

namespace cfdim {

enum class Status { kProved, kRefuted, kIndeterminate };

std::string to_string(Status s);

// Outcome of a certified check. lo/hi bracket the quantity the decision was
// based on (a margin, a difference, or the checked value), rendered as text.
struct Verdict {
  std::string claim;
  Status status = Status::kIndeterminate;
  std::string lo;
  std::string hi;
  long precision = kDefaultPrecision;
  std::string detail;

  bool proved() const { return status == Status::kProved; }
  bool refuted() const { return status == Status::kRefuted; }
  bool indeterminate() const { return status == Status::kIndeterminate; }
};

struct CertifyOptions {
  long precision = kDefaultPrecision;
  int max_doublings = 4;
  // Relative width below which an enclosure of LHS - RHS containing 0 counts
  // as a proof of equality.
  double equality_tolerance = 0x1p-48;
};

// Verdict from an exact comparison.
Verdict exact_verdict(std::string claim, bool holds, const Rational& lhs, const Rational& rhs);

// Certifies margin(prec) > 0 (strict) or >= 0, doubling the precision while
// the enclosure straddles the threshold.
Verdict certify_positive(std::string claim, const std::function<Enclosure(long)>& margin,
                         const CertifyOptions& opts, bool strict = true);

// Certifies lhs == rhs for a pair of enclosures computed at a precision.
Verdict certify_equal(std::string claim,
                      const std::function<std::pair<Enclosure, Enclosure>(long)>& sides,
                      const CertifyOptions& opts);

// Single-shot versions without escalation.
Verdict decide_positive(std::string claim, const Enclosure& margin, bool strict = true);
Verdict decide_equal(std::string claim, const Enclosure& lhs, const Enclosure& rhs, double tolerance);

}  // namespace cfdim
