#include "cfdim/verdict.hpp"

#include <algorithm>
#include <cmath>

namespace cfdim {

std::string to_string(Status s) {
  switch (s) {
    case Status::kProved:
      return "proved";
    case Status::kRefuted:
      return "refuted";
    case Status::kIndeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

namespace {

constexpr int kDigits = 20;

Verdict make(std::string claim, Status status, const Enclosure& e) {
  Verdict v;
  v.claim = std::move(claim);
  v.status = status;
  v.lo = e.lo_str(kDigits);
  v.hi = e.hi_str(kDigits);
  v.precision = e.precision();
  return v;
}

}  // namespace

Verdict exact_verdict(std::string claim, bool holds, const Rational& lhs, const Rational& rhs) {
  Verdict v;
  v.claim = std::move(claim);
  v.status = holds ? Status::kProved : Status::kRefuted;
  v.lo = to_string(lhs);
  v.hi = to_string(rhs);
  v.precision = 0;
  v.detail = "exact";
  return v;
}

Verdict decide_positive(std::string claim, const Enclosure& margin, bool strict) {
  Status status = Status::kIndeterminate;
  if (strict) {
    if (margin.positive()) {
      status = Status::kProved;
    } else if (mpfr_sgn(margin.upper()) <= 0) {
      status = Status::kRefuted;
    }
  } else {
    if (margin.nonnegative()) {
      status = Status::kProved;
    } else if (margin.negative()) {
      status = Status::kRefuted;
    }
  }
  return make(std::move(claim), status, margin);
}

Verdict decide_equal(std::string claim, const Enclosure& lhs, const Enclosure& rhs, double tolerance) {
  Enclosure diff = lhs - rhs;
  Status status = Status::kIndeterminate;
  if (!diff.contains_zero()) {
    status = Status::kRefuted;
  } else {
    // Width of the difference relative to the larger side.
    double scale = std::max({std::fabs(lhs.lo_double()), std::fabs(lhs.hi_double()),
                             std::fabs(rhs.lo_double()), std::fabs(rhs.hi_double())});
    double width = diff.hi_double() - diff.lo_double();
    if (width == 0.0 || (scale > 0.0 && width <= tolerance * scale)) status = Status::kProved;
  }
  return make(std::move(claim), status, diff);
}

Verdict certify_positive(std::string claim, const std::function<Enclosure(long)>& margin,
                         const CertifyOptions& opts, bool strict) {
  long prec = opts.precision;
  Verdict v;
  for (int round = 0; round <= opts.max_doublings; ++round, prec *= 2) {
    v = decide_positive(claim, margin(prec), strict);
    if (!v.indeterminate()) return v;
  }
  v.detail = "stalled at precision " + std::to_string(prec / 2);
  return v;
}

Verdict certify_equal(std::string claim,
                      const std::function<std::pair<Enclosure, Enclosure>(long)>& sides,
                      const CertifyOptions& opts) {
  long prec = opts.precision;
  Verdict v;
  for (int round = 0; round <= opts.max_doublings; ++round, prec *= 2) {
    auto [lhs, rhs] = sides(prec);
    v = decide_equal(claim, lhs, rhs, opts.equality_tolerance);
    if (!v.indeterminate()) return v;
  }
  v.detail = "stalled at precision " + std::to_string(prec / 2);
  return v;
}

}  // namespace cfdim
