#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "cfdim/numeric.hpp"
#include "cfdim/verdict.hpp"

namespace cfdim {

struct RunConfig {
  long precision = kDefaultPrecision;
  Integer truncation = 10000;
  std::size_t n_max = 64;
  Rational schedule_s{2, 5};
  std::size_t schedule_depth = 3;
  std::uint64_t seed = 1;
  int max_doublings = 4;
  bool quick = false;  // reduced corpora for smoke runs
  bool allow_large = false;
  bool timing = false;

  CertifyOptions certify() const;
  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// One aggregated claim: a property checked on `instances` inputs.
struct ClaimResult {
  std::string id;
  std::string anchor;
  Status status = Status::kProved;
  std::string lo;
  std::string hi;
  long precision = kDefaultPrecision;
  std::uint64_t instances = 0;
  std::uint64_t proved = 0;
  std::uint64_t refuted = 0;
  std::uint64_t indeterminate = 0;
  std::string detail;
  double ms = -1;  // negative when timing is off
};

struct Report {
  std::string suite;
  RunConfig config;
  std::vector<ClaimResult> claims;

  void sort_claims();
  void append(const Report& other);
  std::uint64_t count(Status s) const;
  bool ok() const { return count(Status::kRefuted) == 0; }
};

nlohmann::json to_json(const RunConfig& c);
nlohmann::json to_json(const Report& r);
// Columns: claim_id, anchor, status, lo, hi, ms.
std::string to_csv(const Report& r);
std::string render(const Report& r, const std::string& format);

}  // namespace cfdim
