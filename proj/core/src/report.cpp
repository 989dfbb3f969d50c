#include "cfdim/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace cfdim {

CertifyOptions RunConfig::certify() const {
  CertifyOptions o;
  o.precision = precision;
  o.max_doublings = max_doublings;
  return o;
}

void RunConfig::validate() const {
  if (precision < 16) throw std::invalid_argument("precision must be at least 16 bits");
  if (truncation < 1) throw std::invalid_argument("truncation must be positive");
  if (n_max < 1) throw std::invalid_argument("nmax must be positive");
  if (max_doublings < 0) throw std::invalid_argument("max-doublings must be nonnegative");
  if (!(schedule_s > 0 && schedule_s < Rational(1, 2))) throw std::invalid_argument("schedule s must lie in (0, 1/2)");
  if (schedule_depth < 1) throw std::invalid_argument("schedule depth must be positive");
}

void Report::sort_claims() {
  std::stable_sort(claims.begin(), claims.end(), [](const ClaimResult& a, const ClaimResult& b) { return a.id < b.id; });
}

void Report::append(const Report& other) {
  claims.insert(claims.end(), other.claims.begin(), other.claims.end());
  sort_claims();
}

std::uint64_t Report::count(Status s) const {
  return static_cast<std::uint64_t>(
      std::count_if(claims.begin(), claims.end(), [&](const ClaimResult& c) { return c.status == s; }));
}

nlohmann::json to_json(const RunConfig& c) {
  return {
      {"precision", c.precision},
      {"truncation", to_string(c.truncation)},
      {"nmax", c.n_max},
      {"schedule", {{"s", to_string(c.schedule_s)}, {"depth", c.schedule_depth}}},
      {"seed", c.seed},
      {"max_doublings", c.max_doublings},
      {"quick", c.quick},
  };
}

nlohmann::json to_json(const Report& r) {
  nlohmann::json claims = nlohmann::json::array();
  for (const auto& c : r.claims) {
    nlohmann::json j = {
        {"id", c.id},
        {"anchor", c.anchor},
        {"status", to_string(c.status)},
        {"lo", c.lo},
        {"hi", c.hi},
        {"precision", c.precision},
        {"instances", c.instances},
        {"proved", c.proved},
        {"refuted", c.refuted},
        {"indeterminate", c.indeterminate},
        {"detail", c.detail},
    };
    if (c.ms >= 0) j["ms"] = c.ms;
    claims.push_back(std::move(j));
  }
  return {
      {"suite", r.suite},
      {"config", to_json(r.config)},
      {"summary",
       {{"claims", r.claims.size()},
        {"proved", r.count(Status::kProved)},
        {"refuted", r.count(Status::kRefuted)},
        {"indeterminate", r.count(Status::kIndeterminate)}}},
      {"claims", std::move(claims)},
  };
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string to_csv(const Report& r) {
  std::ostringstream out;
  out << "claim_id,anchor,status,lo,hi,ms\n";
  for (const auto& c : r.claims) {
    out << csv_field(c.id) << ',' << csv_field(c.anchor) << ',' << to_string(c.status) << ',' << csv_field(c.lo) << ','
        << csv_field(c.hi) << ',';
    if (c.ms >= 0) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", c.ms);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::string render(const Report& r, const std::string& format) {
  if (format == "json") return to_json(r).dump(2) + "\n";
  if (format == "csv") return to_csv(r);
  throw std::invalid_argument("unknown format: " + format);
}

}  // namespace cfdim
