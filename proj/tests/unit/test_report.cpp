#include <doctest.h>

#include <sstream>

#include "cfdim/report.hpp"
#include "cfdim/suites.hpp"

using namespace cfdim;

namespace {

RunConfig quick_config() {
  RunConfig c;
  c.quick = true;
  return c;
}

// Splits one CSV line honoring double-quoted fields.
std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        out.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.emplace_back();
    } else {
      out.back() += ch;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("config validation names the field") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.precision = 8;
  CHECK_THROWS_WITH(c.validate(), doctest::Contains("precision"));
  c = RunConfig{};
  c.schedule_s = Rational(1, 2);
  CHECK_THROWS_WITH(c.validate(), doctest::Contains("schedule"));
  c = RunConfig{};
  c.truncation = 0;
  CHECK_THROWS_WITH(c.validate(), doctest::Contains("truncation"));
}

TEST_CASE("csv quoting round trips awkward fields") {
  Report r;
  ClaimResult c;
  c.id = "x.y";
  c.anchor = "sum, with \"quotes\"";
  c.lo = "1/3";
  c.hi = "1/2";
  r.claims.push_back(c);
  std::istringstream in(to_csv(r));
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "claim_id,anchor,status,lo,hi,ms");
  auto fields = csv_split(row);
  REQUIRE(fields.size() == 6);
  CHECK(fields[1] == c.anchor);
  CHECK(fields[2] == "proved");
  CHECK(fields[5].empty());

  r.claims[0].ms = 1.5;
  std::istringstream timed(to_csv(r));
  std::getline(timed, header);
  std::getline(timed, row);
  CHECK(csv_split(row)[5] == "1.500");
}

TEST_CASE("json omits ms unless timed") {
  Report r;
  r.suite = "t";
  ClaimResult c;
  c.id = "a";
  r.claims.push_back(c);
  auto j = to_json(r);
  CHECK_FALSE(j["claims"][0].contains("ms"));
  CHECK(j["summary"]["proved"] == 1);
  r.claims[0].ms = 2;
  CHECK(to_json(r)["claims"][0].contains("ms"));
  CHECK_THROWS_AS(render(r, "xml"), std::invalid_argument);
}

TEST_CASE("suite registry") {
  CHECK(is_suite("all"));
  CHECK_FALSE(is_suite("nope"));
  for (const auto& s : suite_names()) CHECK(is_suite(s));
  CHECK_THROWS_AS(run_suite("nope", quick_config()), std::invalid_argument);
}

TEST_CASE("quick suites prove every claim and sort by id") {
  for (const std::string name : {"kraaikamp", "measure-bounds", "division", "counterexample"}) {
    CAPTURE(name);
    Report r = run_suite(name, quick_config());
    REQUIRE_FALSE(r.claims.empty());
    for (std::size_t i = 0; i < r.claims.size(); ++i) {
      CAPTURE(r.claims[i].id);
      CHECK(r.claims[i].status == Status::kProved);
      CHECK(r.claims[i].instances == r.claims[i].proved);
      CHECK(r.claims[i].ms < 0);
      if (i > 0) CHECK(r.claims[i - 1].id < r.claims[i].id);
    }
  }
}

TEST_CASE("reports are deterministic for a seed and vary with it") {
  RunConfig c = quick_config();
  std::string a = render(run_suite("measure-bounds", c), "json");
  std::string b = render(run_suite("measure-bounds", c), "json");
  CHECK(a == b);
  c.seed = 2;
  CHECK(render(run_suite("measure-bounds", c), "json") != a);
}

TEST_CASE("append merges reports in id order") {
  RunConfig c = quick_config();
  Report all = run_suite("kraaikamp", c);
  const std::size_t first = all.claims.size();
  Report more = run_suite("division", c);
  all.append(more);
  CHECK(all.claims.size() == first + more.claims.size());
  for (std::size_t i = 1; i < all.claims.size(); ++i) CHECK(all.claims[i - 1].id < all.claims[i].id);
}
