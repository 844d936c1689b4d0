#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "marcum_cli");
  std::ostringstream out;
  std::ostringstream err;
  const int code = marcum::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> result;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) result.push_back(line);
  return result;
}

}  // namespace

TEST_CASE("cli eval: closed form in text and json") {
  const Result text = run({"eval", "--func", "Q", "--mu", "1", "--x", "0", "--y", "2"});
  CHECK(text.code == 0);
  CHECK(text.out.rfind("value=0.13533528323661", 0) == 0);

  const Result js = run({"eval", "--func", "P", "--mu", "1", "--x", "1", "--y", "1", "--format", "json"});
  REQUIRE(js.code == 0);
  const json j = json::parse(js.out);
  for (const char* key : {"value", "abs_error_est", "terms_used", "method"}) CHECK(j.contains(key));
  const double q = json::parse(run({"eval", "--func", "Q", "--mu", "1", "--x", "1", "--y", "1", "--format",
                                    "json"}).out)["value"];
  CHECK(std::abs(j["value"].get<double>() + q - 1.0) < 1e-14);

  const Result gamma = run({"eval", "--func", "Gamma", "--a", "2", "--y", "3"});
  CHECK(gamma.code == 0);
  CHECK(gamma.out.find("value=0.1991482734714") == 0);
}

TEST_CASE("cli eval: domain and usage errors") {
  const Result p0 = run({"eval", "--func", "P", "--mu", "0", "--x", "1", "--y", "1"});
  CHECK(p0.code == 2);
  CHECK(p0.err.find("discontinu") != std::string::npos);
  CHECK(run({"eval", "--func", "Q", "--mu", "-5", "--x", "1", "--y", "1"}).code == 2);
  CHECK(run({"eval", "--func", "Q", "--mu", "1", "--x", "1"}).code == 64);
  CHECK(run({"eval", "--func", "R", "--mu", "1", "--x", "1", "--y", "1"}).code == 64);
  CHECK(run({"frobnicate"}).code == 64);
  CHECK(run({}).code == 64);
}

TEST_CASE("cli bounds: noncentral catalogue with oracle errors") {
  const Result r = run({"bounds", "--target", "Q", "--mu", "1", "--x", "1", "--y", "16", "--oracle", "--format",
                        "csv"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() > 1);
  CHECK(rows[0] == "mu,x,y,bound_id,side,value,valid,rel_err,target");
  bool saw_mes3 = false;
  for (const std::string& row : rows) {
    if (row.find(",MES3,") == std::string::npos) continue;
    saw_mes3 = true;
    CHECK(row.find(",upper,") != std::string::npos);
    CHECK(row.find(",true,") != std::string::npos);
  }
  CHECK(saw_mes3);
}

TEST_CASE("cli bounds: central and ratio targets") {
  const Result g = run({"bounds", "--target", "gamma", "--a", "2", "--y", "1", "--format", "json"});
  REQUIRE(g.code == 0);
  const json j = json::parse(g.out);
  std::vector<std::string> ids;
  for (const json& b : j["bounds"]) ids.push_back(b["id"]);
  for (const char* id : {"l1", "l2", "u1", "u3", "UQ", "lH"}) {
    CHECK(std::find(ids.begin(), ids.end(), id) != ids.end());
  }

  const Result r = run({"bounds", "--target", "ratioP", "--mu", "2", "--x", "3", "--y", "4", "--n", "5", "--format",
                        "json"});
  REQUIRE(r.code == 0);
  double lower = NAN;
  double upper = NAN;
  const json ratio = json::parse(r.out);
  for (const json& b : ratio["bounds"]) {
    const std::string id = b["id"];
    if (id == "l(n=5)") lower = b["value"].get<double>();
    if (id == "u(n=5)") upper = b["value"].get<double>();
  }
  CHECK(lower < upper);
}

TEST_CASE("cli table: presets and custom grids") {
  const Result t = run({"table", "--preset", "table2", "--format", "json"});
  REQUIRE(t.code == 0);
  const json rows = json::parse(t.out);
  CHECK(rows.size() == 12);
  const Result csv = run({"table", "--preset", "table1"});
  REQUIRE(csv.code == 0);
  CHECK(lines(csv.out)[0] == "mu,x,y,bound_id,side,value,valid,rel_err,target");
  CHECK(lines(csv.out).size() == 1 + 10 * 5);
  const Result grid = run({"table", "--mu", "2", "--x-list", "1,2", "--y-list", "3", "--format", "text"});
  CHECK(grid.code == 0);
  CHECK(grid.out.find("US1A") != std::string::npos);
  CHECK(run({"table", "--preset", "table9"}).code == 64);
}

TEST_CASE("cli verify: clean run, determinism and usage") {
  const Result a = run({"verify", "--suite", "complementarity", "--points", "300", "--seed", "42"});
  const Result b = run({"verify", "--suite", "complementarity", "--points", "300", "--seed", "42"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const json j = json::parse(a.out);
  CHECK(j["violations"].empty());
  CHECK(j["passed"] == true);
  CHECK(run({"verify", "--suite", "nonsense"}).code == 64);
  CHECK(run({"verify"}).code == 64);
}

TEST_CASE("cli inflection: brackets, roots and refusals") {
  const Result x = run({"inflection", "--mu", "1", "--y", "5", "--axis", "x"});
  REQUIRE(x.code == 0);
  CHECK(x.out.find("bracket=[3, 3.5]") != std::string::npos);
  CHECK(x.out.find("root=3.39") != std::string::npos);

  const Result y = run({"inflection", "--mu", "2", "--x", "3", "--axis", "y", "--format", "json"});
  REQUIRE(y.code == 0);
  const json j = json::parse(y.out);
  CHECK(j["bracket"][0] == 3.5);
  CHECK(j["bracket"][1] == 4.0);
  CHECK(j["root"].get<double>() > 3.5);
  CHECK(j["root"].get<double>() < 4.0);

  CHECK(run({"inflection", "--mu", "0.5", "--x", "1", "--axis", "y"}).code == 3);
  CHECK(run({"inflection", "--mu", "1", "--y", "1.5", "--axis", "x"}).code == 3);
  CHECK(run({"inflection", "--mu", "1", "--y", "5", "--axis", "z"}).code == 64);
  CHECK(run({"inflection", "--mu", "1", "--y", "5", "--axis", "x", "--tol", "1e-14"}).code == 2);
}

TEST_CASE("cli: series tolerance from the environment") {
  ::setenv("MARCUM_EPS", "1e-6", 1);
  const Result loose = run({"eval", "--func", "P", "--mu", "2", "--x", "3", "--y", "4", "--format", "json"});
  ::unsetenv("MARCUM_EPS");
  const Result tight = run({"eval", "--func", "P", "--mu", "2", "--x", "3", "--y", "4", "--format", "json"});
  REQUIRE(loose.code == 0);
  REQUIRE(tight.code == 0);
  const json a = json::parse(loose.out);
  const json b = json::parse(tight.out);
  CHECK(a["terms_used"].get<int>() < b["terms_used"].get<int>());
  CHECK(std::abs(a["value"].get<double>() - b["value"].get<double>()) < 1e-5);
}
