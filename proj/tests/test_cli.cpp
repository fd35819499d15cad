#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "genbound/cli.hpp"
#include "genbound/erm.hpp"
#include "genbound/verify.hpp"

using namespace genbound;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "genbound");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> csv_rows(const std::string& text, std::string& header) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# genbound-sweep-v1");
  std::getline(in, header);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

const std::string kExample = std::string(GENBOUND_SOURCE_DIR) + "/tools/examples/two_hypotheses.json";
const std::string kConstant = std::string(GENBOUND_SOURCE_DIR) + "/tools/examples/constant_loss.json";

}  // namespace

TEST_CASE("flag validation") {
  CHECK(run({"verify", "--cases", "0"}).code == 2);
  CHECK(run({"sweep", "--unknown"}).code == 2);
  CHECK(run({"sweep", "--alphas", "1.5"}).code == 2);
  CHECK(run({"sweep", "--t-grid", "0.5,abc"}).code == 2);
  CHECK(run({"sweep", "--sigma2", "-1"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"erm", "/nonexistent.json"}).code == 2);
  CHECK(run({"erm", kExample, "--reg", "tsallis"}).code == 2);
  CHECK(run({"measure", "--p", "0.5,0.5", "--q", "0.2,0.3,0.5"}).code == 2);
}

TEST_CASE("sweep with defaults") {
  const Run r = run({"sweep"});
  REQUIRE(r.code == 0);
  std::string header;
  const auto rows = csv_rows(r.out, header);
  CHECK(header ==
        "t,gen_true,gen_se,bound_mi,bound_js_0.25,bound_js_0.50,bound_js_0.75,"
        "bound_renyi_0.25,bound_renyi_0.50,bound_renyi_0.75");
  REQUIRE(rows.size() == 25);
  for (const auto& row : rows) {
    REQUIRE(row.size() == 10);
    for (std::size_t k = 3; k < row.size(); ++k) CHECK(row[k] >= row[1] - 3 * row[2]);
  }
  CHECK(rows.back()[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(run({"sweep"}).out == r.out);
}

TEST_CASE("sweep at a larger variance keeps the JS(0.75) bound below the MI bound") {
  const Run r = run({"sweep", "--sigma2", "10", "--mc", "200000"});
  REQUIRE(r.code == 0);
  std::string header;
  for (const auto& row : csv_rows(r.out, header)) {
    CHECK(row[6] < row[3]);
    for (std::size_t k = 3; k < row.size(); ++k) CHECK(row[k] >= row[1] - 3 * row[2]);
  }
}

TEST_CASE("sweep on a single point") {
  const Run r = run({"sweep", "--t-grid", "0.5", "--alphas", "0.5", "--mc", "10000"});
  REQUIRE(r.code == 0);
  std::string header;
  const auto rows = csv_rows(r.out, header);
  CHECK(header == "t,gen_true,gen_se,bound_mi,bound_js_0.50,bound_renyi_0.50");
  CHECK(rows.size() == 1);
}

TEST_CASE("erm on the bundled example") {
  const Run r = run({"erm", kExample, "--reg", "js", "--alpha", "0.5"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["schema"] == "genbound-erm-v1");
  CHECK(j["converged"] == true);
  CHECK(j["max_certificate"].get<double>() <= 1e-8);
  // the posterior for each dataset against a fine one-dimensional search
  const std::vector<double> risks_by_dataset[] = {{0.0, 1.0}, {0.5, 0.5}, {0.5, 0.5}, {1.0, 0.0}};
  const ProbVec prior({0.5, 0.5});
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& d = j["datasets"][k];
    double best = 1e300;
    for (int m = 1; m < 200000; ++m) {
      const double p = m / 200000.0;
      const std::vector<double> x{p, 1 - p};
      best = std::min(best, regularized_objective(x, risks_by_dataset[k], prior.mass(), 2.0, RegSpec::js(0.5)));
    }
    CHECK(d["objective"].get<double>() == doctest::Approx(best).epsilon(1e-6));
    CHECK(d["objective"].get<double>() <= best + 1e-12);
  }
  CHECK(j["excess_risk"].get<double>() >= 0.0);
  CHECK(std::abs(j["gen_error"].get<double>()) <= j["gen_bounds"]["js"].get<double>());
  CHECK(std::abs(j["gen_error"].get<double>()) <= j["gen_bounds"]["renyi"].get<double>());
}

TEST_CASE("erm with renyi near one matches the gibbs posterior") {
  const Run r = run({"erm", kExample, "--reg", "renyi", "--alpha", "0.999"});
  REQUIRE(r.code == 0);
  for (const auto& d : Json::parse(r.out)["datasets"]) {
    const auto p = d["posterior"].get<std::vector<double>>();
    const auto g = d["gibbs_posterior"].get<std::vector<double>>();
    CHECK(0.5 * (std::abs(p[0] - g[0]) + std::abs(p[1] - g[1])) <= 1e-3);
  }
}

TEST_CASE("erm with constant loss returns the prior") {
  for (const char* reg : {"js", "renyi"}) {
    const Run r = run({"erm", kConstant, "--reg", reg, "--alpha", "0.3"});
    REQUIRE(r.code == 0);
    for (const auto& d : Json::parse(r.out)["datasets"]) {
      const auto p = d["posterior"].get<std::vector<double>>();
      CHECK(p[0] == doctest::Approx(0.2).epsilon(1e-9));
      CHECK(p[1] == doctest::Approx(0.3).epsilon(1e-9));
      CHECK(p[2] == doctest::Approx(0.5).epsilon(1e-9));
    }
  }
}

TEST_CASE("verify report") {
  const Run r = run({"verify", "--cases", "40", "--seed", "7"});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["schema"] == "genbound-verify-v1");
  CHECK(j["all_passed"] == true);
  CHECK(j["suites"].size() == 4);
  CHECK(j["max_identity_residual"].get<double>() <= 1e-9);
  CHECK(run({"verify", "--cases", "40", "--seed", "7"}).out == r.out);
}

TEST_CASE("measure") {
  const Run r = run({"measure", "--p", "0.5,0.5", "--q", "0.75,0.25", "--alpha", "0.5"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["kl"].get<double>() == doctest::Approx(0.5 * std::log(0.5 / 0.75) + 0.5 * std::log(2.0)));
  const Run jr = run({"measure", "--joint", "0.5,0;0,0.5", "--alpha", "0.5", "--loss-range", "0,1"});
  REQUIRE(jr.code == 0);
  const Json jj = Json::parse(jr.out);
  CHECK(jj["mi"].get<double>() == doctest::Approx(std::log(2.0)));
  CHECK(jj["alpha"][0]["renyi"].get<double>() == doctest::Approx(std::log(2.0)));
  CHECK(jj["bounds"][0]["value"].get<double>() == doctest::Approx(std::sqrt(0.5 * std::log(2.0))));
}
