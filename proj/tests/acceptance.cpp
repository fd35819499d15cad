#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "genbound/adm.hpp"
#include "genbound/experiments.hpp"
#include "genbound/gaussian.hpp"
#include "genbound/verify.hpp"

using namespace genbound;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Outcome suite_zero(const SuiteResult& s, const std::vector<std::string>& names) {
  bool ok = true;
  std::string detail;
  for (const auto& n : names) {
    const CheckResult& c = s.check(n);
    ok = ok && c.violations == 0;
    detail += n + " " + std::to_string(c.violations) + "/" + std::to_string(c.checked) + " violations (worst " +
              num(c.worst) + "); ";
  }
  return {ok, detail};
}

Outcome identities() {
  const SuiteResult s = identity_suite(1000, 20241);
  return suite_zero(s, {"mixture_decomposition", "geometric_decomposition"});
}

Outcome inequalities() {
  const SuiteResult s = inequality_suite(1000, 20242);
  // renyi_below_capped_mi is the min{1, a/(1-a)} MI form as stated
  return suite_zero(s, {"js_below_scaled_mi", "renyi_below_capped_mi", "js_below_binary_entropy",
                        "sibson_below_renyi"});
}

Outcome soundness() {
  const SuiteResult s = fuzz_suite(500, 20243);
  return suite_zero(s, {"bound_mi", "bound_lautum", "bound_js", "bound_renyi", "bound_sibson",
                        "bound_pinsker_renyi", "bound_auxiliary", "bound_auxiliary_reversed"});
}

const std::vector<double> kAlphas{0.25, 0.5, 0.75};

std::vector<SweepRow> default_sweep() {
  ToyConfig cfg;
  cfg.variance = 1.0;
  cfg.mean = 1.0;
  cfg.c = 0.25;
  cfg.mc_samples = 1000000;
  cfg.seed = 42;
  return toy_sweep(cfg, default_t_grid(), kAlphas);
}

Outcome figure_js() {
  const std::vector<SweepRow> rows = default_sweep();
  bool a_ok = true, c_ok = true;
  std::vector<double> crossings;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const SweepRow& row = rows[r];
    a_ok = a_ok && row.bound_js[2] < row.bound_mi;
    const double floor = row.gen.estimate - 3 * row.gen.std_error;
    c_ok = c_ok && row.bound_mi >= floor;
    for (double b : row.bound_js) c_ok = c_ok && b >= floor;
    for (double b : row.bound_renyi) c_ok = c_ok && b >= floor;
    if (r > 0) {
      const double d0 = rows[r - 1].bound_js[1] - rows[r - 1].bound_mi;
      const double d1 = row.bound_js[1] - row.bound_mi;
      if ((d0 < 0) != (d1 < 0)) crossings.push_back(rows[r - 1].t + (row.t - rows[r - 1].t) * d0 / (d0 - d1));
    }
  }
  bool b_ok = !crossings.empty();
  std::string where;
  for (double t : crossings) {
    b_ok = b_ok && t >= 0.15 && t <= 0.35;
    where += num(t) + " ";
  }
  return {a_ok && b_ok && c_ok, std::string("(a) js0.75<mi ") + (a_ok ? "yes" : "no") +
                                    "; (b) crossover at t = " + (where.empty() ? "none " : where) +
                                    "; (c) bounds above gen-3se " + (c_ok ? "yes" : "no")};
}

Outcome figure_renyi() {
  const std::vector<SweepRow> rows = default_sweep();
  bool ok = true;
  for (const auto& row : rows) {
    for (double b : row.bound_renyi) ok = ok && b >= row.bound_mi;
  }
  ToyConfig cfg;
  cfg.t = 1e-3;
  const double renyi = toy_information(cfg, 2, InfoSpec::renyi(0.5));
  const double bound = gen_bound({renyi}, BoundSpec::renyi(0.5), toy_sub_gaussian(cfg)).value;
  const double mi = toy_information(cfg, 2, InfoSpec::mi());
  const bool tail = std::isfinite(bound) && mi > 3;
  return {ok && tail, std::string("renyi >= mi at every t ") + (ok ? "yes" : "no") +
                          "; at t=1e-3 renyi(0.5) bound " + num(bound) + ", MI(W;Z2) " + num(mi)};
}

Outcome constant_bound() {
  SubGaussianParams sg;
  sg.sigma_alpha = 1.0;
  const double at_half = js_constant_bound(sg, Alpha(0.5)).value;
  const double target = 2 * std::sqrt(2 * std::log(2.0));
  bool min_ok = true;
  for (int k = 1; k <= 19; ++k) {
    const double a = 0.05 * k;
    min_ok = min_ok && js_constant_bound(sg, Alpha(a)).value >= at_half;
  }
  const double err = std::abs(at_half - target);
  return {err <= 1e-12 && min_ok, "value " + num(at_half) + ", |error| " + num(err) +
                                      ", minimum over the alpha grid " + (min_ok ? "yes" : "no")};
}

Outcome rates() {
  bool ok = true;
  std::string detail;
  for (double a : kAlphas) {
    const RateCheck r = gibbs_rate_check(a);
    ok = ok && std::abs(r.slope_js + 0.5) <= 0.1 && std::abs(r.slope_renyi + 0.5) <= 0.1;
    detail += "alpha " + num(a) + ": js " + num(r.slope_js) + ", renyi " + num(r.slope_renyi) + "; ";
  }
  const double s = excess_bound_slope(RegKind::JS, 0.5);
  ok = ok && std::abs(s + 0.5) <= 0.05;
  return {ok, detail + "excess bound " + num(s)};
}

Outcome solver() {
  const SuiteResult s = erm_suite(50, 20248);
  return suite_zero(s, {"js_matches_grid", "renyi_matches_grid", "kl_mode_matches_gibbs",
                        "gradient_finite_difference"});
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const std::string& cli) {
  if (cli.empty()) return {false, "no --cli path given"};
  struct Run {
    std::string args, name;
  };
  const std::vector<Run> runs{{"sweep --seed 42", "sweep"}, {"verify --cases 200 --seed 7", "verify"}};
  bool ok = true;
  std::string detail;
  for (const auto& r : runs) {
    std::vector<std::string> outputs;
    for (int threads : {1, 4}) {
      const std::string file = "determinism_" + r.name + "_" + std::to_string(threads) + ".out";
      const std::string cmd = "GENBOUND_THREADS=" + std::to_string(threads) + " \"" + cli + "\" " +
                              r.args + " -o " + file;
      const int rc = std::system(cmd.c_str());
      if (rc != 0) ok = false;
      outputs.push_back(slurp(file));
    }
    const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
    ok = ok && same;
    detail += r.name + (same ? " identical" : " differs") + " (" + std::to_string(outputs[0].size()) + " bytes); ";
  }
  return {ok, detail};
}

struct Criterion {
  std::string title;
  double seconds;
  std::function<Outcome(const std::string&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--cli" && i + 1 < argc) {
      cli = argv[++i];
    } else {
      which.push_back(std::stoi(a));
    }
  }
  const std::vector<Criterion> criteria{
      {"identity suite", 10, [](const std::string&) { return identities(); }},
      {"inequality suite", 30, [](const std::string&) { return inequalities(); }},
      {"bound soundness fuzz", 120, [](const std::string&) { return soundness(); }},
      {"JS sweep orderings", 300, [](const std::string&) { return figure_js(); }},
      {"Renyi sweep orderings", 300, [](const std::string&) { return figure_renyi(); }},
      {"constant JS bound", 60, [](const std::string&) { return constant_bound(); }},
      {"rate slopes", 60, [](const std::string&) { return rates(); }},
      {"ERM solver", 60, [](const std::string&) { return solver(); }},
      {"determinism across thread counts", 600, determinism},
  };
  if (which.empty()) {
    for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) which.push_back(k);
  }
  bool all = true;
  for (int k : which) {
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::cout << "criterion " << k << ": FAIL unknown criterion\n";
      all = false;
      continue;
    }
    const Criterion& c = criteria[k - 1];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = c.run(cli);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.seconds;
    const bool pass = o.pass && in_time;
    all = all && pass;
    std::cout << "criterion " << k << " (" << c.title << "): " << (pass ? "PASS" : "FAIL") << "  "
              << o.detail << " [" << num(secs) << " s of " << num(c.seconds) << " s]\n";
  }
  return all ? 0 : 1;
}
