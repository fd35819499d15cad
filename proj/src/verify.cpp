#include "genbound/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "genbound/adm.hpp"
#include "genbound/erm.hpp"
#include "genbound/measures.hpp"
#include "genbound/oracle.hpp"
#include "genbound/parallel.hpp"
#include "genbound/rng.hpp"

namespace genbound {

bool SuiteResult::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.violations == 0; });
}

const CheckResult& SuiteResult::check(const std::string& check_name) const {
  for (const auto& c : checks) {
    if (c.name == check_name) return c;
  }
  for (const auto& c : diagnostics) {
    if (c.name == check_name) return c;
  }
  throw std::out_of_range("no check named " + check_name);
}

namespace {

constexpr double kIneqTol = 1e-12;
constexpr double kIdentityTol = 1e-9;

struct CheckDef {
  std::string name;
  double limit;
};

// Results of one case, one slot per check.
class CaseLog {
public:
  explicit CaseLog(const std::vector<CheckDef>& defs) {
    for (const auto& d : defs) results_.push_back({d.name, d.limit, 0, 0, -kInf, std::nullopt});
  }

  void record(std::size_t k, double stat, const std::function<Json()>& context) {
    CheckResult& c = results_[k];
    ++c.checked;
    if (std::isnan(stat) || stat > c.limit) {
      ++c.violations;
      if (!c.counterexample) {
        Json j = context();
        j["check"] = c.name;
        j["statistic"] = stat;
        c.counterexample = std::move(j);
      }
    }
    if (std::isnan(stat) || stat > c.worst) c.worst = stat;
  }

  std::vector<CheckResult>& results() { return results_; }

private:
  std::vector<CheckResult> results_;
};

std::vector<CheckResult> merge(const std::vector<CheckDef>& defs, std::vector<CaseLog>& logs) {
  std::vector<CheckResult> out;
  for (const auto& d : defs) out.push_back({d.name, d.limit, 0, 0, -kInf, std::nullopt});
  for (auto& log : logs) {
    for (std::size_t k = 0; k < out.size(); ++k) {
      CheckResult& m = out[k];
      CheckResult& c = log.results()[k];
      m.checked += c.checked;
      m.violations += c.violations;
      if (std::isnan(c.worst) || (!std::isnan(m.worst) && c.worst > m.worst)) m.worst = c.worst;
      if (!m.counterexample && c.counterexample) m.counterexample = std::move(c.counterexample);
    }
  }
  return out;
}

// Suite runner: cases execute concurrently, each with its own log.
SuiteResult run_suite(const std::string& name, std::size_t cases, std::uint64_t seed,
                      const std::vector<CheckDef>& checks, const std::vector<CheckDef>& diags,
                      const std::function<void(std::size_t, std::uint64_t, CaseLog&, CaseLog&)>& body) {
  if (cases == 0) throw std::invalid_argument("a suite needs at least one case");
  std::vector<CaseLog> logs(cases, CaseLog(checks));
  std::vector<CaseLog> dlogs(cases, CaseLog(diags));
  parallel_for(cases, [&](std::size_t i) { body(i, derive_seed(seed, i), logs[i], dlogs[i]); });
  SuiteResult s;
  s.name = name;
  s.seed = seed;
  s.cases = cases;
  s.checks = merge(checks, logs);
  s.diagnostics = merge(diags, dlogs);
  return s;
}

// Excess of lhs over rhs relative to the size of rhs; an infinite rhs is never exceeded.
double excess(double lhs, double rhs) {
  if (rhs == kInf) return -kInf;
  return (lhs - rhs) / (1.0 + std::abs(rhs));
}

double relative_residual(double lhs, double rhs) {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  if (scale == 0.0) return 0.0;
  return std::abs(lhs - rhs) / scale;
}

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(hi - lo + 1));
}

Json joint_json(const JointDist& j) {
  Json out;
  out["w_atoms"] = j.w_atoms();
  out["z_atoms"] = j.z_atoms();
  Json rows = Json::array();
  for (std::size_t w = 0; w < j.rows(); ++w) {
    Json row = Json::array();
    for (std::size_t z = 0; z < j.cols(); ++z) row.push_back(j(w, z));
    rows.push_back(row);
  }
  out["mass"] = rows;
  return out;
}

Json probvec_json(const ProbVec& p) {
  Json out;
  out["atoms"] = p.atoms();
  out["mass"] = std::vector<double>(p.mass().begin(), p.mass().end());
  return out;
}

Json instance_json(const LearnerInstance& inst, const Kernel& kernel) {
  Json out;
  out["w_atoms"] = inst.w_atoms;
  out["mu"] = probvec_json(inst.mu);
  out["loss"] = inst.loss;
  out["n"] = inst.n;
  out["beta"] = inst.beta;
  out["prior"] = probvec_json(inst.prior);
  Json k = Json::array();
  for (const auto& p : kernel) k.push_back(std::vector<double>(p.mass().begin(), p.mass().end()));
  out["kernel"] = k;
  return out;
}

// Random joint supported exactly where `joint` is positive.
JointDist random_joint_on_support(Rng& rng, const JointDist& joint) {
  std::vector<double> v(joint.mass().size(), 0.0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (joint.mass()[k] > 0.0) v[k] = 1e-6 + uniform01(rng);
  }
  const double s = compensated_sum(v);
  for (double& x : v) x /= s;
  return JointDist(joint.w_atoms(), joint.z_atoms(), std::move(v));
}

const std::vector<double> kAlphaGrid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
const std::vector<double> kFuzzAlphas{0.1, 0.25, 0.5, 0.75, 0.9};

}  // namespace

SuiteResult identity_suite(std::size_t cases, std::uint64_t seed) {
  const std::vector<CheckDef> checks{{"mixture_decomposition", kIdentityTol},
                                     {"geometric_decomposition", kIdentityTol}};
  return run_suite("identity", cases, seed, checks, {},
                   [](std::size_t i, std::uint64_t cs, CaseLog& log, CaseLog&) {
    Rng rng(cs);
    const std::size_t rows = pick(rng, 2, 4), cols = pick(rng, 2, 4);
    const JointDist j = random_joint(rng, rows, cols, 0.25);
    const double a = 0.02 + 0.96 * uniform01(rng);
    const JointDist full = random_full_support_joint(rng, j);
    const JointDist on_support = random_joint_on_support(rng, j);
    const Alpha alpha(a);
    auto ctx = [&](const JointDist& aux) {
      return [&, aux]() {
        Json c;
        c["case"] = i;
        c["alpha"] = a;
        c["joint"] = joint_json(j);
        c["auxiliary"] = joint_json(aux);
        return c;
      };
    };
    const Decomposition m = js_mixture_decomposition(j, full, alpha);
    log.record(0, relative_residual(m.lhs, info_measure(j, InfoSpec::js(a)) + m.residual), ctx(full));
    const Decomposition g = renyi_geometric_decomposition(j, on_support, alpha);
    log.record(1, relative_residual(g.lhs, (1 - a) * info_measure(j, InfoSpec::renyi(a)) + g.residual),
               ctx(on_support));
  });
}

SuiteResult inequality_suite(std::size_t cases, std::uint64_t seed) {
  const std::vector<CheckDef> checks{{"js_below_scaled_mi", kIneqTol},
                                     {"renyi_below_scaled_mi_and_lautum", kIneqTol},
                                     {"js_below_binary_entropy", kIneqTol},
                                     {"sibson_below_renyi", kIneqTol},
                                     {"renyi_monotone_in_alpha", kIneqTol}};
  const std::vector<CheckDef> diags{{"renyi_below_capped_mi", kIneqTol}};
  return run_suite("inequality", cases, seed, checks, diags,
                   [](std::size_t i, std::uint64_t cs, CaseLog& log, CaseLog& dlog) {
    Rng rng(cs);
    const std::size_t rows = pick(rng, 2, 4), cols = pick(rng, 2, 4);
    const JointDist j = random_joint(rng, rows, cols, 0.25);
    const double mi = info_measure(j, InfoSpec::mi());
    const double lautum = info_measure(j, InfoSpec::lautum());
    double prev_renyi = -kInf;
    for (double a : kAlphaGrid) {
      auto ctx = [&](double lhs, double rhs) {
        return [&, lhs, rhs]() {
          Json c;
          c["case"] = i;
          c["alpha"] = a;
          c["joint"] = joint_json(j);
          c["lhs"] = lhs;
          c["rhs"] = rhs;
          return c;
        };
      };
      const double js = info_measure(j, InfoSpec::js(a));
      const double renyi = info_measure(j, InfoSpec::renyi(a));
      const double sibson = sibson_info(j, Alpha(a));
      const double r1 = (1 - a) * mi;
      log.record(0, excess(js, r1), ctx(js, r1));
      const double r2 = std::min(a / (1 - a) * mi, lautum);
      log.record(1, excess(renyi, r2), ctx(renyi, r2));
      const double r3 = binary_entropy(a);
      log.record(2, excess(js, r3), ctx(js, r3));
      log.record(3, excess(sibson, renyi), ctx(sibson, renyi));
      if (prev_renyi > -kInf) log.record(4, excess(prev_renyi, renyi), ctx(prev_renyi, renyi));
      prev_renyi = renyi;
      const double r5 = std::min(1.0, a / (1 - a)) * mi;
      dlog.record(0, excess(renyi, r5), ctx(renyi, r5));
    }
  });
}

SuiteResult fuzz_suite(std::size_t cases, std::uint64_t seed) {
  const std::vector<CheckDef> checks{
      {"gen_routes_agree", 1e-12},       {"joint_marginals", 1e-12},
      {"bound_mi", kIneqTol},            {"bound_lautum", kIneqTol},
      {"bound_js", kIneqTol},            {"bound_renyi", kIneqTol},
      {"bound_sibson", kIneqTol},        {"bound_pinsker_renyi", kIneqTol},
      {"bound_auxiliary", kIneqTol},     {"bound_auxiliary_reversed", kIneqTol},
      {"bound_averaged_kl", kIneqTol},   {"mixture_decomposition", kIdentityTol},
      {"geometric_decomposition", kIdentityTol}};
  return run_suite("fuzz", cases, seed, checks, {},
                   [](std::size_t i, std::uint64_t cs, CaseLog& log, CaseLog&) {
    const FuzzCase fc = random_fuzz_case(cs);
    const EnumeratedLearner e = enumerate_learner(fc.instance, fc.kernel);
    const double gen = e.exact_gen;
    auto ctx = [&](std::string what, double value) {
      return [&, what, value]() {
        Json c;
        c["case"] = i;
        c["case_seed"] = cs;
        c["instance"] = instance_json(fc.instance, fc.kernel);
        c["exact_gen"] = gen;
        c[what] = value;
        return c;
      };
    };
    log.record(0, std::abs(gen - e.exact_gen_per_sample), ctx("exact_gen_per_sample", e.exact_gen_per_sample));
    double marg = 0.0;
    for (const auto& pj : e.per_sample_joints) {
      marg = std::max({marg, pj.w_marginal().tv_distance(e.p_w), pj.z_marginal().tv_distance(fc.instance.mu)});
    }
    log.record(1, marg, ctx("marginal_tv", marg));

    const SubGaussianParams sg = SubGaussianParams::bounded(0.0, 1.0);
    auto bound_check = [&](std::size_t k, BoundSpec spec) {
      std::vector<double> info;
      for (const auto& pj : e.per_sample_joints) info.push_back(info_measure(pj, info_spec_for(spec)));
      const double b = gen_bound(info, spec, sg).value;
      log.record(k, excess(std::abs(gen), b), ctx(to_string(spec.kind) + "_" + std::to_string(spec.alpha), b));
    };
    bound_check(2, BoundSpec::mi());
    bound_check(3, BoundSpec::lautum());
    for (double a : kFuzzAlphas) {
      bound_check(4, BoundSpec::js(a));
      bound_check(5, BoundSpec::renyi(a));
      bound_check(6, BoundSpec::sibson(a));
      bound_check(7, BoundSpec::pinsker_renyi(a));
    }

    Rng rng = make_rng(cs, 1);
    const CgfEnvelope env = CgfEnvelope::sub_gaussian(0.5);
    std::vector<double> a_fwd, b_fwd, a_rev, b_rev;
    std::vector<JointDist> full_aux, support_aux;
    for (const auto& pj : e.per_sample_joints) {
      const JointDist prod = pj.product_of_marginals();
      full_aux.push_back(random_full_support_joint(rng, pj));
      support_aux.push_back(random_joint_on_support(rng, pj));
      a_fwd.push_back(kl(prod.flatten(), full_aux.back().flatten()));
      b_fwd.push_back(kl(pj.flatten(), full_aux.back().flatten()));
      a_rev.push_back(kl(support_aux.back().flatten(), prod.flatten()));
      b_rev.push_back(kl(support_aux.back().flatten(), pj.flatten()));
    }
    const TwoSidedBound fwd = adm_general_bound(a_fwd, b_fwd, env, env);
    log.record(8, std::max(excess(gen, fwd.upper), excess(-gen, fwd.lower)), ctx("upper", fwd.upper));
    const TwoSidedBound rev = adm_general_bound(a_rev, b_rev, env, env);
    log.record(9, std::max(excess(gen, rev.upper), excess(-gen, rev.lower)), ctx("upper", rev.upper));
    for (double a : kFuzzAlphas) {
      const double b = averaged_kl_bound(b_fwd, a_fwd, 0.5, Alpha(a));
      log.record(10, excess(std::abs(gen), b), ctx("averaged_kl_" + std::to_string(a), b));
    }
    const double a = 0.05 + 0.9 * uniform01(rng);
    for (std::size_t s = 0; s < e.per_sample_joints.size(); ++s) {
      const JointDist& pj = e.per_sample_joints[s];
      const Decomposition m = js_mixture_decomposition(pj, full_aux[s], Alpha(a));
      const double rm = relative_residual(m.lhs, info_measure(pj, InfoSpec::js(a)) + m.residual);
      log.record(11, rm, ctx("residual", rm));
      const Decomposition g = renyi_geometric_decomposition(pj, support_aux[s], Alpha(a));
      const double rg =
          relative_residual(g.lhs, (1 - a) * info_measure(pj, InfoSpec::renyi(a)) + g.residual);
      log.record(12, rg, ctx("residual", rg));
    }
  });
}

SuiteResult erm_suite(std::size_t cases, std::uint64_t seed) {
  const std::vector<CheckDef> checks{{"js_matches_grid", 1e-6},
                                     {"renyi_matches_grid", 1e-6},
                                     {"certificate", 1e-8},
                                     {"kl_mode_matches_gibbs", 1e-6},
                                     {"gradient_finite_difference", 1e-5},
                                     {"objective_convexity", kIneqTol}};
  return run_suite("erm", cases, seed, checks, {},
                   [](std::size_t i, std::uint64_t cs, CaseLog& log, CaseLog&) {
    Rng rng(cs);
    const std::vector<double> risks{uniform01(rng), uniform01(rng), uniform01(rng)};
    const ProbVec prior(random_simplex_point(rng, 3));
    const double beta = 0.5 + 9.5 * uniform01(rng);
    const double a_js = 0.1 + 0.8 * uniform01(rng);
    const double a_renyi = 0.1 + 0.8 * uniform01(rng);
    auto ctx = [&](RegSpec reg, double value) {
      return [&, reg, value]() {
        Json c;
        c["case"] = i;
        c["risks"] = risks;
        c["prior"] = std::vector<double>(prior.mass().begin(), prior.mass().end());
        c["beta"] = beta;
        c["reg"] = to_string(reg.kind);
        c["alpha"] = reg.alpha;
        c["value"] = value;
        return c;
      };
    };

    std::size_t k = 0;
    for (RegSpec reg : {RegSpec::js(a_js), RegSpec::renyi(a_renyi)}) {
      auto f = [&](const std::vector<double>& p) {
        return regularized_objective(p, risks, prior.mass(), beta, reg);
      };
      const GridOptimum g = grid_search_simplex3(f);
      double objective = kInf, cert = kInf;
      try {
        const SolveResult r = minimize_on_simplex(risks, prior, beta, reg);
        objective = r.objective;
        cert = r.certificate;
      } catch (const ConvergenceError& err) {
        objective = err.best().objective;
        cert = err.best().certificate;
      }
      log.record(k++, std::abs(objective - g.value), ctx(reg, objective));
      log.record(2, cert, ctx(reg, cert));
    }

    double z = 0.0;
    std::vector<double> gibbs(3);
    const double rmin = *std::min_element(risks.begin(), risks.end());
    for (std::size_t w = 0; w < 3; ++w) z += gibbs[w] = prior[w] * std::exp(-beta * (risks[w] - rmin));
    for (double& v : gibbs) v /= z;
    double tv = kInf;
    try {
      const SolveResult r = minimize_on_simplex(risks, prior, beta, RegSpec::kl());
      tv = r.posterior.tv_distance(ProbVec(prior.atoms(), gibbs));
    } catch (const ConvergenceError&) {
    }
    log.record(3, tv, ctx(RegSpec::kl(), tv));

    for (RegSpec reg : {RegSpec::js(a_js), RegSpec::renyi(a_renyi), RegSpec::kl()}) {
      for (int t = 0; t < 2; ++t) {
        std::vector<double> p = random_simplex_point(rng, 3);
        double s = 0.0;
        for (double& v : p) s += v = std::max(v, 1e-3);
        for (double& v : p) v /= s;
        // the objective is written for unnormalized arguments so that every
        // coordinate can be perturbed on its own
        auto fe = [&](const std::vector<double>& x) {
          double lin = 0.0;
          for (std::size_t w = 0; w < 3; ++w) lin += x[w] * risks[w];
          return lin + regularizer_extended(x, prior.mass(), reg) / beta;
        };
        const double dev =
            finite_diff_grad_check(fe, regularized_gradient(p, risks, prior.mass(), beta, reg), p, 1e-6);
        log.record(4, dev, ctx(reg, dev));
      }
      auto F = [&](const std::vector<double>& x) {
        return regularized_objective(x, risks, prior.mass(), beta, reg);
      };
      for (int t = 0; t < 100; ++t) {
        const std::vector<double> p = random_simplex_point(rng, 3, 0.2);
        const std::vector<double> q = random_simplex_point(rng, 3, 0.2);
        std::vector<double> mid(3);
        for (std::size_t w = 0; w < 3; ++w) mid[w] = 0.5 * (p[w] + q[w]);
        const double avg = 0.5 * (F(p) + F(q));
        const double stat = excess(F(mid), avg);
        log.record(5, stat, ctx(reg, stat));
      }
    }
  });
}

Json to_json(const SuiteResult& s) {
  auto checks_json = [](const std::vector<CheckResult>& cs) {
    Json arr = Json::array();
    for (const auto& c : cs) {
      Json j;
      j["name"] = c.name;
      j["limit"] = c.limit;
      j["checked"] = c.checked;
      j["violations"] = c.violations;
      j["worst"] = c.worst;
      if (c.counterexample) j["counterexample"] = *c.counterexample;
      arr.push_back(j);
    }
    return arr;
  };
  std::size_t checked = 0, passed = 0;
  for (const auto& c : s.checks) {
    checked += c.checked;
    passed += c.checked - c.violations;
  }
  Json j;
  j["name"] = s.name;
  j["cases"] = s.cases;
  j["checked"] = checked;
  j["passed_checks"] = passed;
  j["passed"] = s.passed();
  j["checks"] = checks_json(s.checks);
  j["diagnostics"] = checks_json(s.diagnostics);
  return j;
}

Json verify_report(std::size_t cases, std::uint64_t seed) {
  if (cases == 0) throw std::invalid_argument("cases must be positive");
  const std::size_t erm_cases = std::max<std::size_t>(1, std::min<std::size_t>(50, cases / 10));
  const std::vector<SuiteResult> suites{identity_suite(cases, derive_seed(seed, 1)),
                                        inequality_suite(cases, derive_seed(seed, 2)),
                                        fuzz_suite(cases, derive_seed(seed, 3)),
                                        erm_suite(erm_cases, derive_seed(seed, 4))};
  double max_residual = 0.0;
  bool all = true;
  Json arr = Json::array();
  for (const auto& s : suites) {
    for (const auto& c : s.checks) {
      if (c.name.find("decomposition") != std::string::npos) max_residual = std::max(max_residual, c.worst);
    }
    all = all && s.passed();
    arr.push_back(to_json(s));
  }
  Json report;
  report["schema"] = "genbound-verify-v1";
  report["seed"] = seed;
  report["cases"] = cases;
  report["max_identity_residual"] = max_residual;
  report["all_passed"] = all;
  report["suites"] = arr;
  return report;
}

}  // namespace genbound
