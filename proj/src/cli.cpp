#include "genbound/cli.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "genbound/adm.hpp"
#include "genbound/erm.hpp"
#include "genbound/gaussian.hpp"
#include "genbound/measures.hpp"
#include "genbound/numerics.hpp"
#include "genbound/oracle.hpp"
#include "genbound/verify.hpp"

namespace genbound {

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kInvalid = 2;
constexpr int kAccuracy = 3;
constexpr int kNoConvergence = 4;

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

// Rows separated by ';', entries by ','.
std::vector<std::vector<double>> parse_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) rows.push_back(parse_list(row));
  if (rows.empty()) throw std::invalid_argument("empty matrix");
  for (const auto& r : rows) {
    if (r.size() != rows.front().size()) throw std::invalid_argument("ragged matrix");
  }
  return rows;
}

class Output {
public:
  Output(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::invalid_argument("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

private:
  std::ofstream file_;
  std::ostream& fallback_;
};

struct MeasureArgs {
  std::string joint, p, q, alphas = "0.5", loss_range, output;
};

int cmd_measure(const MeasureArgs& a, std::ostream& out) {
  const std::vector<double> alphas = parse_list(a.alphas);
  for (double v : alphas) Alpha{v};
  Json j;
  j["schema"] = "genbound-measure-v1";
  if (!a.joint.empty()) {
    if (!a.p.empty() || !a.q.empty()) throw std::invalid_argument("--joint excludes --p and --q");
    const auto m = parse_matrix(a.joint);
    std::vector<double> flat;
    for (const auto& r : m) flat.insert(flat.end(), r.begin(), r.end());
    const JointDist joint(m.size(), m.front().size(), flat);
    j["mi"] = info_measure(joint, InfoSpec::mi());
    j["lautum"] = info_measure(joint, InfoSpec::lautum());
    Json per = Json::array();
    for (double v : alphas) {
      Json e;
      e["alpha"] = v;
      e["js"] = info_measure(joint, InfoSpec::js(v));
      e["renyi"] = info_measure(joint, InfoSpec::renyi(v));
      e["sibson"] = info_measure(joint, InfoSpec::sibson(v));
      per.push_back(e);
    }
    j["alpha"] = per;
    if (!a.loss_range.empty()) {
      const std::vector<double> r = parse_list(a.loss_range);
      if (r.size() != 2) throw std::invalid_argument("--loss-range takes lo,hi");
      const SubGaussianParams sg = SubGaussianParams::bounded(r[0], r[1]);
      Json bounds = Json::array();
      auto add = [&](BoundSpec spec) {
        const BoundReport rep = gen_bound({info_measure(joint, info_spec_for(spec))}, spec, sg);
        Json b;
        b["bound"] = rep.bound_name;
        if (spec.kind != BoundKind::MI && spec.kind != BoundKind::Lautum) b["alpha"] = spec.alpha;
        b["value"] = rep.value;
        bounds.push_back(b);
      };
      add(BoundSpec::mi());
      add(BoundSpec::lautum());
      for (double v : alphas) {
        add(BoundSpec::js(v));
        add(BoundSpec::renyi(v));
        add(BoundSpec::sibson(v));
        add(BoundSpec::pinsker_renyi(v));
      }
      j["bounds"] = bounds;
    }
  } else {
    if (a.p.empty() || a.q.empty()) throw std::invalid_argument("give --joint, or both --p and --q");
    const ProbVec p(parse_list(a.p)), q(parse_list(a.q));
    if (p.size() != q.size()) throw AlphabetError("--p and --q differ in size");
    j["kl"] = kl(p, q);
    Json per = Json::array();
    for (double v : alphas) {
      Json e;
      e["alpha"] = v;
      e["js"] = js_div(p, q, Alpha(v));
      e["renyi"] = renyi_div(p, q, Alpha(v));
      per.push_back(e);
    }
    j["alpha"] = per;
  }
  out << j.dump(2) << "\n";
  return kOk;
}

struct SweepArgs {
  double sigma2 = 1.0, mean = 1.0;
  std::optional<double> c;
  std::string alphas = "0.25,0.5,0.75", t_grid;
  std::size_t mc = 1000000;
  std::uint64_t seed = 42;
  std::string output;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  ToyConfig cfg;
  cfg.variance = a.sigma2;
  cfg.mean = a.mean;
  if (!(a.sigma2 > 0.0)) throw std::invalid_argument("--sigma2 must be positive");
  cfg.c = a.c ? *a.c : std::sqrt(a.sigma2) / 4.0;
  cfg.mc_samples = a.mc;
  cfg.seed = a.seed;
  if (a.mc < 2) throw std::invalid_argument("--mc must be at least 2");
  const std::vector<double> alphas = parse_list(a.alphas);
  for (double v : alphas) Alpha{v};
  const std::vector<double> grid = a.t_grid.empty() ? default_t_grid() : parse_list(a.t_grid);
  for (double t : grid) {
    ToyConfig probe = cfg;
    probe.t = t;
    probe.validate();
  }
  cfg.validate();
  const std::vector<SweepRow> rows = toy_sweep(cfg, grid, alphas);
  std::string text = "# genbound-sweep-v1\nt,gen_true,gen_se,bound_mi";
  for (double v : alphas) text += ",bound_js_" + fmt("%.2f", v);
  for (double v : alphas) text += ",bound_renyi_" + fmt("%.2f", v);
  text += "\n";
  for (const auto& r : rows) {
    text += fmt("%.17g", r.t) + "," + fmt("%.17g", r.gen.estimate) + "," +
            fmt("%.17g", r.gen.std_error) + "," + fmt("%.17g", r.bound_mi);
    for (double v : r.bound_js) text += "," + fmt("%.17g", v);
    for (double v : r.bound_renyi) text += "," + fmt("%.17g", v);
    text += "\n";
  }
  out << text;
  return kOk;
}

struct VerifyArgs {
  std::size_t cases = 500;
  std::uint64_t seed = 7;
  std::string output;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  if (a.cases == 0) throw std::invalid_argument("--cases must be positive");
  const Json report = verify_report(a.cases, a.seed);
  out << report.dump(2) << "\n";
  return report["all_passed"].get<bool>() ? kOk : kViolation;
}

struct ErmArgs {
  std::string instance, reg = "js", output;
  double alpha = 0.5;
};

// Malformed instance files raise std::invalid_argument.
LearnerInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read instance file " + path);
  Json j;
  try {
    j = Json::parse(in);
    const auto w = j.at("atoms").at("w").get<std::vector<std::string>>();
    const auto z = j.at("atoms").at("z").get<std::vector<std::string>>();
    return LearnerInstance(ProbVec(z, j.at("mu").get<std::vector<double>>()), w,
                           j.at("loss").get<std::vector<std::vector<double>>>(),
                           j.at("n").get<std::size_t>(), j.at("beta").get<double>(),
                           ProbVec(w, j.at("prior").get<std::vector<double>>()));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed instance: ") + e.what());
  }
}

Json solve_json(const SolveResult& r) {
  Json j;
  j["posterior"] = std::vector<double>(r.posterior.mass().begin(), r.posterior.mass().end());
  j["objective"] = r.objective;
  j["certificate"] = r.certificate;
  j["iterations"] = r.iterations;
  j["min_mass"] = r.min_mass;
  j["used_fallback"] = r.used_fallback;
  return j;
}

int cmd_erm(const ErmArgs& a, std::ostream& out) {
  RegSpec reg{RegKind::JS, a.alpha};
  if (a.reg == "js") {
    reg = RegSpec::js(a.alpha);
  } else if (a.reg == "renyi") {
    reg = RegSpec::renyi(a.alpha);
  } else {
    throw std::invalid_argument("--reg must be js or renyi");
  }
  Alpha{a.alpha};
  const LearnerInstance inst = load_instance(a.instance);
  dataset_count(inst);

  Json j;
  j["schema"] = "genbound-erm-v1";
  j["reg"] = a.reg;
  j["alpha"] = a.alpha;
  KernelSolution sol;
  try {
    sol = solve_regularized_kernel(inst, reg);
  } catch (const ConvergenceError& e) {
    j["converged"] = false;
    j["error"] = e.what();
    j["best"] = solve_json(e.best());
    out << j.dump(2) << "\n";
    return kNoConvergence;
  }
  j["converged"] = true;
  Json datasets = Json::array();
  double worst_cert = 0.0;
  for (std::size_t k = 0; k < sol.per_dataset.size(); ++k) {
    const Dataset s = dataset_at(inst, k);
    std::vector<std::string> labels;
    for (std::size_t z : s) labels.push_back(inst.mu.atoms()[z]);
    Json d = solve_json(sol.per_dataset[k]);
    d["dataset"] = labels;
    d["probability"] = dataset_probability(inst, s);
    const ProbVec g = gibbs_posterior(inst, s);
    d["gibbs_posterior"] = std::vector<double>(g.mass().begin(), g.mass().end());
    worst_cert = std::max(worst_cert, sol.per_dataset[k].certificate);
    datasets.push_back(d);
  }
  j["max_certificate"] = worst_cert;
  j["datasets"] = datasets;
  j["excess_risk"] = excess_risk_exact(inst, sol.kernel);
  j["excess_risk_gibbs"] = excess_risk_exact(inst, gibbs_kernel(inst));

  const EnumeratedLearner e = enumerate_learner(inst, sol.kernel);
  j["gen_error"] = e.exact_gen;
  double lo = kInf, hi = -kInf;
  for (const auto& row : inst.loss) {
    for (double v : row) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const SubGaussianParams sg = SubGaussianParams::bounded(lo, hi);
  Json bounds;
  for (BoundSpec spec : {BoundSpec::js(a.alpha), BoundSpec::renyi(a.alpha)}) {
    std::vector<double> info;
    for (const auto& pj : e.per_sample_joints) info.push_back(info_measure(pj, info_spec_for(spec)));
    bounds[to_string(spec.kind)] = gen_bound(info, spec, sg).value;
  }
  j["gen_bounds"] = bounds;
  out << j.dump(2) << "\n";
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Information-theoretic generalization bounds"};
  app.require_subcommand(1);

  MeasureArgs ma;
  auto* measure = app.add_subcommand("measure", "Divergences or information measures with bounds");
  measure->add_option("--joint", ma.joint, "joint P(w,z), rows ';'-separated, entries ','-separated");
  measure->add_option("--p", ma.p, "first distribution, comma-separated");
  measure->add_option("--q", ma.q, "second distribution, comma-separated");
  measure->add_option("--alphas,--alpha", ma.alphas, "comma-separated alphas in (0,1)");
  measure->add_option("--loss-range", ma.loss_range, "lo,hi range of a bounded loss; adds bounds");
  measure->add_option("-o,--output", ma.output, "output path (default stdout)");

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "Gaussian toy sweep over t as CSV");
  sweep->add_option("--sigma2", sa.sigma2, "sample variance")->capture_default_str();
  sweep->add_option("--mean", sa.mean, "sample mean")->capture_default_str();
  sweep->add_option("--c", sa.c, "loss truncation level (default sqrt(sigma2)/4)");
  sweep->add_option("--alphas", sa.alphas, "comma-separated alphas")->capture_default_str();
  sweep->add_option("--t-grid", sa.t_grid, "comma-separated t values (default 25 points in (0.02, 0.5])");
  sweep->add_option("--mc", sa.mc, "Monte Carlo samples per row")->capture_default_str();
  sweep->add_option("--seed", sa.seed, "master seed")->capture_default_str();
  sweep->add_option("-o,--output", sa.output, "output path (default stdout)");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Randomized identity, inequality, bound and solver suites");
  verify->add_option("--cases", va.cases, "cases per suite")->capture_default_str();
  verify->add_option("--seed", va.seed, "master seed")->capture_default_str();
  verify->add_option("-o,--output", va.output, "output path (default stdout)");

  ErmArgs ea;
  auto* erm = app.add_subcommand("erm", "Regularized ERM on a finite instance");
  erm->add_option("instance", ea.instance, "instance JSON file")->required();
  erm->add_option("--reg", ea.reg, "js or renyi")->capture_default_str();
  erm->add_option("--alpha", ea.alpha, "regularizer alpha in (0,1)")->capture_default_str();
  erm->add_option("-o,--output", ea.output, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInvalid;
  }

  try {
    if (*measure) {
      Output o(ma.output, out);
      return cmd_measure(ma, o.stream());
    }
    if (*sweep) {
      std::ostringstream buf;
      const int rc = cmd_sweep(sa, buf);
      Output o(sa.output, out);
      o.stream() << buf.str();
      return rc;
    }
    if (*verify) {
      std::ostringstream buf;
      const int rc = cmd_verify(va, buf);
      Output o(va.output, out);
      o.stream() << buf.str();
      return rc;
    }
    std::ostringstream buf;
    const int rc = cmd_erm(ea, buf);
    Output o(ea.output, out);
    o.stream() << buf.str();
    return rc;
  } catch (const AccuracyError& e) {
    err << "accuracy failure: " << e.what() << " (achieved " << e.achieved() << ")\n";
    return kAccuracy;
  } catch (const ConvergenceError& e) {
    err << "solver did not converge: " << e.what() << " (certificate " << e.best().certificate << ")\n";
    return kNoConvergence;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::out_of_range& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::length_error& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalid;
  }
}

}  // namespace genbound
