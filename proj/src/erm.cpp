#include "genbound/erm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "genbound/numerics.hpp"
#include "genbound/parallel.hpp"

namespace genbound {

namespace {

constexpr double kMassFloor = 1e-300;

double dot(std::span<const double> a, const std::vector<double>& b) {
  std::vector<double> terms(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) terms[i] = a[i] * b[i];
  return compensated_sum(std::move(terms));
}

std::vector<double> normalized_from_logs(const std::vector<double>& logs) {
  const double m = *std::max_element(logs.begin(), logs.end());
  std::vector<double> p(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) p[i] = std::exp(logs[i] - m);
  const double z = compensated_sum(p);
  for (double& v : p) v /= z;
  return p;
}

std::vector<double> floored(std::vector<double> p) {
  for (double& v : p) v = std::max(v, kMassFloor);
  const double z = compensated_sum(p);
  for (double& v : p) v /= z;
  return p;
}

double certificate_of(std::span<const double> p, const std::vector<double>& g) {
  std::vector<double> y(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) y[i] = p[i] - g[i];
  const std::vector<double> proj = project_simplex(std::move(y));
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += (p[i] - proj[i]) * (p[i] - proj[i]);
  return std::sqrt(s);
}

ProbVec as_probvec(const ProbVec& like, std::vector<double> mass) {
  const double z = compensated_sum(mass);
  for (double& v : mass) v /= z;
  return ProbVec(like.atoms(), std::move(mass));
}

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

// Hessian of the regularized objective (the risk term is linear).
std::vector<std::vector<double>> objective_hessian(const std::vector<double>& p,
                                                   std::span<const double> q, double beta,
                                                   RegSpec reg) {
  const std::size_t k = p.size();
  std::vector<std::vector<double>> h(k, std::vector<double>(k, 0.0));
  const double a = reg.alpha;
  switch (reg.kind) {
    case RegKind::JS:
      for (std::size_t i = 0; i < k; ++i) {
        const double m = a * q[i] + (1.0 - a) * p[i];
        h[i][i] = (1.0 - a) * a * q[i] / (p[i] * m) / beta;
      }
      break;
    case RegKind::KL:
      for (std::size_t i = 0; i < k; ++i) h[i][i] = 1.0 / (p[i] * beta);
      break;
    case RegKind::Renyi: {
      std::vector<double> u(k);
      double s = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        u[i] = std::pow(p[i], a) * std::pow(q[i], 1.0 - a);
        s += u[i];
      }
      const double c = a / (1.0 - a);
      for (std::size_t i = 0; i < k; ++i) {
        const double ri = std::pow(q[i] / p[i], 1.0 - a);
        h[i][i] += c * (1.0 - a) * ri / (p[i] * s) / beta;
        for (std::size_t j = 0; j < k; ++j) {
          const double rj = std::pow(q[j] / p[j], 1.0 - a);
          h[i][j] += c * a * ri * rj / (s * s) / beta;
        }
      }
      break;
    }
  }
  return h;
}

// Solves H x = b by Cholesky; empty result if H is not numerically positive definite.
std::vector<double> spd_solve(std::vector<std::vector<double>> h, std::vector<double> b) {
  const std::size_t k = b.size();
  for (std::size_t j = 0; j < k; ++j) {
    double d = h[j][j];
    for (std::size_t m = 0; m < j; ++m) d -= h[j][m] * h[j][m];
    if (!(d > 0.0)) return {};
    h[j][j] = std::sqrt(d);
    for (std::size_t i = j + 1; i < k; ++i) {
      double v = h[i][j];
      for (std::size_t m = 0; m < j; ++m) v -= h[i][m] * h[j][m];
      h[i][j] = v / h[j][j];
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t m = 0; m < i; ++m) b[i] -= h[i][m] * b[m];
    b[i] /= h[i][i];
  }
  for (std::size_t i = k; i-- > 0;) {
    for (std::size_t m = i + 1; m < k; ++m) b[i] -= h[m][i] * b[m];
    b[i] /= h[i][i];
  }
  return b;
}

// Newton step restricted to directions with zero total mass.
std::vector<double> newton_direction(const std::vector<double>& p, const std::vector<double>& g,
                                     std::span<const double> q, double beta, RegSpec reg) {
  const auto h = objective_hessian(p, q, beta, reg);
  const std::vector<double> hg = spd_solve(h, g);
  const std::vector<double> h1 = spd_solve(h, std::vector<double>(p.size(), 1.0));
  if (hg.empty() || h1.empty()) return {};
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    num += hg[i];
    den += h1[i];
  }
  const double nu = num / den;
  std::vector<double> d(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) d[i] = -(hg[i] - nu * h1[i]);
  return d;
}

}  // namespace

LearnerInstance::LearnerInstance(ProbVec mu_, std::vector<std::string> w_atoms_,
                                 std::vector<std::vector<double>> loss_, std::size_t n_,
                                 double beta_, ProbVec prior_)
    : mu(std::move(mu_)),
      w_atoms(std::move(w_atoms_)),
      loss(std::move(loss_)),
      n(n_),
      beta(beta_),
      prior(std::move(prior_)) {
  if (w_atoms.empty()) throw DomainError("learner needs at least one hypothesis");
  if (n < 1) throw DomainError("sample count must be at least 1");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("beta must be finite and >= 0");
  if (prior.size() != w_atoms.size()) throw DomainError("prior size differs from hypothesis count");
  for (std::size_t w = 0; w < prior.size(); ++w) {
    if (!(prior[w] > 0.0)) throw DomainError("prior must have full support");
  }
  if (loss.size() != w_atoms.size()) throw DomainError("loss table needs one row per hypothesis");
  for (const auto& row : loss) {
    if (row.size() != mu.size()) throw DomainError("loss table needs one column per sample atom");
    for (double v : row) {
      if (!std::isfinite(v)) throw DomainError("losses must be finite");
    }
  }
}

double LearnerInstance::empirical_risk(std::size_t w, const Dataset& s) const {
  std::vector<double> terms;
  terms.reserve(s.size());
  for (std::size_t z : s) terms.push_back(loss[w][z]);
  return compensated_sum(std::move(terms)) / static_cast<double>(s.size());
}

std::vector<double> LearnerInstance::empirical_risks(const Dataset& s) const {
  std::vector<double> r(num_w());
  for (std::size_t w = 0; w < num_w(); ++w) r[w] = empirical_risk(w, s);
  return r;
}

double LearnerInstance::population_risk(std::size_t w) const {
  std::vector<double> terms(num_z());
  for (std::size_t z = 0; z < num_z(); ++z) terms[z] = mu[z] * loss[w][z];
  return compensated_sum(std::move(terms));
}

std::vector<double> LearnerInstance::population_risks() const {
  std::vector<double> r(num_w());
  for (std::size_t w = 0; w < num_w(); ++w) r[w] = population_risk(w);
  return r;
}

std::size_t dataset_count(const LearnerInstance& inst, std::size_t guard) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (count > guard / inst.num_z()) {
      throw SizeError("dataset enumeration exceeds the guard of " + std::to_string(guard));
    }
    count *= inst.num_z();
  }
  if (count > guard) throw SizeError("dataset enumeration exceeds the guard of " + std::to_string(guard));
  return count;
}

Dataset dataset_at(const LearnerInstance& inst, std::size_t k) {
  Dataset s(inst.n);
  for (std::size_t i = inst.n; i-- > 0;) {
    s[i] = k % inst.num_z();
    k /= inst.num_z();
  }
  return s;
}

double dataset_probability(const LearnerInstance& inst, const Dataset& s) {
  double p = 1.0;
  for (std::size_t z : s) p *= inst.mu[z];
  return p;
}

ProbVec gibbs_posterior(const LearnerInstance& inst, const Dataset& s) {
  if (s.size() != inst.n) throw DomainError("dataset length differs from n");
  std::vector<double> logs(inst.num_w());
  for (std::size_t w = 0; w < inst.num_w(); ++w) {
    logs[w] = std::log(inst.prior[w]) - inst.beta * inst.empirical_risk(w, s);
  }
  return as_probvec(inst.prior, normalized_from_logs(logs));
}

Kernel gibbs_kernel(const LearnerInstance& inst) {
  const std::size_t count = dataset_count(inst);
  Kernel k;
  k.reserve(count);
  for (std::size_t i = 0; i < count; ++i) k.push_back(gibbs_posterior(inst, dataset_at(inst, i)));
  return k;
}

Kernel constant_kernel(const LearnerInstance& inst, const ProbVec& p) {
  return Kernel(dataset_count(inst), p);
}

std::string to_string(RegKind kind) {
  switch (kind) {
    case RegKind::JS: return "js";
    case RegKind::Renyi: return "renyi";
    case RegKind::KL: return "kl";
  }
  return "unknown";
}

double regularizer(std::span<const double> p, std::span<const double> prior, RegSpec reg) {
  switch (reg.kind) {
    case RegKind::JS: return js_div(p, prior, reg.alpha);
    case RegKind::Renyi: return renyi_div(prior, p, reg.alpha);
    case RegKind::KL: return kl(p, prior);
  }
  return kInf;
}

double regularizer_extended(std::span<const double> p, std::span<const double> prior,
                            RegSpec reg) {
  const double a = reg.alpha;
  std::vector<double> terms(p.size());
  switch (reg.kind) {
    case RegKind::JS:
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double m = a * prior[i] + (1.0 - a) * p[i];
        terms[i] = a * prior[i] * std::log(prior[i] / m) + (1.0 - a) * p[i] * std::log(p[i] / m);
      }
      return compensated_sum(std::move(terms));
    case RegKind::Renyi:
      for (std::size_t i = 0; i < p.size(); ++i) {
        terms[i] = std::pow(p[i], a) * std::pow(prior[i], 1.0 - a);
      }
      return std::log(compensated_sum(std::move(terms))) / (a - 1.0);
    case RegKind::KL:
      for (std::size_t i = 0; i < p.size(); ++i) terms[i] = p[i] * std::log(p[i] / prior[i]);
      return compensated_sum(std::move(terms));
  }
  return kInf;
}

std::vector<double> regularizer_gradient(std::span<const double> p,
                                         std::span<const double> prior, RegSpec reg) {
  std::vector<double> g(p.size());
  const double a = reg.alpha;
  switch (reg.kind) {
    case RegKind::JS:
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double m = a * prior[i] + (1.0 - a) * p[i];
        g[i] = (1.0 - a) * std::log(p[i] / m);
      }
      break;
    case RegKind::Renyi: {
      std::vector<double> terms(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) {
        terms[i] = std::pow(p[i], a) * std::pow(prior[i], 1.0 - a);
      }
      const double s = compensated_sum(terms);
      for (std::size_t i = 0; i < p.size(); ++i) {
        g[i] = -a / (1.0 - a) * std::pow(prior[i] / p[i], 1.0 - a) / s;
      }
      break;
    }
    case RegKind::KL:
      for (std::size_t i = 0; i < p.size(); ++i) g[i] = std::log(p[i] / prior[i]) + 1.0;
      break;
  }
  return g;
}

double regularized_objective(std::span<const double> p, const std::vector<double>& risks,
                             std::span<const double> prior, double beta, RegSpec reg) {
  return dot(p, risks) + regularizer(p, prior, reg) / beta;
}

std::vector<double> regularized_gradient(std::span<const double> p,
                                         const std::vector<double>& risks,
                                         std::span<const double> prior, double beta, RegSpec reg) {
  std::vector<double> g = regularizer_gradient(p, prior, reg);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = risks[i] + g[i] / beta;
  return g;
}

std::vector<double> project_simplex(std::vector<double> y) {
  std::vector<double> u = y;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cum += u[j];
    const double t = (cum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  for (double& v : y) v = std::max(v - theta, 0.0);
  return y;
}

SolveResult minimize_on_simplex(const std::vector<double>& risks, const ProbVec& prior,
                                double beta, RegSpec reg, const SolverOptions& opt) {
  if (risks.size() != prior.size()) throw DomainError("risk vector and prior differ in size");
  if (reg.kind != RegKind::KL) Alpha{reg.alpha};
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  const std::span<const double> q = prior.mass();
  const std::size_t k = risks.size();

  auto objective = [&](const std::vector<double>& p) {
    return regularized_objective(p, risks, q, beta, reg);
  };
  auto gradient = [&](const std::vector<double>& p) {
    return regularized_gradient(p, risks, q, beta, reg);
  };
  auto entropic_step = [&](const std::vector<double>& p, const std::vector<double>& g,
                           double eta) {
    std::vector<double> logs(k);
    for (std::size_t i = 0; i < k; ++i) logs[i] = std::log(p[i]) - eta * g[i];
    return floored(normalized_from_logs(logs));
  };

  std::vector<double> p(q.begin(), q.end());
  double f = objective(p);
  std::vector<double> g = gradient(p);
  double cert = certificate_of(p, g);
  std::vector<double> best_p = p;
  double best_cert = cert, best_f = f;
  auto record = [&] {
    if (cert < best_cert) {
      best_cert = cert;
      best_p = p;
      best_f = f;
    }
  };

  const double spread = *std::max_element(g.begin(), g.end()) - *std::min_element(g.begin(), g.end());
  double eta = 1.0 / std::max(1.0, spread);
  std::size_t it = 0;
  bool stalled = false;

  while (cert > opt.tolerance && it < opt.max_iterations && !stalled) {
    // entropic mirror descent with Armijo backtracking
    for (std::size_t inner = 0; inner < 500 && cert > opt.tolerance && it < opt.max_iterations;
         ++inner) {
      ++it;
      bool accepted = false;
      for (int bt = 0; bt < 200; ++bt) {
        std::vector<double> cand = entropic_step(p, g, eta);
        const double fc = objective(cand);
        double lin = 0.0;
        for (std::size_t i = 0; i < k; ++i) lin += g[i] * (cand[i] - p[i]);
        const double model = f + lin + kl(cand, p) / eta;
        const double slack = 1e-15 * (1.0 + std::abs(f));
        if (std::isfinite(fc) && fc <= model + slack) {
          const bool strict = fc <= model;
          p = std::move(cand);
          f = fc;
          accepted = true;
          if (strict) eta = std::min(eta * 2.0, 1e15);
          break;
        }
        eta *= 0.5;
      }
      if (!accepted) {
        stalled = true;
        break;
      }
      g = gradient(p);
      cert = certificate_of(p, g);
      record();
    }
    // Newton polish in the tangent space of the simplex
    for (int nt = 0; nt < 40 && cert > opt.tolerance; ++nt) {
      const std::vector<double> d = newton_direction(p, g, q, beta, reg);
      if (d.empty()) break;
      double t = 1.0;
      for (std::size_t i = 0; i < k; ++i) {
        if (d[i] < 0.0) t = std::min(t, -0.9 * p[i] / d[i]);
      }
      bool moved = false;
      for (int bt = 0; bt < 60; ++bt, t *= 0.5) {
        std::vector<double> cand(k);
        for (std::size_t i = 0; i < k; ++i) cand[i] = std::max(p[i] + t * d[i], kMassFloor);
        const double zc = compensated_sum(cand);
        for (double& v : cand) v /= zc;
        const double fc = objective(cand);
        const std::vector<double> gc = gradient(cand);
        const double cc = certificate_of(cand, gc);
        if (std::isfinite(fc) && (fc < f || (fc <= f + 1e-15 * (1.0 + std::abs(f)) && cc < cert))) {
          p = std::move(cand);
          f = fc;
          g = gc;
          cert = cc;
          moved = true;
          break;
        }
      }
      record();
      if (!moved) break;
    }
  }

  bool fallback = false;
  if (best_cert > opt.tolerance) {
    // exponentiated gradient with a fixed step from the curvature scale at the best iterate
    fallback = true;
    p = best_p;
    g = gradient(p);
    double curv = 1.0;
    for (std::size_t i = 0; i < k; ++i) curv = std::max(curv, 1.0 / (beta * std::max(p[i], 1e-12)));
    const double step = 1.0 / curv;
    for (std::size_t j = 0; j < opt.max_iterations && best_cert > opt.tolerance; ++j) {
      p = entropic_step(p, g, step);
      g = gradient(p);
      cert = certificate_of(p, g);
      if (cert < best_cert) {
        best_cert = cert;
        best_p = p;
        best_f = objective(p);
      }
    }
  }

  SolveResult res{as_probvec(prior, best_p), best_f, best_cert, it, min_of(best_p), fallback};
  if (best_cert > opt.tolerance) {
    throw ConvergenceError("regularized ERM solver did not reach tolerance", res);
  }
  return res;
}

SolveResult solve_regularized_posterior(const LearnerInstance& inst, const Dataset& s,
                                        RegSpec reg, const SolverOptions& opt) {
  if (s.size() != inst.n) throw DomainError("dataset length differs from n");
  return minimize_on_simplex(inst.empirical_risks(s), inst.prior, inst.beta, reg, opt);
}

KernelSolution solve_regularized_kernel(const LearnerInstance& inst, RegSpec reg,
                                        const SolverOptions& opt) {
  const std::size_t count = dataset_count(inst);
  std::vector<std::optional<SolveResult>> slots(count);
  parallel_for(count, [&](std::size_t i) {
    slots[i] = solve_regularized_posterior(inst, dataset_at(inst, i), reg, opt);
  });
  KernelSolution out;
  for (auto& s : slots) {
    out.kernel.push_back(s->posterior);
    out.per_dataset.push_back(std::move(*s));
  }
  return out;
}

double excess_risk_exact(const LearnerInstance& inst, const Kernel& kernel) {
  const std::size_t count = dataset_count(inst);
  if (kernel.size() != count) throw DomainError("kernel must have one posterior per dataset");
  const std::vector<double> pop = inst.population_risks();
  std::vector<double> terms;
  terms.reserve(count * inst.num_w());
  for (std::size_t k = 0; k < count; ++k) {
    const double ps = dataset_probability(inst, dataset_at(inst, k));
    if (kernel[k].size() != inst.num_w()) throw DomainError("posterior size differs from |W|");
    for (std::size_t w = 0; w < inst.num_w(); ++w) terms.push_back(ps * kernel[k][w] * pop[w]);
  }
  const double best = *std::min_element(pop.begin(), pop.end());
  terms.push_back(-best);
  return std::max(0.0, compensated_sum(std::move(terms)));
}

double gaussian_renyi_to_standard(double m_norm_sq, double beta, double d, Alpha a) {
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  const double av = a.value(), ac = a.complement();
  const double mix = av + ac / beta;
  return 0.5 * av * m_norm_sq / mix + 0.5 * d * std::log(beta) + d / (2.0 * ac) * std::log(mix);
}

namespace {

double js_1d_rule(double m, double beta, double a, std::size_t k) {
  const double s = 1.0 / std::sqrt(beta);
  const double lo = std::min(-40.0, m - 40.0 * s), hi = std::max(40.0, m + 40.0 * s);
  std::vector<double> bps{lo, hi, 0.0, m};
  for (int e = -6; e <= 6; ++e) {
    const double step = std::ldexp(1.0, e);
    for (double c : {0.0 - step, 0.0 + step, m - s * step, m + s * step}) {
      if (c > lo && c < hi) bps.push_back(c);
    }
  }
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  const GaussLegendreRule& gl = gauss_legendre(k);
  const std::vector<double>& gx = gl.nodes;
  const std::vector<double>& gw = gl.weights;
  const double l2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  std::vector<double> terms;
  for (std::size_t p = 0; p + 1 < bps.size(); ++p) {
    const double x0 = bps[p], x1 = bps[p + 1];
    for (std::size_t i = 0; i < k; ++i) {
      const double x = 0.5 * (x1 - x0) * gx[i] + 0.5 * (x1 + x0);
      const double lq = -0.5 * x * x - l2pi;
      const double lp = -0.5 * beta * (x - m) * (x - m) - l2pi + 0.5 * std::log(beta);
      const double la = std::log(a) + lq, lb = std::log1p(-a) + lp;
      const double mx = std::max(la, lb);
      const double lm = mx + std::log1p(std::exp(-std::abs(la - lb)));
      const double f = a * std::exp(lq) * (lq - lm) + (1.0 - a) * std::exp(lp) * (lp - lm);
      terms.push_back(0.5 * (x1 - x0) * gw[i] * f);
    }
  }
  return compensated_sum(std::move(terms));
}

}  // namespace

double gaussian_js_to_standard_1d(double m, double beta, Alpha a) {
  if (!(beta > 0.0) || !std::isfinite(m)) throw DomainError("need finite mean and beta > 0");
  const double coarse = js_1d_rule(m, beta, a.value(), 20);
  const double fine = js_1d_rule(m, beta, a.value(), 30);
  if (std::abs(fine - coarse) > 1e-10) {
    throw AccuracyError("JS quadrature did not converge", std::abs(fine - coarse));
  }
  return std::clamp(fine, 0.0, binary_entropy(a.value()));
}

BoundReport excess_risk_bound(const ExcessBoundParams& p, RegKind kind) {
  for (double v : {p.b, p.lip, p.d, p.beta, p.n, p.w_star_norm_sq}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError("bound parameters must be >= 0");
  }
  if (!(p.beta > 0.0) || !(p.n > 0.0)) throw ParameterError("beta and n must be positive");
  const Alpha a(p.alpha);
  std::vector<double> info = p.info;
  for (double v : info) {
    if (std::isnan(v) || v < -1e-12) throw ParameterError("information values must be >= 0");
  }
  const double info_sum = info.empty() ? 0.0 : std::max(0.0, compensated_sum(info));

  BoundReport rep;
  rep.info = p.info;
  rep.params = {{"alpha", a.value()}, {"b", p.b},   {"lip", p.lip},
                {"d", p.d},           {"beta", p.beta}, {"n", p.n},
                {"w_star_norm_sq", p.w_star_norm_sq}};
  double info_term, div_term;
  if (kind == RegKind::JS) {
    rep.bound_name = "excess_js";
    info_term = std::sqrt(2.0 * p.b * p.b / (p.n * a.value() * a.complement()) * info_sum);
    if (p.js_exact_divergence) {
      if (p.d != 1.0) throw ParameterError("exact JS divergence term needs d = 1");
      div_term = gaussian_js_to_standard_1d(std::sqrt(p.w_star_norm_sq), p.beta, a);
    } else {
      div_term = binary_entropy(a.value());
    }
  } else if (kind == RegKind::Renyi) {
    rep.bound_name = "excess_renyi";
    info_term = std::sqrt(2.0 * p.b * p.b / (p.n * a.value()) * info_sum);
    div_term = gaussian_renyi_to_standard(p.w_star_norm_sq, p.beta, p.d, a);
  } else {
    throw ParameterError("excess risk bound is defined for js and renyi");
  }
  if (info_term == kInf) info_term = kInf;
  const double lip_term = p.lip * std::sqrt(p.d) / p.beta;
  rep.params["info_term"] = info_term;
  rep.params["lipschitz_term"] = lip_term;
  rep.params["divergence_term"] = div_term / p.beta;
  rep.value = info_term + lip_term + div_term / p.beta;
  return rep;
}

double renyi_divergence_terms_display(double w_star_norm_sq, double d, double n, Alpha a) {
  if (!(n > 0.0)) throw ParameterError("n must be positive");
  const double rn = std::sqrt(n);
  return w_star_norm_sq / (2.0 * rn) + d * std::log(n) / (4.0 * rn) +
         d * std::log(a.value()) / (2.0 * rn * a.complement());
}

}  // namespace genbound
