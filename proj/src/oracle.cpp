#include "genbound/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace genbound {

namespace {

std::vector<double> matrix_times_loss_terms(const JointDist& j, const LearnerInstance& inst) {
  std::vector<double> terms;
  terms.reserve(j.rows() * j.cols());
  for (std::size_t w = 0; w < j.rows(); ++w) {
    for (std::size_t z = 0; z < j.cols(); ++z) terms.push_back(j(w, z) * inst.loss[w][z]);
  }
  return terms;
}

double expected_population_risk(const ProbVec& p_w, const LearnerInstance& inst) {
  std::vector<double> terms;
  for (std::size_t w = 0; w < inst.num_w(); ++w) {
    for (std::size_t z = 0; z < inst.num_z(); ++z) {
      terms.push_back(p_w[w] * inst.mu[z] * inst.loss[w][z]);
    }
  }
  return compensated_sum(std::move(terms));
}

void for_each_composition(std::size_t total, std::size_t parts,
                          const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> c(parts, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t idx, std::size_t left) {
    if (idx + 1 == parts) {
      c[idx] = left;
      fn(c);
      return;
    }
    for (std::size_t k = 0; k <= left; ++k) {
      c[idx] = k;
      rec(idx + 1, left - k);
    }
  };
  rec(0, total);
}

double multinomial_probability(const std::vector<std::size_t>& counts, const ProbVec& mu) {
  double n = 0.0;
  double lp = 0.0;
  for (std::size_t z = 0; z < counts.size(); ++z) {
    if (counts[z] == 0) continue;
    if (mu[z] == 0.0) return 0.0;
    n += static_cast<double>(counts[z]);
    lp += counts[z] * std::log(mu[z]) - std::lgamma(counts[z] + 1.0);
  }
  return std::exp(lp + std::lgamma(n + 1.0));
}

double exp_draw(Rng& rng) { return -std::log1p(-uniform01(rng)); }

}  // namespace

EnumeratedLearner enumerate_learner(const LearnerInstance& inst, const Kernel& kernel) {
  const std::size_t count = dataset_count(inst);
  if (kernel.size() != count) throw DomainError("kernel must have one posterior per dataset");
  const std::size_t nw = inst.num_w(), nz = inst.num_z(), n = inst.n;

  std::vector<std::vector<double>> pw_terms(nw);
  std::vector<std::vector<std::vector<double>>> joint_terms(
      n, std::vector<std::vector<double>>(nw * nz));
  std::vector<double> emp_terms;
  for (std::size_t k = 0; k < count; ++k) {
    const Dataset s = dataset_at(inst, k);
    const double ps = dataset_probability(inst, s);
    if (kernel[k].size() != nw) throw DomainError("posterior size differs from |W|");
    for (std::size_t w = 0; w < nw; ++w) {
      const double pws = ps * kernel[k][w];
      pw_terms[w].push_back(pws);
      for (std::size_t i = 0; i < n; ++i) joint_terms[i][w * nz + s[i]].push_back(pws);
      emp_terms.push_back(pws * inst.empirical_risk(w, s));
    }
  }
  std::vector<double> pw(nw);
  for (std::size_t w = 0; w < nw; ++w) pw[w] = compensated_sum(pw_terms[w]);
  ProbVec p_w(inst.w_atoms, pw);

  std::vector<JointDist> joints;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> mass(nw * nz);
    for (std::size_t c = 0; c < mass.size(); ++c) mass[c] = compensated_sum(joint_terms[i][c]);
    joints.emplace_back(inst.w_atoms, inst.mu.atoms(), std::move(mass));
  }

  const double pop = expected_population_risk(p_w, inst);
  std::vector<double> direct = std::move(emp_terms);
  for (double& v : direct) v = -v;
  direct.push_back(pop);
  const double gen_direct = compensated_sum(std::move(direct));

  std::vector<double> per_sample;
  for (const JointDist& j : joints) {
    std::vector<double> t = matrix_times_loss_terms(j, inst);
    for (double& v : t) v = -v / static_cast<double>(n);
    per_sample.insert(per_sample.end(), t.begin(), t.end());
  }
  per_sample.push_back(pop);
  const double gen_split = compensated_sum(std::move(per_sample));

  return {inst, kernel, p_w, std::move(joints), gen_direct, gen_split};
}

CountKernel gibbs_count_kernel(const LearnerInstance& inst) {
  return [inst](const std::vector<std::size_t>& counts) {
    std::vector<double> logs(inst.num_w());
    double total = 0.0;
    for (std::size_t c : counts) total += static_cast<double>(c);
    for (std::size_t w = 0; w < inst.num_w(); ++w) {
      double risk = 0.0;
      for (std::size_t z = 0; z < counts.size(); ++z) risk += counts[z] * inst.loss[w][z];
      logs[w] = std::log(inst.prior[w]) - inst.beta * risk / total;
    }
    const double m = *std::max_element(logs.begin(), logs.end());
    std::vector<double> p(logs.size());
    for (std::size_t w = 0; w < p.size(); ++w) p[w] = std::exp(logs[w] - m);
    const double zsum = compensated_sum(p);
    for (double& v : p) v /= zsum;
    return ProbVec(inst.w_atoms, std::move(p));
  };
}

ExchangeableLearner enumerate_exchangeable(const LearnerInstance& inst, const CountKernel& kernel) {
  const std::size_t nw = inst.num_w(), nz = inst.num_z(), n = inst.n;
  std::vector<std::vector<double>> joint_terms(nw * nz);
  for_each_composition(n - 1, nz, [&](const std::vector<std::size_t>& others) {
    const double p_others = multinomial_probability(others, inst.mu);
    if (p_others == 0.0) return;
    std::vector<std::size_t> counts = others;
    for (std::size_t z = 0; z < nz; ++z) {
      if (inst.mu[z] == 0.0) continue;
      counts[z] += 1;
      const ProbVec post = kernel(counts);
      counts[z] -= 1;
      for (std::size_t w = 0; w < nw; ++w) {
        joint_terms[w * nz + z].push_back(inst.mu[z] * p_others * post[w]);
      }
    }
  });
  std::vector<double> mass(nw * nz);
  for (std::size_t c = 0; c < mass.size(); ++c) mass[c] = compensated_sum(joint_terms[c]);
  JointDist joint(inst.w_atoms, inst.mu.atoms(), std::move(mass));

  std::vector<std::vector<double>> pw_terms(nw);
  std::vector<double> emp_terms;
  for_each_composition(n, nz, [&](const std::vector<std::size_t>& counts) {
    const double pc = multinomial_probability(counts, inst.mu);
    if (pc == 0.0) return;
    const ProbVec post = kernel(counts);
    for (std::size_t w = 0; w < nw; ++w) {
      pw_terms[w].push_back(pc * post[w]);
      double risk = 0.0;
      for (std::size_t z = 0; z < nz; ++z) risk += counts[z] * inst.loss[w][z];
      emp_terms.push_back(-pc * post[w] * risk / static_cast<double>(n));
    }
  });
  std::vector<double> pw(nw);
  for (std::size_t w = 0; w < nw; ++w) pw[w] = compensated_sum(pw_terms[w]);
  const ProbVec p_w(inst.w_atoms, std::move(pw));
  const double pop = expected_population_risk(p_w, inst);
  emp_terms.push_back(pop);
  const double gen_direct = compensated_sum(std::move(emp_terms));

  std::vector<double> split = matrix_times_loss_terms(joint, inst);
  for (double& v : split) v = -v;
  split.push_back(expected_population_risk(joint.w_marginal(), inst));
  const double gen = compensated_sum(std::move(split));
  return {std::move(joint), gen, gen_direct};
}

GaussianLaw::GaussianLaw(std::vector<double> mean, std::vector<std::vector<double>> cov)
    : mean_(std::move(mean)) {
  const std::size_t d = mean_.size();
  if (d == 0 || cov.size() != d) throw DomainError("covariance shape differs from mean");
  chol_.assign(d, std::vector<double>(d, 0.0));
  double logdet = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    if (cov[i].size() != d) throw DomainError("covariance must be square");
    for (std::size_t j = 0; j <= i; ++j) {
      double s = cov[i][j];
      for (std::size_t k = 0; k < j; ++k) s -= chol_[i][k] * chol_[j][k];
      if (i == j) {
        if (!(s > 0.0)) throw DomainError("covariance must be positive definite");
        chol_[i][i] = std::sqrt(s);
        logdet += 2.0 * std::log(chol_[i][i]);
      } else {
        chol_[i][j] = s / chol_[j][j];
      }
    }
  }
  log_norm_ = -0.5 * (static_cast<double>(d) * std::log(2.0 * std::numbers::pi) + logdet);
}

void GaussianLaw::sample(Rng& rng, NormalSampler& normal, std::vector<double>& out) const {
  const std::size_t d = dim();
  std::vector<double> e(d);
  for (double& v : e) v = normal(rng);
  out.assign(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    double s = mean_[i];
    for (std::size_t k = 0; k <= i; ++k) s += chol_[i][k] * e[k];
    out[i] = s;
  }
}

double GaussianLaw::log_pdf(const std::vector<double>& x) const {
  const std::size_t d = dim();
  std::vector<double> y(d);
  double q = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double s = x[i] - mean_[i];
    for (std::size_t k = 0; k < i; ++k) s -= chol_[i][k] * y[k];
    y[i] = s / chol_[i][i];
    q += y[i] * y[i];
  }
  return log_norm_ - 0.5 * q;
}

McEstimate mc_divergence(const Density& p, const Density& q, McDivergenceSpec spec,
                         std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 10000) throw DomainError("mc_divergence needs at least 10^4 samples");
  if (p.dim() != q.dim()) throw DomainError("densities differ in dimension");
  Rng rng = make_rng(seed, 0);
  NormalSampler normal;
  std::vector<double> x;

  struct Running {
    double mean = 0.0, m2 = 0.0;
    std::size_t n = 0;
    void add(double v) {
      ++n;
      const double d = v - mean;
      mean += d / n;
      m2 += d * (v - mean);
    }
    double var_of_mean() const { return n > 1 ? m2 / (n - 1.0) / n : 0.0; }
  };

  switch (spec.kind) {
    case McKind::KL: {
      Running r;
      for (std::size_t k = 0; k < n_samples; ++k) {
        p.sample(rng, normal, x);
        r.add(p.log_pdf(x) - q.log_pdf(x));
      }
      return {r.mean, std::sqrt(r.var_of_mean())};
    }
    case McKind::JS: {
      const double a = Alpha(spec.alpha).value();
      const double la = std::log(a), lb = std::log1p(-a);
      auto log_mix = [&](double lq, double lp) {
        const double u = la + lq, v = lb + lp;
        return std::max(u, v) + std::log1p(std::exp(-std::abs(u - v)));
      };
      const std::size_t nq = std::clamp<std::size_t>(
          static_cast<std::size_t>(std::llround(a * n_samples)), 2, n_samples - 2);
      Running rq, rp;
      for (std::size_t k = 0; k < nq; ++k) {
        q.sample(rng, normal, x);
        const double lq = q.log_pdf(x), lp = p.log_pdf(x);
        rq.add(lq - log_mix(lq, lp));
      }
      for (std::size_t k = nq; k < n_samples; ++k) {
        p.sample(rng, normal, x);
        const double lq = q.log_pdf(x), lp = p.log_pdf(x);
        rp.add(lp - log_mix(lq, lp));
      }
      return {a * rq.mean + (1.0 - a) * rp.mean,
              std::sqrt(a * a * rq.var_of_mean() + (1.0 - a) * (1.0 - a) * rp.var_of_mean())};
    }
    case McKind::Renyi: {
      const double a = Alpha(spec.alpha).value();
      // integral of q^a p^(1-a); the proposal is chosen so the estimator has finite variance
      const bool from_q = a >= 0.5;
      Running r;
      for (std::size_t k = 0; k < n_samples; ++k) {
        if (from_q) {
          q.sample(rng, normal, x);
          r.add(std::exp((1.0 - a) * (p.log_pdf(x) - q.log_pdf(x))));
        } else {
          p.sample(rng, normal, x);
          r.add(std::exp(a * (q.log_pdf(x) - p.log_pdf(x))));
        }
      }
      const double m = r.mean;
      return {std::log(m) / (a - 1.0), std::sqrt(r.var_of_mean()) / (m * (1.0 - a))};
    }
  }
  return {0.0, 0.0};
}

double finite_diff_grad_check(const std::function<double(const std::vector<double>&)>& objective,
                              const std::vector<double>& analytic_grad,
                              const std::vector<double>& point, double step) {
  if (!(step >= 1e-8 && step <= 1e-4)) throw DomainError("step must lie in [1e-8, 1e-4]");
  if (analytic_grad.size() != point.size()) throw DomainError("gradient size differs from point");
  for (double v : point) {
    if (!(v > 2.0 * step)) throw DomainError("point is too near the boundary");
  }
  double worst = 0.0;
  std::vector<double> x = point;
  for (std::size_t i = 0; i < point.size(); ++i) {
    x[i] = point[i] + step;
    const double fp = objective(x);
    x[i] = point[i] - step;
    const double fm = objective(x);
    x[i] = point[i];
    const double fd = (fp - fm) / (2.0 * step);
    worst = std::max(worst, std::abs(analytic_grad[i] - fd) / (1.0 + std::abs(analytic_grad[i])));
  }
  return worst;
}

GridOptimum grid_search_simplex3(const std::function<double(const std::vector<double>&)>& f,
                                 double step) {
  if (!(step > 0.0 && step <= 0.5)) throw DomainError("grid step must lie in (0, 0.5]");
  const auto n = static_cast<long>(std::llround(1.0 / step));
  GridOptimum best{{1.0, 0.0, 0.0}, kInf};
  std::vector<double> p(3);
  for (long i = 0; i <= n; ++i) {
    for (long j = 0; i + j <= n; ++j) {
      p[0] = static_cast<double>(i) / n;
      p[1] = static_cast<double>(j) / n;
      p[2] = static_cast<double>(n - i - j) / n;
      const double v = f(p);
      if (v < best.value) best = {p, v};
    }
  }
  double h = 1.0 / n;
  constexpr int kHalf = 10;
  while (h > 1e-12) {
    const double x0 = best.point[0], y0 = best.point[1];
    const double sub = h / kHalf * 2.0;
    bool moved_to_edge = false;
    for (int a = -kHalf; a <= kHalf; ++a) {
      for (int b = -kHalf; b <= kHalf; ++b) {
        const double x = x0 + a * sub, y = y0 + b * sub;
        if (x < 0.0 || y < 0.0 || x + y > 1.0) continue;
        p = {x, y, std::max(0.0, 1.0 - x - y)};
        const double v = f(p);
        if (v < best.value) {
          best = {p, v};
          moved_to_edge = std::abs(a) == kHalf || std::abs(b) == kHalf;
        }
      }
    }
    if (!moved_to_edge) h /= 5.0;
  }
  return best;
}

std::vector<double> random_simplex_point(Rng& rng, std::size_t k, double zero_prob) {
  std::vector<double> v(k);
  double total = 0.0;
  for (double& x : v) {
    x = uniform01(rng) < zero_prob ? 0.0 : exp_draw(rng);
    total += x;
  }
  if (total == 0.0) {
    v[static_cast<std::size_t>(uniform01(rng) * k)] = 1.0;
    total = 1.0;
  }
  for (double& x : v) x /= total;
  // exact closure on the simplex
  const double s = compensated_sum(v);
  for (double& x : v) x /= s;
  return v;
}

JointDist random_joint(Rng& rng, std::size_t rows, std::size_t cols, double zero_prob) {
  return JointDist(rows, cols, random_simplex_point(rng, rows * cols, zero_prob));
}

JointDist random_full_support_joint(Rng& rng, const JointDist& like) {
  std::vector<double> v = random_simplex_point(rng, like.rows() * like.cols());
  for (double& x : v) x = std::max(x, 1e-12);
  const double s = compensated_sum(v);
  for (double& x : v) x /= s;
  return JointDist(like.w_atoms(), like.z_atoms(), std::move(v));
}

FuzzCase random_fuzz_case(std::uint64_t seed) {
  Rng rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(uniform01(rng) * (hi - lo + 1));
  };
  const std::size_t nw = pick(2, 4), nz = pick(2, 4), n = pick(1, 3);
  std::vector<std::string> w_atoms, z_atoms;
  for (std::size_t w = 0; w < nw; ++w) w_atoms.push_back("w" + std::to_string(w));
  for (std::size_t z = 0; z < nz; ++z) z_atoms.push_back("z" + std::to_string(z));
  ProbVec mu(z_atoms, random_simplex_point(rng, nz, 0.1));
  const bool binary = uniform01(rng) < 0.3;
  std::vector<std::vector<double>> loss(nw, std::vector<double>(nz));
  for (auto& row : loss) {
    for (double& v : row) v = binary ? (uniform01(rng) < 0.5 ? 0.0 : 1.0) : uniform01(rng);
  }
  const double beta = 0.5 + 4.5 * uniform01(rng);
  LearnerInstance inst(mu, w_atoms, loss, n, beta,
                       ProbVec(w_atoms, std::vector<double>(nw, 1.0 / nw)));

  const double style = uniform01(rng);
  Kernel kernel;
  const std::size_t count = dataset_count(inst);
  for (std::size_t k = 0; k < count; ++k) {
    const Dataset s = dataset_at(inst, k);
    if (style < 0.2) {
      kernel.push_back(gibbs_posterior(inst, s));
      continue;
    }
    const double u = uniform01(rng);
    if (u < 0.3) {
      std::vector<double> m(nw, 0.0);
      m[pick(0, nw - 1)] = 1.0;
      kernel.emplace_back(w_atoms, std::move(m));
    } else {
      kernel.emplace_back(w_atoms, random_simplex_point(rng, nw, 0.2));
    }
  }
  return {std::move(inst), std::move(kernel)};
}

}  // namespace genbound
