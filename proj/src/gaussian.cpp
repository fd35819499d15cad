#include "genbound/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "genbound/numerics.hpp"
#include "genbound/parallel.hpp"
#include "genbound/rng.hpp"

namespace genbound {

namespace {

void check_rho(double rho) {
  if (!(std::abs(rho) < 1.0)) throw DomainError("correlation must lie in (-1, 1)");
}

struct Panels {
  std::vector<double> x, w;
};

// Composite k-point Gauss-Legendre on [0, top] with breakpoints
// scale/4, scale/2, scale, 2 scale, ...
Panels half_line_rule(double scale, double top, std::size_t k) {
  const GaussLegendreRule& gl = gauss_legendre(k);
  const std::vector<double>& gx = gl.nodes;
  const std::vector<double>& gw = gl.weights;
  std::vector<double> bps{0.0};
  for (double b = 0.25 * scale; b < top; b *= 2.0) bps.push_back(b);
  bps.push_back(top);
  Panels out;
  for (std::size_t p = 0; p + 1 < bps.size(); ++p) {
    const double lo = bps[p], hi = bps[p + 1];
    for (std::size_t i = 0; i < k; ++i) {
      out.x.push_back(0.5 * (hi - lo) * gx[i] + 0.5 * (hi + lo));
      out.w.push_back(0.5 * (hi - lo) * gw[i]);
    }
  }
  return out;
}

double log_add(double a, double b) {
  const double m = std::max(a, b);
  if (m == -kInf) return -kInf;
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

// In principal axes u = (x+y)/sqrt2, v = (x-y)/sqrt2 the product law is
// N(0, I) and the joint is N(0, diag(1+rho, 1-rho)); the integrand is even in both.
double js_info_rule(double rho, double a, std::size_t k) {
  const double r = std::abs(rho);
  const double vu = 1.0 + r, vv = 1.0 - r;
  const Panels pu = half_line_rule(1.0, 14.0, k);
  const Panels pv = half_line_rule(std::sqrt(vv), 14.0, k);
  const double log2pi = std::log(2.0 * std::numbers::pi);
  const double half_logdet = 0.5 * std::log1p(-r * r);
  const double la = std::log(a), lb = std::log1p(-a);
  std::vector<double> terms;
  terms.reserve(pu.x.size() * pv.x.size());
  for (std::size_t i = 0; i < pu.x.size(); ++i) {
    const double u = pu.x[i];
    for (std::size_t j = 0; j < pv.x.size(); ++j) {
      const double v = pv.x[j];
      const double lp = -0.5 * (u * u + v * v) - log2pi;
      const double lj = -0.5 * (u * u / vu + v * v / vv) - log2pi - half_logdet;
      const double lm = log_add(la + lp, lb + lj);
      const double f = a * std::exp(lp) * (lp - lm) + (1.0 - a) * std::exp(lj) * (lj - lm);
      terms.push_back(4.0 * pu.w[i] * pv.w[j] * f);
    }
  }
  return compensated_sum(std::move(terms));
}

double truncated_square(double w, double z, double c2) { return std::min((w - z) * (w - z), c2); }

}  // namespace

void ToyConfig::validate() const {
  if (!(variance > 0.0) || !std::isfinite(variance)) throw DomainError("variance must be positive");
  if (!std::isfinite(mean)) throw DomainError("mean must be finite");
  if (!(t > 0.0 && t < 1.0)) throw DomainError("t must lie in (0, 1)");
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("c must be positive");
  Alpha{alpha};
  if (mc_samples == 0) throw DomainError("mc_samples must be positive");
}

double toy_rho(const ToyConfig& cfg, int i) {
  if (i != 1 && i != 2) throw DomainError("sample index must be 1 or 2");
  const double t = cfg.t;
  const double num = i == 1 ? t : 1.0 - t;
  return num / std::sqrt(t * t + (1.0 - t) * (1.0 - t));
}

ToyGeometry toy_geometry(const ToyConfig& cfg) {
  cfg.validate();
  const double s2 = cfg.variance, t = cfg.t;
  ToyGeometry g;
  g.rho1 = toy_rho(cfg, 1);
  g.rho2 = toy_rho(cfg, 2);
  g.var_w = s2 * (t * t + (1.0 - t) * (1.0 - t));
  g.cov_joint1 = {{{g.var_w, t * s2}, {t * s2, s2}}};
  g.cov_joint2 = {{{g.var_w, (1.0 - t) * s2}, {(1.0 - t) * s2, s2}}};
  return g;
}

double gaussian_mi(double rho) {
  check_rho(rho);
  return -0.5 * std::log1p(-rho * rho);
}

double gaussian_lautum(double rho) {
  check_rho(rho);
  const double r2 = rho * rho;
  return r2 / (1.0 - r2) + 0.5 * std::log1p(-r2);
}

double gaussian_renyi_info(double rho, Alpha a) {
  check_rho(rho);
  const double r2 = rho * rho, av = a.value();
  // det(a Sigma_joint + (1-a) Sigma_prod) = 1 - a^2 rho^2 in correlation units
  const double v = (std::log1p(-av * av * r2) - av * std::log1p(-r2)) / (2.0 * a.complement());
  return std::max(0.0, v);
}

double gaussian_js_info(double rho, Alpha a) {
  check_rho(rho);
  if (rho == 0.0) return 0.0;
  const double coarse = js_info_rule(rho, a.value(), 20);
  const double fine = js_info_rule(rho, a.value(), 30);
  const double err = std::abs(fine - coarse);
  if (err > 1e-10) throw AccuracyError("JS mixture-entropy quadrature did not converge", err);
  return std::max(0.0, fine);
}

McEstimate gaussian_js_info_mc(double rho, Alpha a, std::size_t samples, std::uint64_t seed) {
  check_rho(rho);
  if (samples < 2) throw DomainError("need at least two samples");
  const double av = a.value();
  const std::size_t np = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(av * samples)), 1, samples - 1);
  const std::size_t nj = samples - np;
  const double log2pi = std::log(2.0 * std::numbers::pi);
  const double det = 1.0 - rho * rho, sd = std::sqrt(det);
  const double la = std::log(av), lb = std::log1p(-av);
  auto logs = [&](double x, double y, double& lp, double& lj, double& lm) {
    lp = -0.5 * (x * x + y * y) - log2pi;
    lj = -0.5 * (x * x - 2.0 * rho * x * y + y * y) / det - log2pi - 0.5 * std::log(det);
    lm = log_add(la + lp, lb + lj);
  };
  Rng rng = make_rng(seed, 0);
  NormalSampler normal;
  double mp = 0.0, qp = 0.0, mj = 0.0, qj = 0.0;
  for (std::size_t k = 0; k < np; ++k) {
    const double x = normal(rng), y = normal(rng);
    double lp, lj, lm;
    logs(x, y, lp, lj, lm);
    const double d = (lp - lm) - mp;
    mp += d / (k + 1.0);
    qp += d * ((lp - lm) - mp);
  }
  for (std::size_t k = 0; k < nj; ++k) {
    const double u = normal(rng), v = normal(rng);
    const double x = u, y = rho * u + sd * v;
    double lp, lj, lm;
    logs(x, y, lp, lj, lm);
    const double d = (lj - lm) - mj;
    mj += d / (k + 1.0);
    qj += d * ((lj - lm) - mj);
  }
  const double var_p = np > 1 ? qp / (np - 1.0) : 0.0;
  const double var_j = nj > 1 ? qj / (nj - 1.0) : 0.0;
  return {av * mp + (1.0 - av) * mj,
          std::sqrt(av * av * var_p / np + (1.0 - av) * (1.0 - av) * var_j / nj)};
}

double gaussian_entropy_1d(double variance) {
  if (!(variance > 0.0)) throw DomainError("variance must be positive");
  return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * variance);
}

double gaussian_entropy_2d(const Mat2& cov) {
  const double det = cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0];
  if (!(det > 0.0) || !(cov[0][0] > 0.0)) throw DomainError("covariance must be positive definite");
  const double twopie = 2.0 * std::numbers::pi * std::numbers::e;
  return 0.5 * std::log(twopie * twopie * det);
}

double toy_information(const ToyConfig& cfg, int i, InfoSpec spec) {
  cfg.validate();
  const double rho = toy_rho(cfg, i);
  switch (spec.kind) {
    case InfoKind::MI: return gaussian_mi(rho);
    case InfoKind::JS: return gaussian_js_info(rho, Alpha(spec.alpha));
    case InfoKind::Renyi: return gaussian_renyi_info(rho, Alpha(spec.alpha));
    default: throw DomainError("toy information supports mi, js and renyi");
  }
}

McEstimate toy_true_gen_error(const ToyConfig& cfg) {
  cfg.validate();
  if (cfg.mc_samples < 2) throw DomainError("need at least two samples");
  const double sd = std::sqrt(cfg.variance), c2 = cfg.c * cfg.c, t = cfg.t;
  Rng rng = make_rng(cfg.seed, 0);
  NormalSampler normal;
  double mean = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < cfg.mc_samples; ++k) {
    const double z1 = cfg.mean + sd * normal(rng);
    const double z2 = cfg.mean + sd * normal(rng);
    const double zt = cfg.mean + sd * normal(rng);
    const double w = t * z1 + (1.0 - t) * z2;
    const double g = truncated_square(w, zt, c2) -
                     0.5 * (truncated_square(w, z1, c2) + truncated_square(w, z2, c2));
    const double d = g - mean;
    mean += d / (k + 1.0);
    m2 += d * (g - mean);
  }
  const double n = static_cast<double>(cfg.mc_samples);
  return {mean, std::sqrt(m2 / (n - 1.0) / n)};
}

SubGaussianParams toy_sub_gaussian(const ToyConfig& cfg) {
  return SubGaussianParams::bounded(0.0, cfg.c * cfg.c);
}

std::vector<double> default_t_grid() {
  std::vector<double> grid;
  const double step = 0.48 / 25.0;
  for (int k = 1; k <= 25; ++k) grid.push_back(k == 25 ? 0.5 : 0.02 + step * k);
  return grid;
}

std::vector<SweepRow> toy_sweep(const ToyConfig& base, const std::vector<double>& t_grid,
                                const std::vector<double>& alphas) {
  base.validate();
  for (double t : t_grid) {
    if (!(t > 0.0 && t <= 0.5)) throw DomainError("sweep t values must lie in (0, 0.5]");
  }
  for (double a : alphas) Alpha{a};
  std::vector<SweepRow> rows(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t r) {
    ToyConfig cfg = base;
    cfg.t = t_grid[r];
    cfg.seed = derive_seed(base.seed, r);
    const SubGaussianParams sg = toy_sub_gaussian(cfg);
    SweepRow row;
    row.t = cfg.t;
    row.gen = toy_true_gen_error(cfg);
    auto pair = [&](InfoSpec spec) {
      return std::vector<double>{toy_information(cfg, 1, spec), toy_information(cfg, 2, spec)};
    };
    row.bound_mi = gen_bound(pair(InfoSpec::mi()), BoundSpec::mi(), sg).value;
    for (double a : alphas) {
      row.bound_js.push_back(gen_bound(pair(InfoSpec::js(a)), BoundSpec::js(a), sg).value);
      row.bound_renyi.push_back(
          gen_bound(pair(InfoSpec::renyi(a)), BoundSpec::renyi(a), sg).value);
    }
    rows[r] = std::move(row);
  });
  return rows;
}

}  // namespace genbound
