#include "genbound/adm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "genbound/rng.hpp"

namespace genbound {

namespace {

void require_nonneg_param(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw ParameterError(std::string(name) + " must be a finite nonnegative number");
  }
}

void require_info(const std::vector<double>& info) {
  if (info.empty()) throw ParameterError("information list is empty");
  for (double v : info) {
    if (std::isnan(v)) throw ParameterError("information value is NaN");
    if (v < -1e-12) throw ParameterError("information value is negative");
  }
}

double sqrt_term(double scale, double info) {
  if (info == kInf) return kInf;
  return std::sqrt(scale * std::max(0.0, info));
}

double average_of(std::vector<double> terms) {
  const double n = static_cast<double>(terms.size());
  return compensated_sum(std::move(terms)) / n;
}

struct ResolvedParams {
  std::optional<double> sigma, gamma, sigma_alpha, b;
};

ResolvedParams resolve(const SubGaussianParams& sg) {
  ResolvedParams r{sg.sigma, sg.gamma, sg.sigma_alpha, std::nullopt};
  if (sg.loss_range) {
    const auto [lo, hi] = *sg.loss_range;
    if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
      throw ParameterError("loss range must be a finite interval [lo, hi]");
    }
    const double half = 0.5 * (hi - lo);
    auto fill = [&](std::optional<double>& slot, const char* name) {
      if (slot && std::abs(*slot - half) > 1e-12 * std::max(1.0, half)) {
        throw ParameterError(std::string(name) + " disagrees with the loss range");
      }
      slot = half;
    };
    fill(r.sigma, "sigma");
    fill(r.gamma, "gamma");
    fill(r.sigma_alpha, "sigma_alpha");
    r.b = std::max(std::abs(lo), std::abs(hi));
  }
  if (r.sigma) require_nonneg_param(*r.sigma, "sigma");
  if (r.gamma) require_nonneg_param(*r.gamma, "gamma");
  if (r.sigma_alpha) require_nonneg_param(*r.sigma_alpha, "sigma_alpha");
  return r;
}

double need(const std::optional<double>& v, const char* name, BoundKind kind) {
  if (!v) throw ParameterError(to_string(kind) + " bound requires " + name);
  return *v;
}

}  // namespace

CgfEnvelope CgfEnvelope::sub_gaussian(double sigma) {
  require_nonneg_param(sigma, "sigma");
  const double s2 = sigma * sigma;
  CgfEnvelope env;
  env.psi = [s2](double l) { return 0.5 * s2 * l * l; };
  env.closed_form_inverse = [s2](double y) { return y == kInf ? kInf : std::sqrt(2.0 * s2 * y); };
  return env;
}

CgfEnvelope CgfEnvelope::sub_gamma(double variance, double scale) {
  require_nonneg_param(variance, "variance");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ParameterError("scale must be positive");
  CgfEnvelope env;
  env.domain_upper = 1.0 / scale;
  env.psi = [variance, scale](double l) {
    const double d = 1.0 - scale * l;
    if (d <= 0.0) return kInf;
    return variance * l * l / (2.0 * d);
  };
  env.closed_form_inverse = [variance, scale](double y) {
    return y == kInf ? kInf : std::sqrt(2.0 * variance * y) + scale * y;
  };
  return env;
}

std::string check_envelope(const CgfEnvelope& env, std::uint64_t seed) {
  if (!env.psi) return "psi is empty";
  if (!(env.domain_upper > 0.0)) return "domain upper end must be positive";
  std::ostringstream msg;
  const double p0 = env.psi(0.0);
  if (std::abs(p0) > 1e-12) {
    msg << "psi(0) = " << p0 << " is not zero";
    return msg.str();
  }
  const double h = std::min(1e-6, 0.25 * env.domain_upper);
  // second-order one-sided difference
  const double slope = (4.0 * env.psi(h) - env.psi(2.0 * h) - 3.0 * p0) / (2.0 * h);
  if (std::abs(slope) > 1e-6) {
    msg << "psi'(0) ~ " << slope << " is not zero";
    return msg.str();
  }
  const double span = std::isfinite(env.domain_upper) ? env.domain_upper * (1.0 - 1e-6) : 10.0;
  Rng rng = make_rng(seed, 0);
  for (int k = 0; k < 200; ++k) {
    const double a = span * uniform01(rng);
    const double b = span * uniform01(rng);
    const double fa = env.psi(a), fb = env.psi(b), fm = env.psi(0.5 * (a + b));
    if (!std::isfinite(fa) || !std::isfinite(fb)) continue;
    const double chord = 0.5 * (fa + fb);
    if (fm > chord + 1e-12 * std::max(1.0, std::abs(chord))) {
      msg << "midpoint convexity fails between " << a << " and " << b;
      return msg.str();
    }
  }
  return {};
}

double inverse_legendre_dual(const CgfEnvelope& env, double y) {
  if (std::isnan(y) || y < 0.0) throw ParameterError("inverse dual needs y >= 0");
  if (y == kInf) return kInf;
  if (y == 0.0) return 0.0;
  if (!env.psi || !(env.domain_upper > 0.0)) throw ParameterError("invalid envelope");

  auto f = [&](double l) {
    const double p = env.psi(l);
    if (std::isnan(p)) return kInf;
    return (y + p) / l;
  };

  double lo = 1e-8;
  double hi;
  if (std::isfinite(env.domain_upper)) {
    hi = env.domain_upper * (1.0 - 1e-9);
    lo = std::min(lo, 0.5 * hi);
  } else {
    hi = 1.0;
    while (hi < 1e300 && f(2.0 * hi) < f(hi)) hi *= 2.0;
    hi *= 2.0;
  }
  while (lo > 1e-300 && f(0.5 * lo) < f(lo)) lo *= 0.5;

  constexpr int kGrid = 64;
  std::array<double, kGrid> grid{};
  const double llo = std::log(lo), lhi = std::log(hi);
  int best = 0;
  double best_val = kInf;
  for (int k = 0; k < kGrid; ++k) {
    grid[k] = std::exp(llo + (lhi - llo) * k / (kGrid - 1));
    const double v = f(grid[k]);
    if (v < best_val) {
      best_val = v;
      best = k;
    }
  }
  double a = std::log(grid[std::max(best - 1, 0)]);
  double b = std::log(grid[std::min(best + 1, kGrid - 1)]);

  // golden-section search in log(lambda)
  const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(std::exp(c)), fd = f(std::exp(d));
  for (int it = 0; it < 500 && (b - a) > 1e-10; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(std::exp(d));
    }
  }
  return std::min({best_val, fc, fd, f(std::exp(0.5 * (a + b)))});
}

TwoSidedBound adm_general_bound(const std::vector<double>& a_terms,
                                const std::vector<double>& b_terms, const CgfEnvelope& env_plus,
                                const CgfEnvelope& env_minus) {
  if (a_terms.size() != b_terms.size() || a_terms.empty()) {
    throw ParameterError("A and B must be nonempty lists of equal length");
  }
  std::vector<double> up, down;
  for (std::size_t i = 0; i < a_terms.size(); ++i) {
    const double ai = std::max(0.0, a_terms[i]);
    const double bi = std::max(0.0, b_terms[i]);
    if (std::isnan(a_terms[i]) || std::isnan(b_terms[i]) || a_terms[i] < -1e-12 ||
        b_terms[i] < -1e-12) {
      throw ParameterError("A and B entries must be nonnegative");
    }
    up.push_back(inverse_legendre_dual(env_plus, ai) + inverse_legendre_dual(env_minus, bi));
    down.push_back(inverse_legendre_dual(env_minus, ai) + inverse_legendre_dual(env_plus, bi));
  }
  return {average_of(std::move(up)), average_of(std::move(down))};
}

SubGaussianParams SubGaussianParams::bounded(double lo, double hi) {
  SubGaussianParams sg;
  sg.loss_range = std::make_pair(lo, hi);
  const double half = 0.5 * (hi - lo);
  sg.sigma = half;
  sg.gamma = half;
  sg.sigma_alpha = half;
  return sg;
}

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::MI: return "mi";
    case BoundKind::Lautum: return "lautum";
    case BoundKind::JS: return "js";
    case BoundKind::Renyi: return "renyi";
    case BoundKind::Sibson: return "sibson";
    case BoundKind::PinskerRenyi: return "pinsker_renyi";
  }
  return "unknown";
}

InfoSpec info_spec_for(BoundSpec spec) {
  switch (spec.kind) {
    case BoundKind::MI: return InfoSpec::mi();
    case BoundKind::Lautum: return InfoSpec::lautum();
    case BoundKind::JS: return InfoSpec::js(spec.alpha);
    case BoundKind::Renyi:
    case BoundKind::PinskerRenyi: return InfoSpec::renyi(spec.alpha);
    case BoundKind::Sibson: return InfoSpec::sibson(spec.alpha);
  }
  throw ParameterError("unknown bound kind");
}

BoundReport gen_bound(const std::vector<double>& info, BoundSpec spec,
                      const SubGaussianParams& sg) {
  require_info(info);
  const ResolvedParams r = resolve(sg);
  BoundReport rep;
  rep.bound_name = to_string(spec.kind);
  rep.info = info;
  rep.params["n"] = static_cast<double>(info.size());

  double scale = 0.0;
  switch (spec.kind) {
    case BoundKind::MI: {
      const double s = need(r.sigma, "sigma", spec.kind);
      rep.params["sigma"] = s;
      scale = 2.0 * s * s;
      break;
    }
    case BoundKind::Lautum: {
      const double g = need(r.gamma, "gamma", spec.kind);
      rep.params["gamma"] = g;
      scale = 2.0 * g * g;
      break;
    }
    case BoundKind::JS: {
      const Alpha a(spec.alpha);
      const double s = need(r.sigma_alpha, "sigma_alpha", spec.kind);
      rep.params["alpha"] = a.value();
      rep.params["sigma_alpha"] = s;
      scale = 2.0 * s * s / (a.value() * a.complement());
      break;
    }
    case BoundKind::Renyi:
    case BoundKind::Sibson: {
      const Alpha a(spec.alpha);
      const double s = need(r.sigma, "sigma", spec.kind);
      const double g = need(r.gamma, "gamma", spec.kind);
      rep.params["alpha"] = a.value();
      rep.params["sigma"] = s;
      rep.params["gamma"] = g;
      scale = 2.0 * (a.value() * s * s + a.complement() * g * g) / a.value();
      break;
    }
    case BoundKind::PinskerRenyi: {
      const Alpha a(spec.alpha);
      if (!r.b) throw ParameterError("pinsker_renyi bound requires a loss range");
      rep.params["alpha"] = a.value();
      rep.params["b"] = *r.b;
      scale = 2.0 * *r.b * *r.b / a.value();
      break;
    }
  }

  std::vector<double> terms;
  terms.reserve(info.size());
  for (double v : info) terms.push_back(sqrt_term(scale, v));
  rep.value = average_of(std::move(terms));
  return rep;
}

BoundReport js_constant_bound(const SubGaussianParams& sg, Alpha a) {
  const ResolvedParams r = resolve(sg);
  const double s = need(r.sigma_alpha, "sigma_alpha", BoundKind::JS);
  BoundReport rep;
  rep.bound_name = "js_constant";
  rep.params["alpha"] = a.value();
  rep.params["sigma_alpha"] = s;
  rep.value = s * std::sqrt(2.0 * binary_entropy(a.value()) / (a.value() * a.complement()));
  return rep;
}

double averaged_kl_bound(const std::vector<double>& joint_to_aux,
                         const std::vector<double>& prod_to_aux, double sigma_aux, Alpha a) {
  if (joint_to_aux.size() != prod_to_aux.size() || joint_to_aux.empty()) {
    throw ParameterError("KL lists must be nonempty and of equal length");
  }
  require_nonneg_param(sigma_aux, "sigma");
  const double scale = 2.0 * sigma_aux * sigma_aux / (a.value() * a.complement());
  std::vector<double> terms;
  for (std::size_t i = 0; i < joint_to_aux.size(); ++i) {
    const double ai = joint_to_aux[i], bi = prod_to_aux[i];
    if (std::isnan(ai) || std::isnan(bi)) throw ParameterError("KL value is NaN");
    if (ai == kInf || bi == kInf) {
      terms.push_back(kInf);
      continue;
    }
    terms.push_back(sqrt_term(scale, a.value() * ai + a.complement() * bi));
  }
  return average_of(std::move(terms));
}

TightnessComparison tightness_comparison(Alpha a_js, Alpha a_renyi,
                                         const std::vector<double>& renyi_info,
                                         const SubGaussianParams& sg) {
  const ResolvedParams r = resolve(sg);
  if (!r.sigma || !r.gamma || !r.sigma_alpha) {
    throw ParameterError("tightness comparison needs sigma, gamma and sigma_alpha");
  }
  const double tol = 1e-12 * std::max(1.0, *r.sigma);
  if (std::abs(*r.sigma - *r.gamma) > tol || std::abs(*r.sigma - *r.sigma_alpha) > tol) {
    throw ParameterError("tightness comparison requires sigma_alpha = sigma = gamma");
  }
  TightnessComparison out;
  const double ap = a_js.value();
  out.threshold = a_renyi.value() * binary_entropy(ap) / ((1.0 - ap) * ap);
  for (double v : renyi_info) out.js_tighter.push_back(out.threshold <= v);
  return out;
}

BoundReport mismatch_bound(double train_test_div, const std::vector<double>& info, BoundSpec spec,
                           const SubGaussianParams& sg) {
  if (spec.kind != BoundKind::JS && spec.kind != BoundKind::Renyi) {
    throw ParameterError("mismatch bound is defined for js and renyi only");
  }
  if (std::isnan(train_test_div) || train_test_div < -1e-12) {
    throw ParameterError("train/test divergence must be nonnegative");
  }
  BoundReport rep = gen_bound(info, spec, sg);
  const ResolvedParams r = resolve(sg);
  const Alpha a(spec.alpha);
  double scale;
  if (spec.kind == BoundKind::JS) {
    scale = 2.0 * *r.sigma_alpha * *r.sigma_alpha / (a.value() * a.complement());
  } else {
    scale = 2.0 * (a.value() * *r.sigma * *r.sigma + a.complement() * *r.gamma * *r.gamma) /
            a.value();
  }
  const double extra = sqrt_term(scale, train_test_div);
  rep.bound_name = "mismatch_" + rep.bound_name;
  rep.params["train_test_div"] = train_test_div;
  rep.params["mismatch_term"] = extra;
  rep.value += extra;
  return rep;
}

}  // namespace genbound
