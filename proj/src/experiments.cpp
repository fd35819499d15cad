#include "genbound/experiments.hpp"

#include <cmath>

#include "genbound/numerics.hpp"
#include "genbound/oracle.hpp"
#include "genbound/parallel.hpp"

namespace genbound {

RateCheck gibbs_rate_check(double alpha, const std::vector<std::size_t>& ns) {
  const Alpha a(alpha);
  RateCheck out;
  out.n.resize(ns.size());
  out.bound_js.resize(ns.size());
  out.bound_renyi.resize(ns.size());
  const SubGaussianParams sg = SubGaussianParams::bounded(0.0, 1.0);
  parallel_for(ns.size(), [&](std::size_t k) {
    const std::size_t n = ns[k];
    const LearnerInstance inst(ProbVec({"0", "1"}, {0.5, 0.5}), {"0", "1"},
                               {{0.0, 1.0}, {1.0, 0.0}}, n, 2.0 * std::sqrt(static_cast<double>(n)),
                               ProbVec({"0", "1"}, {0.5, 0.5}));
    const ExchangeableLearner e = enumerate_exchangeable(inst, gibbs_count_kernel(inst));
    const std::vector<double> js(n, info_measure(e.joint, InfoSpec::js(a.value())));
    const std::vector<double> re(n, info_measure(e.joint, InfoSpec::renyi(a.value())));
    out.n[k] = static_cast<double>(n);
    out.bound_js[k] = gen_bound(js, BoundSpec::js(a.value()), sg).value;
    out.bound_renyi[k] = gen_bound(re, BoundSpec::renyi(a.value()), sg).value;
  });
  std::vector<double> lx, lj, lr;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    lx.push_back(std::log(out.n[k]));
    lj.push_back(std::log(out.bound_js[k]));
    lr.push_back(std::log(out.bound_renyi[k]));
  }
  out.slope_js = fitted_slope(lx, lj);
  out.slope_renyi = fitted_slope(lx, lr);
  return out;
}

double excess_bound_slope(RegKind kind, double alpha, double info_total) {
  std::vector<double> lx, ly;
  for (double n : {1e2, 1e3, 1e4, 1e5}) {
    ExcessBoundParams p;
    p.n = n;
    p.beta = std::sqrt(n);
    p.alpha = alpha;
    p.info = std::vector<double>(static_cast<std::size_t>(n), info_total / n);
    lx.push_back(std::log(n));
    ly.push_back(std::log(excess_risk_bound(p, kind).value));
  }
  return fitted_slope(lx, ly);
}

}  // namespace genbound
