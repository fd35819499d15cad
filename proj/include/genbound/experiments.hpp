#pragma once

#include <cstddef>
#include <vector>

#include "genbound/erm.hpp"

namespace genbound {

struct RateCheck {
  std::vector<double> n;
  std::vector<double> bound_js;
  std::vector<double> bound_renyi;
  double slope_js;
  double slope_renyi;
};

/// Gibbs learner with two hypotheses, a fair bit as data, 0-1 loss, uniform
/// prior and beta = 2 sqrt(n); JS(a) and Renyi(a) bounds from the exact
/// per-sample information, with log-log slopes against n.
RateCheck gibbs_rate_check(double alpha, const std::vector<std::size_t>& ns = {8, 16, 32, 64, 128});

/// Log-log slope of excess_risk_bound with beta = sqrt(n) and per-sample
/// information info_total / n, over n in {10^2, ..., 10^5}.
double excess_bound_slope(RegKind kind, double alpha, double info_total = 0.5);

}  // namespace genbound
