#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace genbound {

/// Raised when a numerical routine cannot reach its accuracy target.
class AccuracyError : public std::runtime_error {
public:
  AccuracyError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

private:
  double achieved_;
};

struct McEstimate {
  double estimate;
  double std_error;
};

/// Gauss-Hermite rule for the standard normal weight: sum w_k f(x_k) ~ E f(X), X ~ N(0,1).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussHermiteRule& gauss_hermite(std::size_t order);

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussLegendreRule& gauss_legendre(std::size_t order);

/// Ordinary least-squares slope of y against x.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace genbound
