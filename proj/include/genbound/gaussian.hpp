#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "genbound/adm.hpp"
#include "genbound/measures.hpp"
#include "genbound/numerics.hpp"

namespace genbound {

/// Z_1, Z_2 ~ N(mean, variance) i.i.d., W = t Z_1 + (1-t) Z_2,
/// loss min((w - z)^2, c^2).
struct ToyConfig {
  double mean = 1.0;
  double variance = 1.0;
  double t = 0.5;
  double c = 0.25;
  double alpha = 0.5;
  std::size_t mc_samples = 1000000;
  std::uint64_t seed = 42;

  void validate() const;
};

using Mat2 = std::array<std::array<double, 2>, 2>;

struct ToyGeometry {
  double rho1;
  double rho2;
  double var_w;
  Mat2 cov_joint1;  // covariance of (W, Z_1)
  Mat2 cov_joint2;  // covariance of (W, Z_2)
};

ToyGeometry toy_geometry(const ToyConfig& cfg);

/// Correlation of W with Z_i, i in {1, 2}.
double toy_rho(const ToyConfig& cfg, int i);

// Information between the two coordinates of a bivariate normal with correlation rho.
double gaussian_mi(double rho);
double gaussian_lautum(double rho);
double gaussian_renyi_info(double rho, Alpha a);
/// Mixture-entropy form of the JS information, integrated by composite
/// Gauss-Legendre along the principal axes of the joint covariance.
/// Throws AccuracyError if two refinements disagree beyond 1e-10.
double gaussian_js_info(double rho, Alpha a);

/// Monte Carlo version of gaussian_js_info, stratified between the product
/// (a fraction alpha of the draws) and the joint.
McEstimate gaussian_js_info_mc(double rho, Alpha a, std::size_t samples, std::uint64_t seed);

/// Differential entropies by the standard Gaussian formula.
double gaussian_entropy_1d(double variance);
double gaussian_entropy_2d(const Mat2& cov);

/// I(W; Z_i) for kind MI, JS(alpha) or Renyi(alpha).
double toy_information(const ToyConfig& cfg, int i, InfoSpec spec);

/// gen = E[l(W, Z')] - E[(l(W, Z_1) + l(W, Z_2)) / 2] by Monte Carlo with
/// common random numbers.
McEstimate toy_true_gen_error(const ToyConfig& cfg);

struct SweepRow {
  double t;
  McEstimate gen;
  double bound_mi;
  std::vector<double> bound_js;     // one per alpha
  std::vector<double> bound_renyi;  // one per alpha
};

/// 25 equispaced points in (0.02, 0.5].
std::vector<double> default_t_grid();

/// One row per t. Each row draws its Monte Carlo stream from (base.seed, row index).
std::vector<SweepRow> toy_sweep(const ToyConfig& base, const std::vector<double>& t_grid,
                                const std::vector<double>& alphas);

/// Loss bounded in [0, c^2].
SubGaussianParams toy_sub_gaussian(const ToyConfig& cfg);

}  // namespace genbound
