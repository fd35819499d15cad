#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "genbound/erm.hpp"
#include "genbound/measures.hpp"
#include "genbound/numerics.hpp"
#include "genbound/rng.hpp"

namespace genbound {

struct EnumeratedLearner {
  LearnerInstance instance;
  Kernel kernel;
  ProbVec p_w;                              // hypothesis marginal induced by the kernel
  std::vector<JointDist> per_sample_joints;  // P_{W,Z_i}, i = 1..n
  double exact_gen;                          // population minus empirical risk, direct double sum
  double exact_gen_per_sample;               // same quantity through the per-sample joints
};

/// Exhaustive enumeration of all |Z|^n datasets (guard 10^6).
EnumeratedLearner enumerate_learner(const LearnerInstance& inst, const Kernel& kernel);

/// Kernel that depends on the dataset only through its count vector.
using CountKernel = std::function<ProbVec(const std::vector<std::size_t>& counts)>;

CountKernel gibbs_count_kernel(const LearnerInstance& inst);

struct ExchangeableLearner {
  JointDist joint;        // P_{W,Z_i}, identical for every i
  double gen;             // through the per-sample joint
  double gen_direct;      // through the count distribution
};

/// Exact quantities by summing over count vectors (multinomial types)
/// instead of datasets, so n in the hundreds stays cheap.
ExchangeableLearner enumerate_exchangeable(const LearnerInstance& inst, const CountKernel& kernel);

/// A density that can be sampled, for Monte Carlo divergence estimates.
class Density {
public:
  virtual ~Density() = default;
  virtual std::size_t dim() const = 0;
  virtual void sample(Rng& rng, NormalSampler& normal, std::vector<double>& out) const = 0;
  virtual double log_pdf(const std::vector<double>& x) const = 0;
};

class GaussianLaw : public Density {
public:
  GaussianLaw(std::vector<double> mean, std::vector<std::vector<double>> cov);

  std::size_t dim() const override { return mean_.size(); }
  void sample(Rng& rng, NormalSampler& normal, std::vector<double>& out) const override;
  double log_pdf(const std::vector<double>& x) const override;

private:
  std::vector<double> mean_;
  std::vector<std::vector<double>> chol_;  // lower triangular
  double log_norm_;
};

enum class McKind { KL, JS, Renyi };

struct McDivergenceSpec {
  McKind kind;
  double alpha = 0.5;
};

/// KL(p || q), js_div(p, q, a) or renyi_div(p, q, a) with the library's
/// argument conventions, estimated from n_samples draws (n_samples >= 10^4).
McEstimate mc_divergence(const Density& p, const Density& q, McDivergenceSpec spec,
                         std::size_t n_samples, std::uint64_t seed);

/// max_i |g_i - central difference_i| / (1 + |g_i|). Coordinates of `point`
/// must exceed 2 * step; step must lie in [1e-8, 1e-4].
double finite_diff_grad_check(const std::function<double(const std::vector<double>&)>& objective,
                              const std::vector<double>& analytic_grad,
                              const std::vector<double>& point, double step);

struct GridOptimum {
  std::vector<double> point;
  double value;
};

/// Exhaustive search over the 2-simplex at `step`, then repeated zooming
/// around the incumbent with ten-fold finer grids.
GridOptimum grid_search_simplex3(const std::function<double(const std::vector<double>&)>& f,
                                 double step = 1e-3);

// Random test material. Every generator is a pure function of its seed.
std::vector<double> random_simplex_point(Rng& rng, std::size_t k, double zero_prob = 0.0);
JointDist random_joint(Rng& rng, std::size_t rows, std::size_t cols, double zero_prob = 0.0);
/// Joint with the same alphabets as `like` and strictly positive masses.
JointDist random_full_support_joint(Rng& rng, const JointDist& like);

struct FuzzCase {
  LearnerInstance instance;
  Kernel kernel;
};

/// |W|, |Z| in [2, 4], n in [1, 3], losses in [0, 1], stochastic kernels with
/// occasional deterministic rows.
FuzzCase random_fuzz_case(std::uint64_t seed);

}  // namespace genbound
