#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "genbound/adm.hpp"
#include "genbound/measures.hpp"

namespace genbound {

/// Thrown when a dataset enumeration would exceed the size guard.
class SizeError : public std::length_error {
public:
  using std::length_error::length_error;
};

using Dataset = std::vector<std::size_t>;  // indices into z_atoms, length n

struct LearnerInstance {
  ProbVec mu;                             // law of one sample, atoms = z labels
  std::vector<std::string> w_atoms;
  std::vector<std::vector<double>> loss;  // loss[w][z]
  std::size_t n = 1;
  double beta = 1.0;
  ProbVec prior;

  LearnerInstance(ProbVec mu, std::vector<std::string> w_atoms,
                  std::vector<std::vector<double>> loss, std::size_t n, double beta, ProbVec prior);

  std::size_t num_w() const { return w_atoms.size(); }
  std::size_t num_z() const { return mu.size(); }
  double empirical_risk(std::size_t w, const Dataset& s) const;
  std::vector<double> empirical_risks(const Dataset& s) const;
  double population_risk(std::size_t w) const;
  std::vector<double> population_risks() const;
};

/// Number of datasets |Z|^n, or throws SizeError above `guard`.
std::size_t dataset_count(const LearnerInstance& inst, std::size_t guard = 1000000);
/// Dataset with lexicographic index k (first sample most significant).
Dataset dataset_at(const LearnerInstance& inst, std::size_t k);
double dataset_probability(const LearnerInstance& inst, const Dataset& s);

/// Kernel P_{W|S} tabulated by lexicographic dataset index.
using Kernel = std::vector<ProbVec>;

ProbVec gibbs_posterior(const LearnerInstance& inst, const Dataset& s);
Kernel gibbs_kernel(const LearnerInstance& inst);
Kernel constant_kernel(const LearnerInstance& inst, const ProbVec& p);

enum class RegKind { JS, Renyi, KL };

struct RegSpec {
  RegKind kind;
  double alpha = 0.5;

  static RegSpec js(double a) { return {RegKind::JS, a}; }
  static RegSpec renyi(double a) { return {RegKind::Renyi, a}; }
  /// KL(P || prior); its minimizer is the Gibbs posterior.
  static RegSpec kl() { return {RegKind::KL}; }
};

std::string to_string(RegKind kind);

/// D(P || prior): js_div(P, prior, a), renyi_div(prior, P, a) or kl(P, prior).
double regularizer(std::span<const double> p, std::span<const double> prior, RegSpec reg);
/// The same divergence written for unnormalized positive P, whose exact
/// gradient is regularizer_gradient. On the simplex it equals regularizer().
double regularizer_extended(std::span<const double> p, std::span<const double> prior,
                            RegSpec reg);
std::vector<double> regularizer_gradient(std::span<const double> p,
                                         std::span<const double> prior, RegSpec reg);

/// <P, risks> + D(P || prior) / beta.
double regularized_objective(std::span<const double> p, const std::vector<double>& risks,
                             std::span<const double> prior, double beta, RegSpec reg);
std::vector<double> regularized_gradient(std::span<const double> p,
                                         const std::vector<double>& risks,
                                         std::span<const double> prior, double beta, RegSpec reg);

struct SolveResult {
  ProbVec posterior;
  double objective;
  double certificate;  // ||P - proj_simplex(P - grad)||_2
  std::size_t iterations;
  double min_mass;     // boundary proximity of the solution
  bool used_fallback;
};

class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, SolveResult best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const SolveResult& best() const { return best_; }

private:
  SolveResult best_;
};

struct SolverOptions {
  double tolerance = 1e-8;
  std::size_t max_iterations = 100000;
};

/// Minimizes the regularized objective for fixed empirical risks over the simplex.
SolveResult minimize_on_simplex(const std::vector<double>& risks, const ProbVec& prior,
                                double beta, RegSpec reg, const SolverOptions& opt = {});

SolveResult solve_regularized_posterior(const LearnerInstance& inst, const Dataset& s,
                                        RegSpec reg, const SolverOptions& opt = {});

struct KernelSolution {
  Kernel kernel;
  std::vector<SolveResult> per_dataset;
};

KernelSolution solve_regularized_kernel(const LearnerInstance& inst, RegSpec reg,
                                        const SolverOptions& opt = {});

/// E[L_mu(W)] - min_w L_mu(w) by exact enumeration over datasets.
double excess_risk_exact(const LearnerInstance& inst, const Kernel& kernel);

/// Euclidean projection onto the probability simplex.
std::vector<double> project_simplex(std::vector<double> y);

struct ExcessBoundParams {
  double b = 1.0;
  double lip = 0.0;
  double d = 1.0;
  double beta = 1.0;
  double n = 1.0;
  double w_star_norm_sq = 0.0;
  double alpha = 0.5;
  std::vector<double> info;
  /// JS only: with d = 1, integrate JS_a(N(w*, 1/beta) || N(0,1)) instead of using h(a).
  bool js_exact_divergence = false;
};

/// Bounded Lipschitz loss, Gaussian posterior N(w*, I/beta) against the prior N(0, I).
BoundReport excess_risk_bound(const ExcessBoundParams& p, RegKind kind);

/// D_a(N(m, I_d / beta) || N(0, I_d)) in closed form.
double gaussian_renyi_to_standard(double m_norm_sq, double beta, double d, Alpha a);
/// js_div(N(m, 1/beta), N(0,1), a) by one-dimensional quadrature.
double gaussian_js_to_standard_1d(double m, double beta, Alpha a);

/// The three divergence terms as displayed for beta = sqrt(n):
/// |w*|^2/(2 sqrt n) + d log(n)/(4 sqrt n) + d log(a)/(2 sqrt n (1-a)).
double renyi_divergence_terms_display(double w_star_norm_sq, double d, double n, Alpha a);

}  // namespace genbound
