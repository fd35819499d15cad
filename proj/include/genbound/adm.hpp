#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "genbound/measures.hpp"

namespace genbound {

/// Thrown when a bound is requested without the tail parameters it needs.
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Convex upper envelope psi of a cumulant generating function on [0, domain_upper).
/// psi(0) = psi'(0) = 0 is required but only checked by check_envelope().
struct CgfEnvelope {
  std::function<double(double)> psi;
  double domain_upper = kInf;
  /// Exact inverse Legendre dual when known; used only as a cross-check.
  std::function<double(double)> closed_form_inverse;

  static CgfEnvelope sub_gaussian(double sigma);
  /// psi(l) = v l^2 / (2 (1 - c l)) on [0, 1/c).
  static CgfEnvelope sub_gamma(double variance, double scale);
};

/// Finite-difference and midpoint checks of the envelope contract.
/// Returns an empty string when all checks pass.
std::string check_envelope(const CgfEnvelope& env, std::uint64_t seed = 1);

/// psi*^{-1}(y) = inf over l in (0,b) of (y + psi(l)) / l.
double inverse_legendre_dual(const CgfEnvelope& env, double y);

struct TwoSidedBound {
  double upper;  // bound on  gen
  double lower;  // bound on -gen
};

/// Evaluates (1/n) sum psi_+*^{-1}(A_i) + psi_-*^{-1}(B_i) and the mirrored
/// lower side. With A_i = KL(P_W (x) mu || aux_i), B_i = KL(P_{W,Z_i} || aux_i)
/// and envelopes taken under aux_i, this is the general auxiliary bound; with
/// (A,B) = (KL(aux||prod), KL(aux||joint)) and the envelope pair
/// (gamma_-, phi_+) it is the reversed-argument variant.
TwoSidedBound adm_general_bound(const std::vector<double>& a_terms,
                                const std::vector<double>& b_terms, const CgfEnvelope& env_plus,
                                const CgfEnvelope& env_minus);

/// Sub-Gaussian parameters of the loss under the distributions the bounds use.
struct SubGaussianParams {
  std::optional<double> sigma;        // under P_W (x) mu (or mu for every w)
  std::optional<double> gamma;        // under P_{W,Z_i}
  std::optional<double> sigma_alpha;  // under the alpha-mixture
  std::optional<std::pair<double, double>> loss_range;

  /// A loss bounded in [lo, hi] is (hi-lo)/2-sub-Gaussian under every law.
  static SubGaussianParams bounded(double lo, double hi);
};

struct BoundReport {
  std::string bound_name;
  double value = 0.0;
  std::map<std::string, double> params;
  std::vector<double> info;
};

enum class BoundKind { MI, Lautum, JS, Renyi, Sibson, PinskerRenyi };

struct BoundSpec {
  BoundKind kind;
  double alpha = 0.5;

  static BoundSpec mi() { return {BoundKind::MI}; }
  static BoundSpec lautum() { return {BoundKind::Lautum}; }
  static BoundSpec js(double a) { return {BoundKind::JS, a}; }
  static BoundSpec renyi(double a) { return {BoundKind::Renyi, a}; }
  static BoundSpec sibson(double a) { return {BoundKind::Sibson, a}; }
  static BoundSpec pinsker_renyi(double a) { return {BoundKind::PinskerRenyi, a}; }
};

std::string to_string(BoundKind kind);

/// Information measure whose per-sample values a bound of this kind expects.
InfoSpec info_spec_for(BoundSpec spec);

/// Generalization-error bound from per-sample information values.
BoundReport gen_bound(const std::vector<double>& info, BoundSpec spec,
                      const SubGaussianParams& sg);

/// Data-free bound sigma_(a) sqrt(2 h(a) / (a (1-a))).
BoundReport js_constant_bound(const SubGaussianParams& sg, Alpha a);

/// Averaged-KL bound with an arbitrary auxiliary joint per sample:
/// (1/n) sum sqrt(2 s^2 (a A_i + (1-a) B_i) / (a (1-a))), with
/// A_i = KL(P_{W,Z_i} || aux_i), B_i = KL(P_W (x) mu || aux_i).
double averaged_kl_bound(const std::vector<double>& joint_to_aux,
                         const std::vector<double>& prod_to_aux, double sigma_aux, Alpha a);

struct TightnessComparison {
  double threshold;
  std::vector<bool> js_tighter;
};

/// Sufficient condition a h(a') / ((1-a') a') <= I_R^a(W;Z_i) under which the
/// JS(a') bound beats the Renyi(a) bound. Requires sigma_(a') = sigma = gamma.
TightnessComparison tightness_comparison(Alpha a_js, Alpha a_renyi,
                                         const std::vector<double>& renyi_info,
                                         const SubGaussianParams& sg);

/// In-distribution bound plus the train/test mismatch term. `train_test_div`
/// is js_div(mu', mu, a) or renyi_div(mu', mu, a) matching `spec`.
BoundReport mismatch_bound(double train_test_div, const std::vector<double>& info, BoundSpec spec,
                           const SubGaussianParams& sg);

}  // namespace genbound
