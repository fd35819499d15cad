#pragma once

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace genbound {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Thrown when two distributions are compared over different alphabets.
class AlphabetError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a value violates the contract of a domain type.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Skew parameter of the Jensen-Shannon and Renyi families, strictly inside (0,1).
class Alpha {
public:
  explicit Alpha(double value);
  double value() const { return value_; }
  double complement() const { return 1.0 - value_; }

private:
  double value_;
};

/// Binary entropy in nats, h(a) = -a log a - (1-a) log(1-a).
double binary_entropy(double a);

/// Sum of terms in descending order of magnitude with Neumaier compensation.
/// Infinite terms dominate; +inf and -inf together give NaN.
double compensated_sum(std::vector<double> terms);

/// Finite probability distribution over an ordered list of labels.
class ProbVec {
public:
  ProbVec(std::vector<std::string> atoms, std::vector<double> mass);
  /// Labels default to "0", "1", ...
  explicit ProbVec(std::vector<double> mass);
  ProbVec(std::initializer_list<double> mass) : ProbVec(std::vector<double>(mass)) {}

  static ProbVec point_mass(std::size_t size, std::size_t index);
  static ProbVec bernoulli(double p);  // atoms {0,1}, mass (1-p, p)
  static ProbVec uniform(std::size_t size);

  std::size_t size() const { return mass_.size(); }
  double operator[](std::size_t i) const { return mass_[i]; }
  std::span<const double> mass() const { return mass_; }
  const std::vector<std::string>& atoms() const { return atoms_; }
  bool same_alphabet(const ProbVec& other) const { return atoms_ == other.atoms_; }

  /// Total-variation distance, max over events (half the L1 distance).
  double tv_distance(const ProbVec& other) const;

private:
  std::vector<std::string> atoms_;
  std::vector<double> mass_;
};

/// Joint distribution over hypotheses (rows) and samples (columns).
class JointDist {
public:
  JointDist(std::vector<std::string> w_atoms, std::vector<std::string> z_atoms,
            std::vector<double> row_major_mass);
  JointDist(std::size_t rows, std::size_t cols, std::vector<double> row_major_mass);

  static JointDist product(const ProbVec& pw, const ProbVec& pz);

  std::size_t rows() const { return w_atoms_.size(); }
  std::size_t cols() const { return z_atoms_.size(); }
  double operator()(std::size_t w, std::size_t z) const { return mass_[w * cols() + z]; }
  std::span<const double> mass() const { return mass_; }
  const std::vector<std::string>& w_atoms() const { return w_atoms_; }
  const std::vector<std::string>& z_atoms() const { return z_atoms_; }
  bool same_alphabets(const JointDist& other) const {
    return w_atoms_ == other.w_atoms_ && z_atoms_ == other.z_atoms_;
  }

  ProbVec w_marginal() const;
  ProbVec z_marginal() const;
  /// P_W (x) P_Z built from this joint's marginals.
  JointDist product_of_marginals() const;
  /// alpha * P_W (x) P_Z + (1 - alpha) * joint.
  JointDist alpha_mixture(Alpha a) const;
  /// Normalized product^alpha * joint^(1-alpha).
  JointDist geometric_mixture(Alpha a) const;
  /// Flattened view as a distribution over (w,z) pairs, labels "w|z".
  ProbVec flatten() const;

private:
  std::vector<std::string> w_atoms_;
  std::vector<std::string> z_atoms_;
  std::vector<double> mass_;
};

// Divergences. Argument order follows the conventions
//   js_div(p1, p0, a)    = a KL(p0 || m) + (1-a) KL(p1 || m),  m = a p0 + (1-a) p1
//   renyi_div(p1, p0, a) = 1/(a-1) log sum p0^a p1^(1-a)
// so the first argument always carries weight/exponent (1-a).

double kl(const ProbVec& p, const ProbVec& q);
double renyi_div(const ProbVec& p1, const ProbVec& p0, Alpha a);
double js_div(const ProbVec& p1, const ProbVec& p0, Alpha a);

// Span overloads on raw masses; caller guarantees equal lengths.
double kl(std::span<const double> p, std::span<const double> q);
double renyi_div(std::span<const double> p1, std::span<const double> p0, double a);
double js_div(std::span<const double> p1, std::span<const double> p0, double a);

enum class InfoKind { MI, Lautum, JS, Renyi, Sibson };

struct InfoSpec {
  InfoKind kind;
  double alpha = 0.5;  // ignored for MI and Lautum

  static InfoSpec mi() { return {InfoKind::MI}; }
  static InfoSpec lautum() { return {InfoKind::Lautum}; }
  static InfoSpec js(double a) { return {InfoKind::JS, a}; }
  static InfoSpec renyi(double a) { return {InfoKind::Renyi, a}; }
  static InfoSpec sibson(double a) { return {InfoKind::Sibson, a}; }
};

std::string to_string(InfoKind kind);

/// Information between the hypothesis and sample of a joint distribution.
double info_measure(const JointDist& j, InfoSpec spec);

/// Sibson information: min over hypothesis marginals Q of
/// renyi_div(joint, Q (x) P_Z, a), in closed form.
double sibson_info(const JointDist& j, Alpha a);

/// Minimizing hypothesis marginal of sibson_info.
ProbVec sibson_optimal_marginal(const JointDist& j, Alpha a);

struct Decomposition {
  double lhs;
  double residual;
};

/// lhs = a KL(prod || aux) + (1-a) KL(joint || aux), residual = KL(mixture || aux).
/// lhs == info_measure(j, JS(a)) + residual.
Decomposition js_mixture_decomposition(const JointDist& j, const JointDist& aux, Alpha a);

/// lhs = a KL(aux || prod) + (1-a) KL(aux || joint), residual = KL(aux || geometric mixture).
/// lhs == (1-a) info_measure(j, Renyi(a)) + residual.
Decomposition renyi_geometric_decomposition(const JointDist& j, const JointDist& aux, Alpha a);

}  // namespace genbound
