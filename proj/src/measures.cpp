#include "genbound/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace genbound {

namespace {

constexpr double kMassTolerance = 1e-12;

std::vector<std::string> default_labels(std::size_t n, const std::string& prefix = "") {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = prefix + std::to_string(i);
  return labels;
}

std::vector<double> validated_masses(std::vector<double> mass, const char* what) {
  if (mass.empty()) throw DomainError(std::string(what) + ": empty distribution");
  for (double m : mass) {
    if (!(m >= 0.0) || !std::isfinite(m))
      throw DomainError(std::string(what) + ": masses must be finite and nonnegative");
  }
  const double total = compensated_sum(mass);
  if (std::abs(total - 1.0) > kMassTolerance)
    throw DomainError(std::string(what) + ": masses sum to " + std::to_string(total) +
                      ", expected 1");
  for (double& m : mass) m /= total;
  return mass;
}

// Bregman form: sum p log(p/q) + q - p, every term is nonnegative.
double kl_term(double p, double q) {
  if (p == 0.0) return q;
  if (q == 0.0) return kInf;
  const double x = (q - p) / p;
  return p * (x - std::log1p(x));
}

// p1 * ((p0/p1)^a - 1 - a (p0/p1 - 1)); every term is nonpositive, and
// the sum equals sum p0^a p1^(1-a) - 1 on normalized inputs.
double renyi_term(double p1, double p0, double a) {
  if (p1 == 0.0) return -a * p0;
  if (p0 == 0.0) return -(1.0 - a) * p1;
  const double r = p0 / p1;
  return p1 * (std::expm1(a * std::log(r)) - a * (r - 1.0));
}

void require_same(const ProbVec& p, const ProbVec& q) {
  if (!p.same_alphabet(q)) throw AlphabetError("distributions are over different alphabets");
}

void require_same(const JointDist& a, const JointDist& b) {
  if (!a.same_alphabets(b)) throw AlphabetError("joint distributions are over different alphabets");
}

}  // namespace

Alpha::Alpha(double value) : value_(value) {
  if (!(value > 0.0 && value < 1.0))
    throw DomainError("alpha must lie strictly inside (0,1), got " + std::to_string(value));
}

double binary_entropy(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw DomainError("binary_entropy: argument outside [0,1]");
  double h = 0.0;
  if (a > 0.0) h -= a * std::log(a);
  if (a < 1.0) h -= (1.0 - a) * std::log1p(-a);
  return h;
}

double compensated_sum(std::vector<double> terms) {
  bool pos_inf = false, neg_inf = false;
  for (double t : terms) {
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    if (t == kInf) pos_inf = true;
    if (t == -kInf) neg_inf = true;
  }
  if (pos_inf && neg_inf) return std::numeric_limits<double>::quiet_NaN();
  if (pos_inf) return kInf;
  if (neg_inf) return -kInf;

  std::sort(terms.begin(), terms.end(),
            [](double x, double y) { return std::abs(x) > std::abs(y); });
  double sum = 0.0, carry = 0.0;
  for (double t : terms) {
    const double next = sum + t;
    if (std::abs(sum) >= std::abs(t))
      carry += (sum - next) + t;
    else
      carry += (t - next) + sum;
    sum = next;
  }
  return sum + carry;
}

// ---------------------------------------------------------------- ProbVec

ProbVec::ProbVec(std::vector<std::string> atoms, std::vector<double> mass)
    : atoms_(std::move(atoms)), mass_(validated_masses(std::move(mass), "ProbVec")) {
  if (atoms_.size() != mass_.size()) throw DomainError("ProbVec: one label per mass required");
}

ProbVec::ProbVec(std::vector<double> mass)
    : mass_(validated_masses(std::move(mass), "ProbVec")) {
  atoms_ = default_labels(mass_.size());
}

ProbVec ProbVec::point_mass(std::size_t size, std::size_t index) {
  std::vector<double> m(size, 0.0);
  m.at(index) = 1.0;
  return ProbVec(std::move(m));
}

ProbVec ProbVec::bernoulli(double p) { return ProbVec({1.0 - p, p}); }

ProbVec ProbVec::uniform(std::size_t size) {
  return ProbVec(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

double ProbVec::tv_distance(const ProbVec& other) const {
  require_same(*this, other);
  std::vector<double> d(size());
  for (std::size_t i = 0; i < size(); ++i) d[i] = std::abs(mass_[i] - other.mass_[i]);
  return 0.5 * compensated_sum(std::move(d));
}

// -------------------------------------------------------------- JointDist

JointDist::JointDist(std::vector<std::string> w_atoms, std::vector<std::string> z_atoms,
                     std::vector<double> row_major_mass)
    : w_atoms_(std::move(w_atoms)),
      z_atoms_(std::move(z_atoms)),
      mass_(validated_masses(std::move(row_major_mass), "JointDist")) {
  if (w_atoms_.size() * z_atoms_.size() != mass_.size())
    throw DomainError("JointDist: mass matrix does not match alphabet sizes");
}

JointDist::JointDist(std::size_t rows, std::size_t cols, std::vector<double> row_major_mass)
    : JointDist(default_labels(rows, "w"), default_labels(cols, "z"), std::move(row_major_mass)) {}

JointDist JointDist::product(const ProbVec& pw, const ProbVec& pz) {
  std::vector<double> m(pw.size() * pz.size());
  for (std::size_t w = 0; w < pw.size(); ++w)
    for (std::size_t z = 0; z < pz.size(); ++z) m[w * pz.size() + z] = pw[w] * pz[z];
  return JointDist(pw.atoms(), pz.atoms(), std::move(m));
}

ProbVec JointDist::w_marginal() const {
  std::vector<double> m(rows());
  std::vector<double> row(cols());
  for (std::size_t w = 0; w < rows(); ++w) {
    for (std::size_t z = 0; z < cols(); ++z) row[z] = (*this)(w, z);
    m[w] = compensated_sum(row);
  }
  return ProbVec(w_atoms_, std::move(m));
}

ProbVec JointDist::z_marginal() const {
  std::vector<double> m(cols());
  std::vector<double> col(rows());
  for (std::size_t z = 0; z < cols(); ++z) {
    for (std::size_t w = 0; w < rows(); ++w) col[w] = (*this)(w, z);
    m[z] = compensated_sum(col);
  }
  return ProbVec(z_atoms_, std::move(m));
}

JointDist JointDist::product_of_marginals() const { return product(w_marginal(), z_marginal()); }

JointDist JointDist::alpha_mixture(Alpha a) const {
  const JointDist prod = product_of_marginals();
  std::vector<double> m(mass_.size());
  for (std::size_t k = 0; k < m.size(); ++k)
    m[k] = a.value() * prod.mass_[k] + a.complement() * mass_[k];
  return JointDist(w_atoms_, z_atoms_, std::move(m));
}

JointDist JointDist::geometric_mixture(Alpha a) const {
  const JointDist prod = product_of_marginals();
  std::vector<double> m(mass_.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    m[k] = (prod.mass_[k] > 0.0 && mass_[k] > 0.0)
               ? std::pow(prod.mass_[k], a.value()) * std::pow(mass_[k], a.complement())
               : 0.0;
  }
  const double z = compensated_sum(m);
  if (z <= 0.0) throw DomainError("geometric_mixture: joint and product are mutually singular");
  for (double& x : m) x /= z;
  return JointDist(w_atoms_, z_atoms_, std::move(m));
}

ProbVec JointDist::flatten() const {
  std::vector<std::string> labels;
  labels.reserve(mass_.size());
  for (const auto& w : w_atoms_)
    for (const auto& z : z_atoms_) labels.push_back(w + "|" + z);
  return ProbVec(std::move(labels), mass_);
}

// ------------------------------------------------------------ divergences

double kl(std::span<const double> p, std::span<const double> q) {
  std::vector<double> terms(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    terms[i] = kl_term(p[i], q[i]);
    if (terms[i] == kInf) return kInf;
  }
  return std::max(0.0, compensated_sum(std::move(terms)));
}

double renyi_div(std::span<const double> p1, std::span<const double> p0, double a) {
  std::vector<double> terms(p1.size());
  for (std::size_t i = 0; i < p1.size(); ++i) terms[i] = renyi_term(p1[i], p0[i], a);
  const double d = compensated_sum(std::move(terms));  // sum p0^a p1^(1-a) - 1
  if (d <= -1.0) return kInf;
  return std::max(0.0, std::log1p(d) / (a - 1.0));
}

double js_div(std::span<const double> p1, std::span<const double> p0, double a) {
  std::vector<double> m(p1.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = a * p0[i] + (1.0 - a) * p1[i];
  return std::max(0.0, a * kl(p0, m) + (1.0 - a) * kl(p1, m));
}

double kl(const ProbVec& p, const ProbVec& q) {
  require_same(p, q);
  return kl(p.mass(), q.mass());
}

double renyi_div(const ProbVec& p1, const ProbVec& p0, Alpha a) {
  require_same(p1, p0);
  return renyi_div(p1.mass(), p0.mass(), a.value());
}

double js_div(const ProbVec& p1, const ProbVec& p0, Alpha a) {
  require_same(p1, p0);
  return js_div(p1.mass(), p0.mass(), a.value());
}

// ---------------------------------------------------------- informations

std::string to_string(InfoKind kind) {
  switch (kind) {
    case InfoKind::MI: return "mi";
    case InfoKind::Lautum: return "lautum";
    case InfoKind::JS: return "js";
    case InfoKind::Renyi: return "renyi";
    case InfoKind::Sibson: return "sibson";
  }
  return "unknown";
}

double sibson_info(const JointDist& j, Alpha a) {
  // max over Q of sum_w Q(w)^a c_w, c_w = sum_z mu(z)^a P(w,z)^(1-a), is
  // (sum_w c_w^(1/(1-a)))^(1-a) by Hoelder; the information is -log of the inner sum.
  const ProbVec mu = j.z_marginal();
  const double e = a.complement();
  std::vector<double> terms;
  terms.reserve(j.rows() + 1);
  std::vector<double> row(j.cols());
  for (std::size_t w = 0; w < j.rows(); ++w) {
    for (std::size_t z = 0; z < j.cols(); ++z) {
      const double p = j(w, z);
      row[z] = (p > 0.0 && mu[z] > 0.0) ? std::pow(mu[z], a.value()) * std::pow(p, e) : 0.0;
    }
    const double c = compensated_sum(row);
    terms.push_back(c > 0.0 ? std::pow(c, 1.0 / e) : 0.0);
  }
  terms.push_back(-1.0);
  const double d = compensated_sum(std::move(terms));
  if (d <= -1.0) return kInf;
  return std::max(0.0, -std::log1p(d));
}

ProbVec sibson_optimal_marginal(const JointDist& j, Alpha a) {
  const ProbVec mu = j.z_marginal();
  const double e = a.complement();
  std::vector<double> q(j.rows());
  std::vector<double> row(j.cols());
  for (std::size_t w = 0; w < j.rows(); ++w) {
    for (std::size_t z = 0; z < j.cols(); ++z) {
      const double p = j(w, z);
      row[z] = (p > 0.0 && mu[z] > 0.0) ? std::pow(mu[z], a.value()) * std::pow(p, e) : 0.0;
    }
    const double c = compensated_sum(row);
    q[w] = c > 0.0 ? std::pow(c, 1.0 / e) : 0.0;
  }
  const double total = compensated_sum(q);
  for (double& x : q) x /= total;
  return ProbVec(j.w_atoms(), std::move(q));
}

double info_measure(const JointDist& j, InfoSpec spec) {
  const JointDist prod = j.product_of_marginals();
  switch (spec.kind) {
    case InfoKind::MI: return kl(j.mass(), prod.mass());
    case InfoKind::Lautum: return kl(prod.mass(), j.mass());
    case InfoKind::JS: return js_div(j.mass(), prod.mass(), Alpha(spec.alpha).value());
    case InfoKind::Renyi: return renyi_div(j.mass(), prod.mass(), Alpha(spec.alpha).value());
    case InfoKind::Sibson: return sibson_info(j, Alpha(spec.alpha));
  }
  throw DomainError("info_measure: unknown kind");
}

Decomposition js_mixture_decomposition(const JointDist& j, const JointDist& aux, Alpha a) {
  require_same(j, aux);
  const JointDist prod = j.product_of_marginals();
  const JointDist mix = j.alpha_mixture(a);
  const double lhs =
      compensated_sum({a.value() * kl(prod.mass(), aux.mass()), a.complement() * kl(j.mass(), aux.mass())});
  return {lhs, kl(mix.mass(), aux.mass())};
}

Decomposition renyi_geometric_decomposition(const JointDist& j, const JointDist& aux, Alpha a) {
  require_same(j, aux);
  const JointDist prod = j.product_of_marginals();
  const double lhs =
      compensated_sum({a.value() * kl(aux.mass(), prod.mass()), a.complement() * kl(aux.mass(), j.mass())});
  return {lhs, kl(aux.mass(), j.geometric_mixture(a).mass())};
}

}  // namespace genbound
