#include <cmath>

#include "doctest.h"
#include "genbound/adm.hpp"
#include "genbound/oracle.hpp"

using namespace genbound;

TEST_CASE("data-independent kernels give zero generalization error") {
  const LearnerInstance inst(ProbVec({"a", "b", "c"}, {0.2, 0.3, 0.5}), {"u", "v"},
                             {{0.1, 0.5, 0.9}, {0.7, 0.2, 0.4}}, 2, 1.0, ProbVec({"u", "v"}, {0.5, 0.5}));
  const auto e = enumerate_learner(inst, constant_kernel(inst, ProbVec({"u", "v"}, {0.3, 0.7})));
  CHECK(std::abs(e.exact_gen) < 1e-15);
  for (const JointDist& j : e.per_sample_joints) {
    CHECK(info_measure(j, InfoSpec::mi()) < 1e-15);
  }
}

TEST_CASE("identity learner on a fair bit") {
  const LearnerInstance inst(ProbVec({"0", "1"}, {0.5, 0.5}), {"0", "1"}, {{0, 1}, {1, 0}}, 1, 1.0,
                             ProbVec({"0", "1"}, {0.5, 0.5}));
  const Kernel k{ProbVec({"0", "1"}, {1, 0}), ProbVec({"0", "1"}, {0, 1})};
  const auto e = enumerate_learner(inst, k);
  CHECK(e.exact_gen == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(e.exact_gen_per_sample == doctest::Approx(0.5).epsilon(1e-15));
  const JointDist& j = e.per_sample_joints[0];
  CHECK(j(0, 0) == 0.5);
  CHECK(j(0, 1) == 0.0);
  const SubGaussianParams sg = SubGaussianParams::bounded(0, 1);
  const double mi_bound = gen_bound({info_measure(j, InfoSpec::mi())}, BoundSpec::mi(), sg).value;
  CHECK(mi_bound == doctest::Approx(std::sqrt(0.5 * std::log(2.0))).epsilon(1e-14));
  CHECK(mi_bound == doctest::Approx(0.589).epsilon(1e-3));
  CHECK(mi_bound >= e.exact_gen);
  for (double a : {0.3, 0.6, 0.9}) {
    CHECK(info_measure(j, InfoSpec::renyi(a)) == doctest::Approx(a / (1 - a) * std::log(2.0)).epsilon(1e-13));
  }
}

TEST_CASE("exchangeable enumeration agrees with dataset enumeration") {
  const LearnerInstance inst(ProbVec({"0", "1", "2"}, {0.2, 0.5, 0.3}), {"a", "b"},
                             {{0.0, 1.0, 0.5}, {1.0, 0.0, 0.2}}, 4, 3.0, ProbVec({"a", "b"}, {0.4, 0.6}));
  const auto full = enumerate_learner(inst, gibbs_kernel(inst));
  const auto typed = enumerate_exchangeable(inst, gibbs_count_kernel(inst));
  CHECK(typed.gen == doctest::Approx(full.exact_gen).epsilon(1e-12));
  CHECK(typed.gen_direct == doctest::Approx(full.exact_gen).epsilon(1e-12));
  for (const JointDist& j : full.per_sample_joints) {
    for (std::size_t c = 0; c < j.mass().size(); ++c) {
      CHECK(j.mass()[c] == doctest::Approx(typed.joint.mass()[c]).epsilon(1e-12));
    }
  }
}

TEST_CASE("fuzzed instances: the two generalization routes agree") {
  for (std::uint64_t k = 0; k < 100; ++k) {
    const FuzzCase fc = random_fuzz_case(derive_seed(1, k));
    const auto e = enumerate_learner(fc.instance, fc.kernel);
    CHECK(std::abs(e.exact_gen - e.exact_gen_per_sample) <= 1e-12);
    for (const JointDist& j : e.per_sample_joints) {
      CHECK(j.w_marginal().tv_distance(e.p_w) < 1e-12);
      CHECK(j.z_marginal().tv_distance(fc.instance.mu) < 1e-12);
    }
  }
}

TEST_CASE("Monte Carlo divergences") {
  const GaussianLaw a({0.0}, {{1.0}}), b({1.0}, {{1.0}});
  const McEstimate same = mc_divergence(a, a, {McKind::KL}, 100000, 1);
  CHECK(same.estimate == 0.0);
  const McEstimate half = mc_divergence(a, b, {McKind::KL}, 1000000, 2);
  CHECK(std::abs(half.estimate - 0.5) <= 3 * half.std_error);
  const McEstimate r = mc_divergence(a, b, {McKind::Renyi, 0.3}, 1000000, 3);
  // renyi_div(p, q, a) for unit-variance normals with unit mean gap is a/2
  CHECK(std::abs(r.estimate - 0.15) <= 3 * r.std_error);
  CHECK_THROWS_AS(mc_divergence(a, b, {McKind::KL}, 100, 1), DomainError);
  const McEstimate again = mc_divergence(a, b, {McKind::KL}, 100000, 2);
  const McEstimate again2 = mc_divergence(a, b, {McKind::KL}, 100000, 2);
  CHECK(again.estimate == again2.estimate);
}

TEST_CASE("finite difference gradient check") {
  const std::vector<double> c{0.3, -1.2, 2.0};
  auto linear = [&](const std::vector<double>& x) { return c[0] * x[0] + c[1] * x[1] + c[2] * x[2]; };
  CHECK(finite_diff_grad_check(linear, c, {0.2, 0.3, 0.5}, 1e-5) <= 1e-10);
  const std::vector<double> q{0.1, 0.6, 0.3}, p{0.25, 0.25, 0.5};
  auto klf = [&](const std::vector<double>& x) {
    double s = 0;
    for (int i = 0; i < 3; ++i) s += x[i] * std::log(x[i] / q[i]);
    return s;
  };
  std::vector<double> g(3);
  for (int i = 0; i < 3; ++i) g[i] = std::log(p[i] / q[i]) + 1;
  CHECK(finite_diff_grad_check(klf, g, p, 1e-6) <= 1e-5);
  CHECK_THROWS_AS(finite_diff_grad_check(klf, g, {1e-9, 0.5, 0.5}, 1e-6), DomainError);
  CHECK_THROWS_AS(finite_diff_grad_check(klf, g, p, 1e-2), DomainError);
}

TEST_CASE("grid search finds the minimum of a smooth convex function") {
  const std::vector<double> t{0.2, 0.5, 0.3};
  auto f = [&](const std::vector<double>& p) {
    double s = 0;
    for (int i = 0; i < 3; ++i) s += (p[i] - t[i]) * (p[i] - t[i]);
    return s;
  };
  const GridOptimum g = grid_search_simplex3(f);
  CHECK(g.value <= 1e-12);
}
