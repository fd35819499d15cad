#include <cmath>

#include "doctest.h"
#include "genbound/gaussian.hpp"
#include "genbound/oracle.hpp"

using namespace genbound;

namespace {

ToyConfig at(double t) {
  ToyConfig c;
  c.t = t;
  return c;
}

GaussianLaw joint_law(double rho) { return GaussianLaw({0, 0}, {{1, rho}, {rho, 1}}); }
GaussianLaw product_law() { return GaussianLaw({0, 0}, {{1, 0}, {0, 1}}); }

}  // namespace

TEST_CASE("toy geometry") {
  const auto g = toy_geometry(at(0.5));
  CHECK(g.rho1 == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(g.rho2 == doctest::Approx(g.rho1).epsilon(1e-15));
  const auto small = toy_geometry(at(1e-6));
  CHECK(small.rho1 < 1e-5);
  CHECK(small.rho2 > 1 - 1e-9);
  CHECK(toy_geometry(at(0.25)).rho1 == doctest::Approx(0.25 / std::sqrt(0.0625 + 0.5625)).epsilon(1e-15));
  CHECK(toy_geometry(at(0.25)).rho1 == doctest::Approx(0.3162).epsilon(1e-4));
  ToyConfig c = at(0.3);
  c.variance = 4.0;
  const auto g3 = toy_geometry(c);
  CHECK(g3.cov_joint1[0][1] == doctest::Approx(0.3 * 4.0));
  CHECK(g3.cov_joint2[0][1] == doctest::Approx(0.7 * 4.0));
  CHECK(g3.var_w == doctest::Approx(4.0 * (0.09 + 0.49)));
  CHECK_THROWS_AS(at(1.0).validate(), DomainError);
}

TEST_CASE("toy mutual information") {
  CHECK(toy_information(at(0.5), 1, InfoSpec::mi()) == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-14));
  CHECK(toy_information(at(1e-3), 2, InfoSpec::mi()) > 3.0);
  CHECK(std::isfinite(toy_information(at(1e-3), 2, InfoSpec::renyi(0.5))));
}

TEST_CASE("differential entropies use the standard constants") {
  const double s2 = 2.5;
  CHECK(gaussian_entropy_1d(s2) == doctest::Approx(0.5 * std::log(2 * M_PI * M_E * s2)));
  const Mat2 cov{{{2.0, 0.6}, {0.6, 1.0}}};
  CHECK(gaussian_entropy_2d(cov) ==
        doctest::Approx(std::log(2 * M_PI * M_E) + 0.5 * std::log(2.0 - 0.36)));
  // entropy form: I_JS = h(mixture) - a h(product) - (1-a) h(joint), with h(mixture) by Monte Carlo
  const double rho = 0.6, a = 0.3;
  const double hp = 2 * gaussian_entropy_1d(1.0);
  const double hj = gaussian_entropy_2d({{{1.0, rho}, {rho, 1.0}}});
  const GaussianLaw j = joint_law(rho), p = product_law();
  Rng rng = make_rng(21, 0);
  NormalSampler normal;
  std::vector<double> x;
  double mean = 0, m2 = 0;
  const int n = 2000000;
  for (int k = 0; k < n; ++k) {
    if (uniform01(rng) < a) p.sample(rng, normal, x); else j.sample(rng, normal, x);
    const double v = -std::log(a * std::exp(p.log_pdf(x)) + (1 - a) * std::exp(j.log_pdf(x)));
    const double d = v - mean;
    mean += d / (k + 1);
    m2 += d * (v - mean);
  }
  const double se = std::sqrt(m2 / (n - 1.0) / n);
  CHECK(std::abs(gaussian_js_info(rho, Alpha(a)) - (mean - a * hp - (1 - a) * hj)) <= 4 * se);
}

TEST_CASE("gaussian renyi information tends to lautum as alpha approaches one") {
  for (double t : {0.1, 0.3, 0.5}) {
    const double rho = toy_rho(at(t), 1);
    CHECK(gaussian_renyi_info(rho, Alpha(1 - 1e-6)) == doctest::Approx(gaussian_lautum(rho)).epsilon(1e-4));
  }
}

TEST_CASE("gaussian renyi closed form against Monte Carlo") {
  std::uint64_t seed = 100;
  for (double t : {0.1, 0.3, 0.5}) {
    for (double a : {0.25, 0.5, 0.75}) {
      for (int i : {1, 2}) {
        const double rho = toy_rho(at(t), i);
        const McEstimate mc = mc_divergence(joint_law(rho), product_law(), {McKind::Renyi, a},
                                            10000000, seed++);
        const double exact = gaussian_renyi_info(rho, Alpha(a));
        CHECK(std::abs(mc.estimate - exact) <= 3 * mc.std_error + 1e-12);
      }
    }
  }
}

TEST_CASE("gaussian JS information against Monte Carlo") {
  const double rho = toy_rho(at(0.5), 1);
  const McEstimate mc =
      mc_divergence(joint_law(rho), product_law(), {McKind::JS, 0.5}, 10000000, 77);
  const double quad = toy_information(at(0.5), 1, InfoSpec::js(0.5));
  CHECK(std::abs(mc.estimate - quad) <= 3 * mc.std_error);
  const McEstimate strat = gaussian_js_info_mc(rho, Alpha(0.5), 1000000, 5);
  CHECK(std::abs(strat.estimate - quad) <= 4 * strat.std_error);
}

TEST_CASE("gaussian JS information stays below the binary entropy") {
  for (double t : default_t_grid()) {
    for (double a : {0.25, 0.5, 0.75}) {
      for (int i : {1, 2}) {
        const double v = toy_information(at(t), i, InfoSpec::js(a));
        CHECK(v >= 0.0);
        CHECK(v <= binary_entropy(a));
        CHECK(v <= (1 - a) * toy_information(at(t), i, InfoSpec::mi()) + 1e-12);
      }
    }
  }
  CHECK(gaussian_js_info(1 - 1e-12, Alpha(0.5)) == doctest::Approx(std::log(2.0)).epsilon(1e-4));
}

TEST_CASE("true generalization error") {
  ToyConfig c = at(0.5);
  c.mc_samples = 200000;
  c.c = 1e-9;
  const McEstimate zero = toy_true_gen_error(c);
  CHECK(std::abs(zero.estimate) <= 1e-12);

  c.c = 0.25;
  const McEstimate g = toy_true_gen_error(c);
  CHECK(g.estimate > 0.0);
  const SubGaussianParams sg = toy_sub_gaussian(c);
  const double js = gen_bound({toy_information(c, 1, InfoSpec::js(0.5)), toy_information(c, 2, InfoSpec::js(0.5))},
                              BoundSpec::js(0.5), sg)
                        .value;
  CHECK(g.estimate < js);

  ToyConfig lo = at(0.2), hi = at(0.8);
  lo.mc_samples = hi.mc_samples = 400000;
  hi.seed = 99;
  const McEstimate a = toy_true_gen_error(lo), b = toy_true_gen_error(hi);
  CHECK(std::abs(a.estimate - b.estimate) <= 3 * std::hypot(a.std_error, b.std_error));

  const McEstimate again = toy_true_gen_error(lo);
  CHECK(again.estimate == a.estimate);
}

TEST_CASE("sweep rows") {
  ToyConfig c;
  c.mc_samples = 20000;
  const auto grid = default_t_grid();
  CHECK(grid.size() == 25);
  CHECK(grid.front() > 0.02);
  CHECK(grid.back() == 0.5);
  const auto rows = toy_sweep(c, {0.5}, {0.25, 0.5});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].bound_js.size() == 2);
  for (double v : rows[0].bound_js) CHECK(v >= rows[0].gen.estimate - 3 * rows[0].gen.std_error);
  CHECK_THROWS_AS(toy_sweep(c, {0.7}, {0.5}), DomainError);
}
