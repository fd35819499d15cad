#include <cmath>

#include "doctest.h"
#include "genbound/adm.hpp"
#include "genbound/rng.hpp"

using namespace genbound;

TEST_CASE("envelope contract checks") {
  CHECK(check_envelope(CgfEnvelope::sub_gaussian(1.0)).empty());
  CHECK(check_envelope(CgfEnvelope::sub_gamma(1.0, 0.5)).empty());
  CgfEnvelope shifted;
  shifted.psi = [](double l) { return l; };
  CHECK_FALSE(check_envelope(shifted).empty());
  CgfEnvelope concave;
  concave.psi = [](double l) { return l * l - l * l * l; };
  concave.domain_upper = 2.0;
  CHECK_FALSE(check_envelope(concave).empty());
}

TEST_CASE("inverse legendre dual") {
  const CgfEnvelope q = CgfEnvelope::sub_gaussian(1.0);
  CHECK(inverse_legendre_dual(q, 2.0) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(inverse_legendre_dual(q, 0.0) == 0.0);
  CHECK(inverse_legendre_dual(q, kInf) == kInf);
  CHECK_THROWS_AS(inverse_legendre_dual(q, -1.0), ParameterError);
  const CgfEnvelope g = CgfEnvelope::sub_gamma(1.0, 0.5);
  CHECK(inverse_legendre_dual(g, 1.0) == doctest::Approx(std::sqrt(2.0) + 0.5).epsilon(1e-6));
  CHECK(inverse_legendre_dual(g, 1.0) == doctest::Approx(g.closed_form_inverse(1.0)).epsilon(1e-9));
}

TEST_CASE("quadratic envelopes match the closed form over many decades") {
  for (double sigma : {0.01, 0.5, 1.0, 30.0}) {
    const CgfEnvelope env = CgfEnvelope::sub_gaussian(sigma);
    for (double ly = -6.0; ly <= 3.0; ly += 0.25) {
      const double y = std::pow(10.0, ly);
      CHECK(inverse_legendre_dual(env, y) ==
            doctest::Approx(std::sqrt(2 * sigma * sigma * y)).epsilon(1e-6));
    }
  }
}

TEST_CASE("inverse dual is nondecreasing and concave") {
  const CgfEnvelope env = CgfEnvelope::sub_gamma(2.0, 0.3);
  Rng rng = make_rng(2, 0);
  for (int k = 0; k < 200; ++k) {
    const double a = 10 * uniform01(rng), b = 10 * uniform01(rng);
    const double fa = inverse_legendre_dual(env, a), fb = inverse_legendre_dual(env, b);
    CHECK(inverse_legendre_dual(env, 0.5 * (a + b)) >= 0.5 * (fa + fb) - 1e-9);
    if (a < b) CHECK(fa <= fb + 1e-12);
  }
}

TEST_CASE("general auxiliary bound") {
  const CgfEnvelope env = CgfEnvelope::sub_gaussian(1.0);
  auto zero = adm_general_bound({0, 0, 0}, {0, 0, 0}, env, env);
  CHECK(zero.upper == 0.0);
  CHECK(zero.lower == 0.0);
  const std::vector<double> mi{0.1, 0.4};
  auto b = adm_general_bound({0, 0}, mi, env, env);
  CHECK(b.upper == doctest::Approx(0.5 * (std::sqrt(0.2) + std::sqrt(0.8))).epsilon(1e-9));
  auto l = adm_general_bound(mi, {0, 0}, env, env);
  CHECK(l.upper == doctest::Approx(b.upper).epsilon(1e-9));
  auto inf = adm_general_bound({kInf}, {0.0}, env, env);
  CHECK(inf.upper == kInf);
  CHECK_THROWS_AS(adm_general_bound({0.0}, {0.0, 1.0}, env, env), ParameterError);
}

TEST_CASE("generalization bounds by kind") {
  const SubGaussianParams half = SubGaussianParams::bounded(0.0, 1.0);
  for (BoundSpec s : {BoundSpec::mi(), BoundSpec::lautum(), BoundSpec::js(0.3), BoundSpec::renyi(0.6),
                      BoundSpec::sibson(0.2), BoundSpec::pinsker_renyi(0.5)}) {
    CHECK(gen_bound({0.0, 0.0}, s, half).value == 0.0);
  }
  SubGaussianParams sa;
  sa.sigma_alpha = 0.5;
  const double js_info = 0.75 * std::log(4.0 / 3.0);
  CHECK(gen_bound({js_info}, BoundSpec::js(0.5), sa).value ==
        doctest::Approx(std::sqrt(2 * 0.25 * js_info / 0.25)).epsilon(1e-14));
  SubGaussianParams sg;
  sg.sigma = 0.5;
  sg.gamma = 0.5;
  CHECK(gen_bound({std::log(2.0)}, BoundSpec::renyi(0.5), sg).value ==
        doctest::Approx(std::sqrt(std::log(2.0))).epsilon(1e-14));
  CHECK(gen_bound({kInf, 0.1}, BoundSpec::mi(), half).value == kInf);
  CHECK_THROWS_AS(gen_bound({0.1}, BoundSpec::js(0.5), sg), ParameterError);
  CHECK_THROWS_AS(gen_bound({0.1}, BoundSpec::pinsker_renyi(0.5), sg), ParameterError);
  CHECK_THROWS_AS(gen_bound({-1.0}, BoundSpec::mi(), half), ParameterError);
  const auto rep = gen_bound({0.2}, BoundSpec::renyi(0.4), half);
  CHECK(rep.params.at("sigma") == 0.5);
  CHECK(rep.params.at("alpha") == 0.4);
  CHECK(rep.info.size() == 1);
}

TEST_CASE("loss range pins every sub-Gaussian parameter") {
  SubGaussianParams sg = SubGaussianParams::bounded(0.0, 2.0);
  CHECK(*sg.sigma == 1.0);
  sg.gamma = 3.0;
  CHECK_THROWS_AS(gen_bound({0.1}, BoundSpec::lautum(), sg), ParameterError);
}

TEST_CASE("constant JS bound") {
  SubGaussianParams one;
  one.sigma_alpha = 1.0;
  CHECK(js_constant_bound(one, Alpha(0.5)).value == doctest::Approx(2 * std::sqrt(2 * std::log(2.0))).epsilon(1e-14));
  CHECK(js_constant_bound(one, Alpha(0.5)).value == doctest::Approx(2.3548).epsilon(1e-4));
  const auto unit = js_constant_bound(SubGaussianParams::bounded(0.0, 1.0), Alpha(0.5));
  CHECK(unit.value == doctest::Approx(std::sqrt(2 * std::log(2.0))).epsilon(1e-14));
  CHECK(unit.value < 2.0);
  for (int i = 1; i <= 9; ++i) {
    CHECK(js_constant_bound(one, Alpha(i / 10.0)).value >= js_constant_bound(one, Alpha(0.5)).value);
  }
  // the data-dependent bound never exceeds the constant one, since JS <= h(alpha)
  Rng rng = make_rng(9, 0);
  for (int k = 0; k < 100; ++k) {
    const double a = 0.05 + 0.9 * uniform01(rng);
    const double info = binary_entropy(a) * uniform01(rng);
    CHECK(gen_bound({info}, BoundSpec::js(a), one).value <= js_constant_bound(one, Alpha(a)).value);
  }
}

TEST_CASE("tightness comparison") {
  const SubGaussianParams sg = SubGaussianParams::bounded(0.0, 1.0);
  auto cmp = tightness_comparison(Alpha(0.5), Alpha(1 - 1e-6), {0.0, 10.0}, sg);
  CHECK(cmp.threshold == doctest::Approx(4 * std::log(2.0)).epsilon(1e-5));
  CHECK_FALSE(cmp.js_tighter[0]);
  CHECK(cmp.js_tighter[1]);
  CHECK(tightness_comparison(Alpha(0.5), Alpha(0.5), {1.0}, sg).threshold ==
        doctest::Approx(2 * std::log(2.0)).epsilon(1e-14));
  SubGaussianParams uneq;
  uneq.sigma = 1.0;
  uneq.gamma = 2.0;
  uneq.sigma_alpha = 1.0;
  CHECK_THROWS_AS(tightness_comparison(Alpha(0.5), Alpha(0.5), {1.0}, uneq), ParameterError);
}

TEST_CASE("distribution mismatch bound") {
  SubGaussianParams sg;
  sg.sigma_alpha = 0.5;
  sg.sigma = 0.5;
  sg.gamma = 0.5;
  CHECK(mismatch_bound(0.0, {0.0}, BoundSpec::js(0.5), sg).value == 0.0);
  const std::vector<double> info{0.1, 0.3};
  CHECK(mismatch_bound(0.0, info, BoundSpec::renyi(0.3), sg).value ==
        gen_bound(info, BoundSpec::renyi(0.3), sg).value);
  CHECK(mismatch_bound(0.0, info, BoundSpec::js(0.3), sg).value ==
        gen_bound(info, BoundSpec::js(0.3), sg).value);
  const double disjoint = js_div(ProbVec::point_mass(2, 1), ProbVec::point_mass(2, 0), Alpha(0.5));
  CHECK(disjoint == doctest::Approx(std::log(2.0)));
  CHECK(mismatch_bound(disjoint, {0.0}, BoundSpec::js(0.5), sg).value ==
        doctest::Approx(std::sqrt(2 * std::log(2.0))).epsilon(1e-14));
  CHECK_THROWS_AS(mismatch_bound(0.1, info, BoundSpec::mi(), sg), ParameterError);
}

TEST_CASE("averaged KL bound with the product as auxiliary is the MI bound") {
  const double mi = 0.3;
  for (double a : {0.2, 0.7}) {
    // A = KL(joint || product) = MI, B = 0: sqrt(2 s^2 a MI / (a (1-a))) = MI bound / sqrt(1-a)
    CHECK(averaged_kl_bound({mi}, {0.0}, 0.5, Alpha(a)) ==
          doctest::Approx(std::sqrt(2 * 0.25 * mi / (1 - a))).epsilon(1e-14));
  }
}
