#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sigmalab/grid.hpp"
#include "sigmalab/norms.hpp"

using namespace sigmalab;

namespace {

Field gaussian(const GridSpec& g) {
  return make_field(g, [](double x, double, double) { return std::exp(-x * x); });
}

} // namespace

TEST_CASE("Lq norms: spot values and errors") {
  const GridSpec g = make_grid(1, 512, 10.0);
  Field ones = zero_field(g);
  for (double& v : ones.values) v = 1.0;
  CHECK(lq_norm(ones, 1.0) == doctest::Approx(10.0).epsilon(1e-14));

  const GridSpec gw = make_grid(1, 512, 40.0);
  const Field f = gaussian(gw);
  // || e^{-x^2} ||_{L2} = (pi/2)^{1/4}.
  CHECK(lq_norm(f, 2.0) ==
        doctest::Approx(std::pow(std::numbers::pi / 2.0, 0.25)).epsilon(1e-12));
  CHECK(lq_norm(f, 2.0) == doctest::Approx(1.1195151349202477).epsilon(1e-12));
  CHECK(lq_norm(f, std::numeric_limits<double>::infinity()) ==
        doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(lq_norm(f, 0.5), std::invalid_argument);
}

TEST_CASE("Lq norm properties: triangle inequality and homogeneity") {
  const GridSpec g = make_grid(1, 128, 7.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Field a = zero_field(g), b = zero_field(g);
    for (double& v : a.values) v = unit(rng);
    for (double& v : b.values) v = unit(rng);
    Field sum = a;
    for (std::size_t i = 0; i < sum.values.size(); ++i)
      sum.values[i] += b.values[i];
    for (double q : {1.0, 2.0, 3.5}) {
      CHECK(lq_norm(sum, q) <=
            lq_norm(a, q) + lq_norm(b, q) + 1e-12);
      Field scaled = a;
      for (double& v : scaled.values) v *= -2.5;
      CHECK(lq_norm(scaled, q) ==
            doctest::Approx(2.5 * lq_norm(a, q)).epsilon(1e-13));
    }
  }
}

TEST_CASE("weighted L1 norms") {
  const GridSpec g = make_grid(1, 1024, 60.0);
  const Field f = gaussian(g);
  CHECK(weighted_l1_norm(f, 0.0) ==
        doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-10));
  // int (1+|x|) e^{-x^2} = sqrt(pi) + 1; the |x| kink caps the quadrature
  // at O(h^2), so the tolerance follows the grid.
  CHECK(weighted_l1_norm(f, 1.0) ==
        doctest::Approx(std::sqrt(std::numbers::pi) + 1.0).epsilon(1e-3));
  const Field fine = make_field(make_grid(1, 8192, 60.0),
                                [](double x, double, double) {
                                  return std::exp(-x * x);
                                });
  CHECK(weighted_l1_norm(fine, 1.0) ==
        doctest::Approx(std::sqrt(std::numbers::pi) + 1.0).epsilon(2e-5));
  CHECK(weighted_l1_norm(zero_field(g), 2.0) == 0.0);
  CHECK_THROWS_AS(weighted_l1_norm(f, -0.5), std::invalid_argument);
}

TEST_CASE("log-log regression: exact power laws and windows") {
  const std::vector<double> times = log_spaced(1.0, 100.0, 10);
  std::vector<double> values;
  for (double t : times) values.push_back(std::pow(t, -0.5));
  const DecayFit fit = fit_decay_exponent(times, values);
  CHECK(std::abs(fit.slope + 0.5) < 1e-10);
  CHECK(fit.rms_residual < 1e-12);
  CHECK(fit.sample_count == 10);

  // Mild multiplicative noise keeps the slope within 0.02.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> noise(-0.01, 0.01);
  std::vector<double> noisy;
  for (double t : times) noisy.push_back(3.0 * std::pow(t, -1.25) * (1.0 + noise(rng)));
  CHECK(fit_decay_exponent(times, noisy).slope ==
        doctest::Approx(-1.25).epsilon(0.02));

  std::vector<double> constant(times.size(), 2.0);
  CHECK(std::abs(fit_decay_exponent(times, constant).slope) < 1e-12);

  // Errors: too few samples, narrow window, non-positive values.
  const std::vector<double> few_t = {1, 2, 3, 4, 5, 6, 7};
  const std::vector<double> few_v(7, 1.0);
  CHECK_THROWS_AS(fit_decay_exponent(few_t, few_v), std::invalid_argument);
  const std::vector<double> narrow = log_spaced(10.0, 50.0, 9);
  const std::vector<double> nv(9, 1.0);
  CHECK_THROWS_AS(fit_decay_exponent(narrow, nv), std::invalid_argument);
  std::vector<double> with_zero(times.size(), 1.0);
  with_zero[3] = 0.0;
  CHECK_THROWS_AS(fit_decay_exponent(times, with_zero), std::invalid_argument);
}

TEST_CASE("predicted exponents: the rate table") {
  CHECK(predicted_exponent({RateKind::linear_l2, 1, 1.0, 1.0, 0.0, 0}) ==
        doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(predicted_exponent({RateKind::linear_l2, 1, 1.0, 1.0, 1.0, 0}) ==
        doctest::Approx(-0.75).epsilon(1e-15));
  CHECK(predicted_exponent({RateKind::linear_l2, 1, 1.0, 1.0, 0.0, 1}) ==
        doctest::Approx(-1.25).epsilon(1e-15));
  CHECK(predicted_exponent({RateKind::linear_deriv, 3, 1.5, 1.0, 2.0, 1}) ==
        doctest::Approx(-2.0 / 3.0 - 1.0).epsilon(1e-15));

  RateQuery gap{RateKind::diffusion_gap, 1, 1.0};
  gap.p = 1.0;
  gap.q = 2.0;
  CHECK(predicted_exponent(gap) == doctest::Approx(-1.25).epsilon(1e-15));

  CHECK(predicted_exponent({RateKind::first_order_profile, 2, 1.0}) ==
        doctest::Approx(-1.0).epsilon(1e-15));

  RateQuery exp_q{RateKind::expansion, 1, 1.0};
  exp_q.gamma = 2.0;
  CHECK(predicted_exponent(exp_q) == doctest::Approx(-1.25).epsilon(1e-15));

  CHECK(predicted_exponent({RateKind::gsigma, 1, 1.25, 1.0, 1.0, 1}) ==
        doctest::Approx(-0.2 - 0.4 - 1.0).epsilon(1e-15));

  RateQuery semi{RateKind::semilinear, 1, 1.0};
  semi.m = 1.0;
  semi.p = 4.0;
  CHECK(predicted_exponent(semi) == doctest::Approx(-0.25).epsilon(1e-15));
  semi.a = 1.0; // = sigma
  CHECK(predicted_exponent(semi) == doctest::Approx(-0.75).epsilon(1e-15));
}

TEST_CASE("predicted exponents: hypothesis violations are named") {
  RateQuery bad_m{RateKind::linear_l2, 1, 1.0};
  bad_m.m = 2.0;
  CHECK_THROWS_WITH_AS(predicted_exponent(bad_m),
                       "rate query: m must lie in [1, 2)",
                       std::invalid_argument);

  RateQuery bad_q{RateKind::diffusion_gap, 1, 1.0};
  bad_q.p = 2.0;
  bad_q.q = 1.0;
  CHECK_THROWS_AS(predicted_exponent(bad_q), std::invalid_argument);

  RateQuery subcrit{RateKind::semilinear, 1, 1.0};
  subcrit.p = 2.0; // not > 1 + 2 m sigma / n = 3
  CHECK_THROWS_AS(predicted_exponent(subcrit), std::invalid_argument);

  RateQuery excluded{RateKind::semilinear, 1, 1.0};
  excluded.p = 4.0;
  excluded.a = 1.0;
  excluded.j = 1;
  CHECK_THROWS_AS(predicted_exponent(excluded), std::invalid_argument);

  // n beyond the admissible window for the energy theory.
  RateQuery too_big_n{RateKind::semilinear, 5, 1.0};
  too_big_n.p = 4.0;
  CHECK_THROWS_AS(predicted_exponent(too_big_n), std::invalid_argument);
}

TEST_CASE("lifespan and critical exponents") {
  CHECK(critical_exponent(1, 1.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(critical_exponent(2, 1.5) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(lifespan_exponent(1, 1.0, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(lifespan_exponent(1, 1.0, 2.5) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK_THROWS_AS(lifespan_exponent(1, 1.0, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(lifespan_exponent(1, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("annulus integral: closed forms and the decay fit") {
  // n=1, alpha=2, beta=0, c=1: integral = sqrt(pi/t) erf(sqrt(t)).
  for (double t : {0.5, 4.0, 50.0}) {
    const double expected =
        std::sqrt(std::numbers::pi / t) * std::erf(std::sqrt(t));
    CHECK(annulus_integral(1, 2.0, 0.0, 1.0, t) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
  // n=2, alpha=2, beta=1, c=1: 2 pi [sqrt(pi) erf(sqrt(t))/(4 t^{3/2})
  //                                   - e^{-t}/(2 t)].
  for (double t : {1.0, 9.0}) {
    const double expected =
        2.0 * std::numbers::pi *
        (std::sqrt(std::numbers::pi) * std::erf(std::sqrt(t)) /
             (4.0 * std::pow(t, 1.5)) -
         std::exp(-t) / (2.0 * t));
    CHECK(annulus_integral(2, 2.0, 1.0, 1.0, t) ==
          doctest::Approx(expected).epsilon(1e-9));
  }

  const std::vector<double> times = log_spaced(10.0, 1000.0, 12);
  CHECK(appendix_integral_check(1, 2.0, 0.0, 1.0, times).slope ==
        doctest::Approx(-0.5).epsilon(0.04));
  CHECK(appendix_integral_check(2, 2.0, 1.0, 1.0, times).slope ==
        doctest::Approx(-1.5).epsilon(0.013));

  // Bounded near t = 0 by the t -> 0 limit (monotone in t).
  const double limit = annulus_integral(1, 2.0, 0.0, 1.0, 0.0);
  CHECK(limit == doctest::Approx(2.0).epsilon(1e-10));
  double prev = limit;
  for (double t : {0.01, 0.1, 0.5, 1.0}) {
    const double v = annulus_integral(1, 2.0, 0.0, 1.0, t);
    CHECK(v <= prev + 1e-12);
    prev = v;
  }

  CHECK_THROWS_AS(annulus_integral(1, 2.0, -1.5, 1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(annulus_integral(1, -2.0, 0.0, 1.0, 1.0),
                  std::invalid_argument);
}
