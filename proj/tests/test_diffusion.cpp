#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sigmalab/diffusion.hpp"
#include "sigmalab/grid.hpp"
#include "sigmalab/norms.hpp"

using namespace sigmalab;

namespace {

Field unit_gaussian(const GridSpec& g, double shift = 0.0) {
  return make_field(g, [shift](double x, double, double) {
    return std::exp(-(x - shift) * (x - shift));
  });
}

} // namespace

TEST_CASE("exponent sequence examples") {
  for (double sigma : {1.0, 1.3, 2.0}) {
    const SpectrumSequence seq = spectrum_sequence(sigma, 2);
    CHECK(seq.values[0] == 0.0);
    CHECK(seq.values[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(seq.values[2] == doctest::Approx(2.0).epsilon(1e-15));
  }

  const SpectrumSequence s1 = spectrum_sequence(1.0, 5);
  for (int k = 0; k <= 5; ++k)
    CHECK(s1.values[static_cast<size_t>(k)] ==
          doctest::Approx(k).epsilon(1e-15));

  const SpectrumSequence s125 = spectrum_sequence(1.25, 4);
  const double expected[] = {0.0, 1.0, 2.0, 2.5, 3.0};
  for (int k = 0; k <= 4; ++k)
    CHECK(s125.values[static_cast<size_t>(k)] ==
          doctest::Approx(expected[k]).epsilon(1e-15));
}

TEST_CASE("exponent gaps always lie in (0, 1]") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> sig(1.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double sigma = trial == 0 ? 1.0 : sig(rng);
    const SpectrumSequence seq = spectrum_sequence(sigma, 20);
    for (std::size_t i = 0; i + 1 < seq.values.size(); ++i) {
      const double gap = seq.values[i + 1] - seq.values[i];
      CHECK(gap > 0.0);
      CHECK(gap <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("expansion order selection") {
  CHECK(expansion_order_for(1.0, 0.0) == 0);
  CHECK(expansion_order_for(1.0, 0.7) == 0);
  CHECK(expansion_order_for(1.0, 1.0) == 1);
  CHECK(expansion_order_for(1.0, 2.3) == 2);
  // sigma = 1.25: lambda = 0,1,2,2.5,3,...
  CHECK(expansion_order_for(1.25, 2.6) == 3);
  CHECK(expansion_order_for(1.25, 5.0) == 8); // 0,1,2,2.5,3,3.5,4,4.5,5
}

TEST_CASE("moments of the Gaussian") {
  const GridSpec g = make_grid(1, 512, 40.0);
  const Field f = unit_gaussian(g);
  CHECK(moment(f, {0, 0, 0}) ==
        doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
  CHECK(std::abs(moment(f, {1, 0, 0})) < 1e-12);
  // M_2 = (1/2!) int x^2 e^{-x^2} = sqrt(pi)/4.
  CHECK(moment(f, {2, 0, 0}) ==
        doctest::Approx(std::sqrt(std::numbers::pi) / 4.0).epsilon(1e-12));
  CHECK(moment(f, {2, 0, 0}) == doctest::Approx(0.44311346272637901).epsilon(1e-10));
}

TEST_CASE("moment boundary diagnostic flags a too-small box") {
  const Field good = unit_gaussian(make_grid(1, 512, 40.0));
  CHECK(moment_checked(good, {2, 0, 0}).reliable);

  const Field bad = unit_gaussian(make_grid(1, 32, 4.0));
  CHECK_FALSE(moment_checked(bad, {2, 0, 0}).reliable);
}

TEST_CASE("moment rejects multi-indices beyond the dimension") {
  const Field f = unit_gaussian(make_grid(1, 64, 10.0));
  CHECK_THROWS_AS(moment(f, {0, 1, 0}), std::invalid_argument);
}

TEST_CASE("expansion coefficients match the closed-form low orders") {
  const GridSpec g = make_grid(1, 512, 40.0);
  const Field v0 = unit_gaussian(g, 0.5);

  const ExpansionCoefficients a0 = expansion_coefficients(v0, 1.5, 0);
  REQUIRE(a0.terms.size() == 1);
  CHECK(a0.terms[0].ell == 0);
  CHECK(multi_index_order(a0.terms[0].alpha) == 0);
  CHECK(a0.terms[0].coeff ==
        doctest::Approx(field_integral(v0)).epsilon(1e-12));

  // sigma > 1: A_2 holds exactly the |alpha| <= 2 moment terms.
  const ExpansionCoefficients a2 = expansion_coefficients(v0, 1.5, 2);
  CHECK(a2.terms.size() == 3);
  for (const ExpansionTerm& term : a2.terms) CHECK(term.ell == 0);

  // sigma = 1: the (ell = 1, alpha = 0) term |xi|^2 M_0 joins at order 2.
  const ExpansionCoefficients b2 = expansion_coefficients(v0, 1.0, 2);
  CHECK(b2.terms.size() == 4);
  CHECK(std::count_if(b2.terms.begin(), b2.terms.end(),
                      [](const ExpansionTerm& t) { return t.ell == 1; }) == 1);
}

TEST_CASE("expansion term sets nest") {
  const Field v0 = unit_gaussian(make_grid(1, 256, 40.0), 0.3);
  for (double sigma : {1.0, 1.25, 1.7}) {
    for (int k = 0; k < 4; ++k) {
      const auto a = expansion_coefficients(v0, sigma, k);
      const auto b = expansion_coefficients(v0, sigma, k + 1);
      for (const ExpansionTerm& term : a.terms) {
        const bool found =
            std::any_of(b.terms.begin(), b.terms.end(),
                        [&](const ExpansionTerm& other) {
                          return other.ell == term.ell &&
                                 other.alpha == term.alpha;
                        });
        CHECK(found);
      }
      CHECK(a.terms.size() <= b.terms.size());
    }
  }
}

TEST_CASE("diffusion flow: identity at t = 0 and mass conservation") {
  const GridSpec g = make_grid(1, 256, 60.0);
  const Field v0 = unit_gaussian(g, 1.0);

  const Field at0 = evaluate_diffusion(v0, 1.25, 0.0);
  for (std::size_t i = 0; i < v0.values.size(); ++i)
    CHECK(std::abs(at0.values[i] - v0.values[i]) < 1e-12);

  const double mass = field_integral(v0);
  for (double t : {0.5, 4.0, 25.0}) {
    const Field v = evaluate_diffusion(v0, 1.25, t);
    CHECK(std::abs(field_integral(v) - mass) < 1e-12 * std::abs(mass));
  }
}

TEST_CASE("sigma = 1 diffusion reproduces the heat kernel") {
  // A Gaussian is the heat kernel at its own variance time: evolving it s
  // units forward gives the kernel at time s + s0 exactly.
  const GridSpec g = make_grid(1, 512, 40.0);
  const double s0 = 0.25; // e^{-x^2} = heat kernel at t = 1/4 (times mass)
  const Field v0 = unit_gaussian(g);
  const double t = 2.0;
  const Field v = evaluate_diffusion(v0, 1.0, t);
  const double mass = std::sqrt(std::numbers::pi);
  for (int i = 0; i < g.points_per_axis; i += 7) {
    const double x = g.coordinate(i);
    const double expected = mass / std::sqrt(4.0 * std::numbers::pi * (t + s0)) *
                            std::exp(-x * x / (4.0 * (t + s0)));
    CHECK(std::abs(v.values[static_cast<size_t>(i)] - expected) < 1e-8);
  }
}

TEST_CASE("diffusion time derivative equals the generator") {
  const GridSpec g = make_grid(1, 256, 50.0);
  const Field v0 = unit_gaussian(g, -1.0);
  const Field vt = evaluate_diffusion(v0, 1.0, 1.5, 1, 0.0);
  const Field lap = evaluate_diffusion(v0, 1.0, 1.5, 0, 2.0);
  // v_t = -|D|^{2 sigma} v, so for sigma = 1: vt = -(|D|^2 v).
  for (std::size_t i = 0; i < vt.values.size(); ++i)
    CHECK(std::abs(vt.values[i] + lap.values[i]) < 1e-10);
}

TEST_CASE("G_sigma norm: closed form, rates, and the t = 0 rejection") {
  const GridSpec g = make_grid(1, 1024, 400.0);
  CHECK_THROWS_AS(g_sigma_norm(1.0, 0.0, 0, 0.0, g), std::invalid_argument);

  // || G_1(t) ||_{L2} = (8 pi t)^{-1/4} on the line.
  for (double t : {1.0, 3.0}) {
    const double expected = std::pow(8.0 * std::numbers::pi * t, -0.25);
    CHECK(g_sigma_norm(1.0, t, 0, 0.0, g) ==
          doctest::Approx(expected).epsilon(1e-6));
  }
  CHECK(g_sigma_norm(1.0, 1.0, 0, 0.0, g) ==
        doctest::Approx(0.44662192086900115).epsilon(1e-5));

  const std::vector<double> times = log_spaced(1.0, 100.0, 12);
  for (const auto& [j, a, rate] :
       {std::tuple{0, 0.0, -0.25}, {1, 0.0, -1.25}, {0, 1.0, -0.75}}) {
    std::vector<double> values;
    for (double t : times) values.push_back(g_sigma_norm(1.0, t, j, a, g));
    CHECK(fit_decay_exponent(times, values).slope ==
          doctest::Approx(rate).epsilon(0.08));
  }

  // Anomalous case sigma = 1.25: rate -n/(4 sigma) = -0.2.
  std::vector<double> values;
  for (double t : times) values.push_back(g_sigma_norm(1.25, t, 0, 0.0, g));
  CHECK(fit_decay_exponent(times, values).slope ==
        doctest::Approx(-0.2).epsilon(0.1));
}

TEST_CASE("expansion residual behavior across gamma") {
  const GridSpec g = make_grid(1, 1024, 400.0);
  const Field u0 = unit_gaussian(g, 1.0);
  Field u1 = unit_gaussian(g, -2.0);
  for (double& v : u1.values) v *= 0.5;

  CHECK_THROWS_AS(expansion_residual(u0, u1, 1.0, 0.0, 0.5),
                  std::invalid_argument);

  // gamma = 1: slope at or below -(n/4s + gamma/2s) + 0.1.
  const std::vector<double> times = log_spaced(20.0, 200.0, 10);
  std::vector<double> values;
  for (double t : times)
    values.push_back(expansion_residual(u0, u1, 1.0, 1.0, t));
  CHECK(fit_decay_exponent(times, values).slope <= -0.75 + 0.1);

  // gamma = 0 with generic data: rescaled residual t^{1/4} R -> 0.
  std::vector<double> rescaled;
  for (double t : times)
    rescaled.push_back(std::pow(t, 0.25) *
                       expansion_residual(u0, u1, 1.0, 0.0, t));
  for (std::size_t i = 0; i + 1 < rescaled.size(); ++i)
    CHECK(rescaled[i + 1] < rescaled[i]);
}

TEST_CASE("pointwise symbol residual vanishes at xi = 0 and stays bounded") {
  const GridSpec g = make_grid(1, 512, 60.0);
  Field v0 = unit_gaussian(g, 0.5);

  const auto at_zero = pointwise_symbol_residual(v0, 1.0, 1.0, {0.0});
  CHECK(at_zero[0] < 1e-13);

  const std::vector<double> samples = {0.05, 0.1, 0.2, 0.4, 0.5};
  for (double gamma : {1.0, 2.0}) {
    const auto residuals = pointwise_symbol_residual(v0, 1.0, gamma, samples);
    std::vector<double> ratios;
    for (std::size_t i = 0; i < samples.size(); ++i)
      ratios.push_back(residuals[i] / std::pow(samples[i], gamma));
    const double at_half = ratios.back();
    for (double r : ratios) CHECK(r <= 2.0 * at_half);
  }

  CHECK_THROWS_AS(pointwise_symbol_residual(v0, 1.0, 1.0, {0.6}),
                  std::invalid_argument);
}
