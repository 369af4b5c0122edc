#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sigmalab/diffusion.hpp"
#include "sigmalab/grid.hpp"
#include "sigmalab/norms.hpp"
#include "sigmalab/propagator.hpp"
#include "sigmalab/semilinear.hpp"

using namespace sigmalab;

TEST_CASE("2-D moments of a shifted Gaussian") {
  const GridSpec g = make_grid(2, 128, 40.0);
  const double a = 0.7;
  const Field f = make_field(g, [a](double x, double y, double) {
    return std::exp(-(x - a) * (x - a) - y * y);
  });
  const double pi = std::numbers::pi;
  // M_0 = pi, M_(1,0) = -a pi, M_(0,1) = 0, M_(2,0) = (a^2 + 1/2) pi / 2.
  CHECK(moment(f, {0, 0, 0}) == doctest::Approx(pi).epsilon(1e-10));
  CHECK(moment(f, {1, 0, 0}) == doctest::Approx(-a * pi).epsilon(1e-10));
  CHECK(std::abs(moment(f, {0, 1, 0})) < 1e-10);
  CHECK(moment(f, {2, 0, 0}) ==
        doctest::Approx(0.5 * (a * a + 0.5) * pi).epsilon(1e-10));
  CHECK(moment(f, {1, 1, 0}) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("2-D expansion polynomial structure and evaluation") {
  const GridSpec g = make_grid(2, 128, 40.0);
  const Field v0 = make_field(g, [](double x, double y, double) {
    return std::exp(-(x - 0.5) * (x - 0.5) - (y + 0.3) * (y + 0.3));
  });

  const ExpansionCoefficients a1 = expansion_coefficients(v0, 1.5, 1);
  // |alpha| <= 1 in two dimensions: (0,0), (1,0), (0,1).
  CHECK(a1.terms.size() == 3);

  // A_1(xi) = M_0 + i (M_(1,0) xi_1 + M_(0,1) xi_2).
  const double m0 = moment(v0, {0, 0, 0});
  const double m10 = moment(v0, {1, 0, 0});
  const double m01 = moment(v0, {0, 1, 0});
  const std::array<double, 3> xi = {0.15, -0.2, 0.0};
  const std::complex<double> value = a1.evaluate(xi);
  CHECK(value.real() == doctest::Approx(m0).epsilon(1e-12));
  CHECK(value.imag() ==
        doctest::Approx(m10 * xi[0] + m01 * xi[1]).epsilon(1e-12));

  // sigma = 1 at order 2 picks up the radial |xi|^2 M_0 term: 6 + 1 terms.
  const ExpansionCoefficients b2 = expansion_coefficients(v0, 1.0, 2);
  CHECK(b2.terms.size() == 7);
}

TEST_CASE("2-D kernel norm rate is -n/(4 sigma)") {
  const GridSpec g = make_grid(2, 256, 200.0);
  const std::vector<double> times = log_spaced(1.0, 100.0, 10);
  std::vector<double> values;
  for (double t : times) values.push_back(g_sigma_norm(1.0, t, 0, 0.0, g));
  CHECK(fit_decay_exponent(times, values).slope ==
        doctest::Approx(-0.5).epsilon(0.06));

  // Closed form on the plane: || G_1(t) ||_{L2} = (8 pi t)^{-1/2}.
  CHECK(g_sigma_norm(1.0, 2.0, 0, 0.0, g) ==
        doctest::Approx(std::pow(8.0 * std::numbers::pi * 2.0, -0.5))
            .epsilon(1e-6));
}

TEST_CASE("2-D linear propagation: zero-mode mass law and decay") {
  const GridSpec g = make_grid(2, 128, 60.0);
  const Field u0 = make_field(g, [](double x, double y, double) {
    return std::exp(-x * x - y * y);
  });
  const Field u1 = make_field(g, [](double x, double y, double) {
    return 0.5 * std::exp(-(x - 1) * (x - 1) - y * y);
  });
  const double p0 = field_integral(u0);
  const double p1 = field_integral(u1);

  for (double t : {0.5, 4.0, 16.0}) {
    const Field u = propagate_linear(u0, u1, 1.0, t);
    const double expected = p0 + (1.0 - std::exp(-t)) * p1;
    CHECK(std::abs(field_integral(u) - expected) < 1e-12 * std::abs(expected));
  }

  const SpectralField u0h = to_spectral(u0);
  const SpectralField u1h = to_spectral(u1);
  const std::vector<double> times = log_spaced(2.0, 60.0, 10);
  std::vector<double> norms;
  for (double t : times) {
    const SpectralField ut = propagate_linear_spectral(u0h, u1h, 1.0, t);
    norms.push_back(l2_norm_from_spectrum(ut));
  }
  // n = 2, sigma = 1: slope -1/2 (window-limited tolerance).
  CHECK(fit_decay_exponent(times, norms).slope ==
        doctest::Approx(-0.5).epsilon(0.12));
}

TEST_CASE("2-D semilinear run: bounded, mass-consistent, linear-reducible") {
  const GridSpec g = make_grid(2, 64, 30.0);
  SemilinearConfig cfg;
  cfg.grid = g;
  cfg.sigma = 1.0;
  cfg.p = 3.0;
  cfg.dt = 0.05;
  cfg.t_end = 2.0;
  cfg.dense_sampling = true;

  const Field u0 = make_field(g, [](double x, double y, double) {
    return 0.1 * std::exp(-x * x - y * y);
  });
  const Field u1 = zero_field(g);

  SnapshotObserver snaps({2.0});
  StepObserver* obs[] = {&snaps};
  const SolutionLog log = run_semilinear(u0, u1, cfg, obs);
  CHECK_FALSE(log.blown_up);
  CHECK(log.cumulative_mass.back() > 0.0);

  // Zero-mode Duhamel identity, trapezoid on the dense log.
  REQUIRE(snaps.snapshots().size() == 1);
  const double t_end = snaps.snapshots()[0].t;
  const double lhs = snaps.snapshots()[0].u_hat.zero_mode().real();
  double duhamel = 0.0;
  for (std::size_t i = 0; i + 1 < log.times.size(); ++i) {
    const double g0 =
        (1.0 - std::exp(-(t_end - log.times[i]))) * log.lp_mass[i];
    const double g1 =
        (1.0 - std::exp(-(t_end - log.times[i + 1]))) * log.lp_mass[i + 1];
    duhamel += 0.5 * (log.times[i + 1] - log.times[i]) * (g0 + g1);
  }
  const double rhs = field_integral(u0) + duhamel;
  CHECK(std::abs(lhs - rhs) <= 2e-5 * std::abs(lhs));

  // Forcing off reproduces the linear flow in two dimensions as well.
  SemilinearConfig lin = cfg;
  lin.nonlinearity_coefficient = 0.0;
  lin.dense_sampling = false;
  SnapshotObserver lin_snaps({2.0});
  StepObserver* lin_obs[] = {&lin_snaps};
  run_semilinear(u0, u1, lin, lin_obs);
  const Field direct = propagate_linear(u0, u1, cfg.sigma, 2.0);
  const Field from_run = to_physical(lin_snaps.snapshots()[0].u_hat);
  double sup = 0.0;
  for (std::size_t i = 0; i < direct.values.size(); ++i)
    sup = std::max(sup, std::abs(direct.values[i] - from_run.values[i]));
  CHECK(sup < 1e-8);
}

TEST_CASE("3-D transforms and diffusion mass conservation") {
  const GridSpec g = make_grid(3, 16, 12.0);
  const Field v0 = make_field(g, [](double x, double y, double z) {
    return std::exp(-x * x - y * y - z * z);
  });
  const double mass = field_integral(v0);
  CHECK(mass ==
        doctest::Approx(std::pow(std::numbers::pi, 1.5)).epsilon(1e-6));
  const Field v = evaluate_diffusion(v0, 1.5, 1.0);
  CHECK(std::abs(field_integral(v) - mass) < 1e-12 * mass);
  // The anomalous flow keeps the field real and finite.
  for (double x : v.values) CHECK(std::isfinite(x));
}
