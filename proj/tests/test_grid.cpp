#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <set>

#include "sigmalab/grid.hpp"
#include "sigmalab/norms.hpp"

using namespace sigmalab;

namespace {

Field random_field(const GridSpec& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Field f = zero_field(g);
  for (double& v : f.values) v = unit(rng);
  return f;
}

} // namespace

TEST_CASE("make_grid validates its preconditions") {
  CHECK_THROWS_AS(make_grid(1, 7, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 4, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(4, 16, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(0, 16, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 16, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 16, 0.0), std::invalid_argument);
}

TEST_CASE("frequency lattice matches 2 pi k / L") {
  // L = 2 pi makes xi_k = k, covering {-4,...,3} for N = 8.
  const GridSpec g = make_grid(1, 8, 2.0 * std::numbers::pi);
  std::multiset<int> freqs;
  for (int i = 0; i < 8; ++i)
    freqs.insert(static_cast<int>(std::lround(g.frequency(i))));
  const std::multiset<int> expected = {-4, -3, -2, -1, 0, 1, 2, 3};
  CHECK(freqs == expected);

  const GridSpec g2 = make_grid(2, 16, 40.0);
  CHECK(g2.total_points() == 256);
  double max_axis_freq = 0.0;
  for (int i = 0; i < 16; ++i)
    max_axis_freq = std::max(max_axis_freq, std::abs(g2.frequency(i)));
  CHECK(max_axis_freq == doctest::Approx(2.0 * std::numbers::pi * 8.0 / 40.0)
                             .epsilon(1e-14));
  CHECK(g2.spacing * g2.points_per_axis == g2.box_length);
}

TEST_CASE("to_spectral of zero is zero and of a Gaussian approximates the "
          "Fourier integral") {
  const GridSpec g = make_grid(1, 512, 40.0);

  const Field zero = zero_field(g);
  const SpectralField zc = to_spectral(zero);
  for (const auto& c : zc.coefficients) CHECK(std::abs(c) == 0.0);

  const Field gauss = make_field(
      g, [](double x, double, double) { return std::exp(-x * x); });
  const SpectralField c = to_spectral(gauss);
  // c(0) ~ integral of e^{-x^2} = sqrt(pi).
  CHECK(std::abs(c.zero_mode() - std::sqrt(std::numbers::pi)) < 1e-10);
  // And the full symbol e^{-xi^2/4} sqrt(pi) at a nonzero lattice frequency.
  const double xi = g.frequency(5);
  const double expected = std::sqrt(std::numbers::pi) * std::exp(-xi * xi / 4);
  CHECK(std::abs(c.coefficients[5] - expected) < 1e-10);
}

TEST_CASE("real fields have conjugate-symmetric spectra") {
  const GridSpec g = make_grid(1, 64, 17.0);
  const SpectralField c = to_spectral(random_field(g, 7));
  for (int k = 1; k < 32; ++k) {
    const std::complex<double> plus = c.coefficients[static_cast<size_t>(k)];
    const std::complex<double> minus =
        c.coefficients[static_cast<size_t>(64 - k)];
    CHECK(std::abs(minus - std::conj(plus)) < 1e-12);
  }
}

TEST_CASE("transform round-trip is the identity to 1e-12") {
  for (const GridSpec& g : {make_grid(1, 256, 12.5), make_grid(2, 32, 7.0),
                            make_grid(3, 16, 3.0)}) {
    const Field f = random_field(g, 11 + g.dimension);
    const Field back = to_physical(to_spectral(f));
    double sup = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      sup = std::max(sup, std::abs(back.values[i] - f.values[i]));
      scale = std::max(scale, std::abs(f.values[i]));
    }
    CHECK(sup <= 1e-12 * scale);
  }
}

TEST_CASE("a single conjugate mode pair inverts to a cosine") {
  const GridSpec g = make_grid(1, 64, 10.0);
  SpectralField c;
  c.grid = g;
  c.coefficients.assign(64, 0.0);
  const int k0 = 3;
  c.coefficients[k0] = 1.0;
  c.coefficients[64 - k0] = 1.0;
  const Field f = to_physical(c);
  const double xi = g.frequency(k0);
  for (int i = 0; i < 64; ++i) {
    const double x = g.coordinate(i);
    CHECK(f.values[static_cast<size_t>(i)] ==
          doctest::Approx(2.0 / g.box_length * std::cos(xi * x))
              .epsilon(1e-12));
  }
}

TEST_CASE("asymmetric spectra are rejected by the inverse transform") {
  const GridSpec g = make_grid(1, 32, 5.0);
  SpectralField c;
  c.grid = g;
  c.coefficients.assign(32, 0.0);
  c.coefficients[3] = {0.4, 0.9}; // no conjugate partner
  CHECK_THROWS_AS(to_physical(c), std::runtime_error);
}

TEST_CASE("non-finite fields are rejected by the forward transform") {
  const GridSpec g = make_grid(1, 32, 5.0);
  Field f = zero_field(g);
  f.values[4] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(to_spectral(f), std::invalid_argument);
}

TEST_CASE("discrete Parseval identity holds exactly") {
  for (const GridSpec& g : {make_grid(1, 256, 10.0), make_grid(2, 32, 4.0)}) {
    const Field f = random_field(g, 23 + g.dimension);
    const SpectralField c = to_spectral(f);
    const double phys = lq_norm(f, 2.0);
    const double from_spec = l2_norm_from_spectrum(c);
    CHECK(std::abs(phys - from_spec) <= 1e-10 * phys);
  }
}

TEST_CASE("shifting by one grid cell multiplies the spectrum by a phase") {
  const GridSpec g = make_grid(1, 128, 21.0);
  const Field f = random_field(g, 31);
  Field shifted = f;
  // f_shift(x) = f(x - h) as a circular shift.
  std::rotate(shifted.values.rbegin(), shifted.values.rbegin() + 1,
              shifted.values.rend());
  const SpectralField cf = to_spectral(f);
  const SpectralField cs = to_spectral(shifted);
  for (int k = 0; k < 128; ++k) {
    const double xi = g.frequency(k);
    const std::complex<double> phase(std::cos(xi * g.spacing),
                                     -std::sin(xi * g.spacing));
    CHECK(std::abs(cs.coefficients[static_cast<size_t>(k)] -
                   phase * cf.coefficients[static_cast<size_t>(k)]) < 1e-11);
  }
}

TEST_CASE("field integral is the zero spectral mode") {
  const GridSpec g = make_grid(2, 32, 9.0);
  const Field f = random_field(g, 41);
  const SpectralField c = to_spectral(f);
  CHECK(std::abs(field_integral(f) - c.zero_mode().real()) < 1e-11);
}
