#include "sigmalab/propagator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sigmalab/io.hpp"

namespace sigmalab {

namespace detail {

namespace {
// phi(z) = (e^z - 1)/z = sum_{k>=0} z^k/(k+1)!, truncated at 16 terms.
// For |z| <= 1/2 the tail is below 1e-19 relative.
double phi_series(double z) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 16; ++k) {
    term *= z / static_cast<double>(k + 1);
    sum += term;
  }
  return sum;
}
} // namespace

double m1_symbol(double w, double t) {
  const double z = t * (1.0 - w);
  // Series branch: removable singularity at w = 1 plus the small-z regime
  // where the direct difference loses digits.
  if (std::abs(1.0 - w) < kSingularityBand || std::abs(z) < 0.5)
    return t * std::exp(-t) * phi_series(z);
  return (std::exp(-t * w) - std::exp(-t)) / (1.0 - w);
}

} // namespace detail

DampedRoots char_roots(double xi_mag, double sigma) {
  if (xi_mag < 0.0) throw std::invalid_argument("char_roots: xi_mag < 0");
  if (sigma < 1.0) throw std::invalid_argument("char_roots: sigma < 1");
  // lambda^2 + (1 + w) lambda + w = (lambda + w)(lambda + 1), w = |xi|^{2 sigma}.
  const double w = std::pow(xi_mag, 2.0 * sigma);
  return {std::max(-w, -1.0), std::min(-w, -1.0)};
}

double CutoffProfile::operator()(double xi_mag) const {
  const double rho = std::abs(xi_mag);
  if (rho <= inner_radius) return 1.0;
  if (rho >= outer_radius) return 0.0;
  const double s = (rho - inner_radius) / (outer_radius - inner_radius);
  const double c = std::cos(0.5 * std::numbers::pi * s);
  return c * c;
}

MultiplierPair multiplier_pair(double xi_mag, double sigma, double t) {
  if (t < 0.0) throw std::invalid_argument("multiplier_pair: t < 0");
  const double w = std::pow(xi_mag, 2.0 * sigma);
  const double m1 = detail::m1_symbol(w, t);
  return {std::exp(-t) + m1, m1};
}

MultiplierPair multiplier_pair_dt(double xi_mag, double sigma, double t) {
  if (t < 0.0) throw std::invalid_argument("multiplier_pair_dt: t < 0");
  const double w = std::pow(xi_mag, 2.0 * sigma);
  const double m1 = detail::m1_symbol(w, t);
  return {-w * m1, std::exp(-t * w) - m1};
}

SpectralField propagate_linear_spectral(const SpectralField& u0_hat,
                                        const SpectralField& u1_hat,
                                        double sigma, double t, int j,
                                        double a) {
  if (!u0_hat.grid.same_layout(u1_hat.grid))
    throw std::invalid_argument("propagate_linear: grid mismatch");
  if (j != 0 && j != 1)
    throw std::invalid_argument("propagate_linear: j must be 0 or 1");
  if (a < 0.0) throw std::invalid_argument("propagate_linear: a < 0");
  if (t < 0.0) throw std::invalid_argument("propagate_linear: t < 0");

  SpectralField out;
  out.grid = u0_hat.grid;
  out.coefficients.resize(u0_hat.coefficients.size());
  for_each_mode_magnitude(out.grid, [&](std::size_t i, double xi_mag) {
    const MultiplierPair m = j == 0 ? multiplier_pair(xi_mag, sigma, t)
                                    : multiplier_pair_dt(xi_mag, sigma, t);
    const double amp = a == 0.0 ? 1.0 : std::pow(xi_mag, a);
    out.coefficients[i] =
        amp * (m.m0 * u0_hat.coefficients[i] + m.m1 * u1_hat.coefficients[i]);
  });
  return out;
}

Field propagate_linear(const Field& u0, const Field& u1, double sigma,
                       double t, int j, double a) {
  if (!u0.grid.same_layout(u1.grid))
    throw std::invalid_argument("propagate_linear: grid mismatch");
  const SpectralField u0_hat = to_spectral(u0);
  const SpectralField u1_hat = to_spectral(u1);
  return to_physical(propagate_linear_spectral(u0_hat, u1_hat, sigma, t, j, a));
}

SpectralField apply_cutoff(const SpectralField& c, const CutoffProfile& chi,
                           bool low) {
  SpectralField out;
  out.grid = c.grid;
  out.coefficients.resize(c.coefficients.size());
  for_each_mode_magnitude(c.grid, [&](std::size_t i, double xi_mag) {
    const double weight = low ? chi(xi_mag) : 1.0 - chi(xi_mag);
    out.coefficients[i] = weight * c.coefficients[i];
  });
  return out;
}

std::pair<Field, Field> lowhigh_decompose(const Field& f,
                                          const CutoffProfile& chi) {
  if (!(chi.inner_radius > 0.0) || !(chi.outer_radius > chi.inner_radius))
    throw std::invalid_argument("lowhigh_decompose: invalid cutoff radii");
  const SpectralField c = to_spectral(f);
  Field low = to_physical(apply_cutoff(c, chi, true));
  Field high = to_physical(apply_cutoff(c, chi, false));
  return {std::move(low), std::move(high)};
}

std::complex<double> mode_ode_oracle(double xi_mag, double sigma,
                                     std::complex<double> u0hat,
                                     std::complex<double> u1hat, double t,
                                     int steps) {
  if (steps < 1) throw std::invalid_argument("mode_ode_oracle: steps < 1");
  if (t < 0.0) throw std::invalid_argument("mode_ode_oracle: t < 0");
  const double w = std::pow(xi_mag, 2.0 * sigma);
  const double h = t / static_cast<double>(steps);

  using C = std::complex<double>;
  C y = u0hat, v = u1hat;
  const auto accel = [w](C yy, C vv) { return -(1.0 + w) * vv - w * yy; };
  for (int s = 0; s < steps; ++s) {
    const C k1y = v, k1v = accel(y, v);
    const C k2y = v + 0.5 * h * k1v, k2v = accel(y + 0.5 * h * k1y, k2y);
    const C k3y = v + 0.5 * h * k2v, k3v = accel(y + 0.5 * h * k2y, k3y);
    const C k4y = v + h * k3v, k4v = accel(y + h * k3y, k4y);
    y += (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
  return y;
}

int oracle_steps(double xi_mag, double sigma, double t) {
  const double w = std::pow(xi_mag, 2.0 * sigma);
  const double stiff = std::max(1.0, w);
  return std::max(1000, static_cast<int>(std::ceil(50.0 * t * stiff)));
}

void write_multiplier_table_csv(const std::filesystem::path& path,
                                double sigma,
                                const std::vector<double>& xi_values,
                                const std::vector<double>& t_values) {
  CsvWriter csv(path, {"xi_mag", "t", "m0", "m1"});
  for (double xi : xi_values)
    for (double t : t_values) {
      const MultiplierPair m = multiplier_pair(xi, sigma, t);
      csv.row({xi, t, m.m0, m.m1});
    }
}

} // namespace sigmalab
