//==============================================================================
// propagator.hpp
// Exact solution operator of
//     u_tt + (-Laplace)^sigma u + u_t + (-Laplace)^sigma u_t = 0
// as a diagonal Fourier multiplier pair (m0, m1):
//     u_hat(t) = m0 u0_hat + m1 u1_hat,
//     m1 = (e^{-t w} - e^{-t}) / (1 - w),  w = |xi|^{2 sigma},
//     m0 = e^{-t} + m1,
// with a series evaluation across the removable singularity at w = 1, the
// closed-form time derivatives
//     dt m1 = e^{-t w} - m1,   dt m0 = -w m1,
// a smooth low/high cutoff, and an independent per-mode RK4 oracle.
//==============================================================================
#pragma once

#include <complex>
#include <filesystem>
#include <utility>
#include <vector>

#include "sigmalab/grid.hpp"

namespace sigmalab {

// Characteristic roots {-|xi|^{2 sigma}, -1}, ordered lambda_plus >= lambda_minus.
struct DampedRoots {
  double lambda_plus;
  double lambda_minus;
};

DampedRoots char_roots(double xi_mag, double sigma);

// Smooth radial cutoff: 1 on [0, inner_radius], 0 beyond outer_radius,
// cosine-squared ramp in between. Monotone non-increasing.
struct CutoffProfile {
  double inner_radius = 0.5;
  double outer_radius = 0.75;

  double operator()(double xi_mag) const;
};

struct MultiplierPair {
  double m0;
  double m1;
};

// Solution multipliers at frequency magnitude xi_mag and time t >= 0.
MultiplierPair multiplier_pair(double xi_mag, double sigma, double t);
// Their closed-form time derivatives.
MultiplierPair multiplier_pair_dt(double xi_mag, double sigma, double t);

namespace detail {
// m1 as a function of w = |xi|^{2 sigma}; series branch near w = 1 and for
// small t(1-w) avoids the cancellation in (e^{-t w} - e^{-t})/(1 - w).
double m1_symbol(double w, double t);
// Singularity guard band half-width on |w - 1|.
inline constexpr double kSingularityBand = 1e-4;
} // namespace detail

// dt^j |D|^a u(t) for the linear flow from data (u0, u1), evaluated through
// the multipliers in frequency space. j in {0,1}, a >= 0 (|0|^a = 0 for a>0).
Field propagate_linear(const Field& u0, const Field& u1, double sigma,
                       double t, int j = 0, double a = 0.0);

// Spectral-space variant: returns |xi|^a dt^j [m0 u0_hat + m1 u1_hat].
SpectralField propagate_linear_spectral(const SpectralField& u0_hat,
                                        const SpectralField& u1_hat,
                                        double sigma, double t, int j = 0,
                                        double a = 0.0);

// Splits f into (low, high) parts with spectral weights chi and 1 - chi.
std::pair<Field, Field> lowhigh_decompose(const Field& f,
                                          const CutoffProfile& chi);

// Keeps the chi-weighted (low = true) or (1-chi)-weighted part of a spectrum.
SpectralField apply_cutoff(const SpectralField& c, const CutoffProfile& chi,
                           bool low);

// Brute-force integration of the per-mode ODE
//     y'' + (1 + w) y' + w y = 0,  w = xi_mag^{2 sigma},
// from (u0hat, u1hat) to time t with `steps` classical RK4 steps.
std::complex<double> mode_ode_oracle(double xi_mag, double sigma,
                                     std::complex<double> u0hat,
                                     std::complex<double> u1hat, double t,
                                     int steps);

// Step count giving h * max(1, w) <= 0.02, ample for 1e-10 oracle accuracy.
int oracle_steps(double xi_mag, double sigma, double t);

// Debugging table of the multipliers: columns xi_mag, t, m0, m1.
void write_multiplier_table_csv(const std::filesystem::path& path,
                                double sigma,
                                const std::vector<double>& xi_values,
                                const std::vector<double>& t_values);

} // namespace sigmalab
