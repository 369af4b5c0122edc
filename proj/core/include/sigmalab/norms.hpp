//==============================================================================
// norms.hpp
// Discrete Lebesgue and weighted norms, log-log decay regression, the
// predicted-rate table for every decay statement the experiments check, and
// the radial quadrature behind the low-frequency multiplier estimate
//     integral_{|xi|<=1} |xi|^beta e^{-c |xi|^alpha t} d xi ~ t^{-(n+beta)/alpha}.
//==============================================================================
#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sigmalab/grid.hpp"

namespace sigmalab {

// (sum |f|^q h^n)^{1/q}; q = infinity returns max |f|. Rejects q < 1.
double lq_norm(const Field& f, double q);

// sum (1 + |x|)^gamma |f| h^n.
double weighted_l1_norm(const Field& f, double gamma);

// || c ||_{L2(d xi)} = sqrt( sum |c|^2 (2 pi / L)^n ).
double spectral_norm_l2(const SpectralField& c);

// Physical-side L2 norm computed from the spectrum (exact discrete Parseval).
double l2_norm_from_spectrum(const SpectralField& c);

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  int sample_count = 0;
};

// Least-squares line through (log t, log v). Requires >= 8 samples, strictly
// increasing times spanning at least one decade, and positive values.
DecayFit fit_decay_exponent(std::span<const double> times,
                            std::span<const double> values);

// Shared helper without the window constraints (used by the lifespan fit).
DecayFit loglog_fit(std::span<const double> xs, std::span<const double> ys,
                    int min_samples);

enum class RateKind {
  linear_l2,           // (L^m cap L^2)-L^2: -(n/2s)(1/m - 1/2) - a/2s - j
  linear_deriv,        // L^2-L^2:           -a/2s - j
  diffusion_gap,       // low-freq gap:      -(n/2s)(1/p - 1/q) - a/2s - j - 1
  first_order_profile, // -n/4s - 1/2s
  expansion,           // -n/4s - gamma/2s
  gsigma,              // -n/4s - a/2s - j
  semilinear           // -(n/2s)(1/m - 1/2) - (a/s)/2 - j, a in {0, s}
};

struct RateQuery {
  RateKind kind;
  int n = 1;
  double sigma = 1.0;
  double m = 1.0;
  double a = 0.0;
  int j = 0;
  double gamma = 0.0;
  double p = 1.0;
  double q = 2.0;
};

// Closed-form predicted exponent; throws std::invalid_argument naming the
// violated hypothesis for out-of-range parameters.
double predicted_exponent(const RateQuery& query);

// Lifespan exponent 2 sigma (p-1) / (2 sigma - n (p-1)) for subcritical p.
double lifespan_exponent(int n, double sigma, double p);

// Critical power 1 + 2 sigma / n.
double critical_exponent(int n, double sigma);

// Radial quadrature of integral_{|xi|<=1} |xi|^beta e^{-c |xi|^alpha t} d xi.
double annulus_integral(int n, double alpha, double beta, double c, double t);

// Evaluates the integral on t_values and fits the decay; slope must approach
// -(n+beta)/alpha. Requires alpha > 0, c > 0, n + beta > 0.
DecayFit appendix_integral_check(int n, double alpha, double beta, double c,
                                 std::span<const double> t_values);

// Log-spaced sample times in [t_min, t_max].
std::vector<double> log_spaced(double t_min, double t_max, int count);

} // namespace sigmalab
