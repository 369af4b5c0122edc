//==============================================================================
// diffusion.hpp
// The anomalous diffusion flow v_t + (-Laplace)^sigma v = 0, its kernel
// G_sigma = F^{-1}(e^{-t |xi|^{2 sigma}}), moment functionals
//     M_alpha(f) = ((-1)^{|alpha|}/alpha!) integral x^alpha f dx,
// the exponent set {2 sigma l + j : l, j >= 0} enumerated as lambda(k), the
// expansion polynomial
//     A_k(xi) = sum_{2 sigma l + |alpha| <= lambda(k)} |xi|^{2 sigma l}
//               M_alpha(v0) (i xi)^alpha,
// and the frequency-space residual || u_hat(t) - A_k e^{-t |xi|^{2 sigma}} ||.
//==============================================================================
#pragma once

#include <array>
#include <complex>
#include <filesystem>
#include <vector>

#include "sigmalab/grid.hpp"

namespace sigmalab {

using MultiIndex = std::array<int, 3>; // unused axes stay 0

int multi_index_order(const MultiIndex& alpha);

// Increasing enumeration lambda(0) < ... < lambda(k_max) of {2 sigma l + j}.
struct SpectrumSequence {
  double sigma;
  std::vector<double> values;
};

// Duplicates are merged with absolute tolerance 1e-12 (rational sigma collides
// exactly, irrational sigma only approximately).
SpectrumSequence spectrum_sequence(double sigma, int k_max);

// Index k with lambda(k) <= gamma < lambda(k+1).
int expansion_order_for(double sigma, double gamma);

// M_alpha(f) by box quadrature.
double moment(const Field& f, const MultiIndex& alpha);

// Quadrature result plus a boundary diagnostic: ratio of the largest
// |x|^{|alpha|} |f| on the outermost grid shell to the absolute moment mass.
// reliable == (ratio <= 1e-8), the point where box truncation taints M_alpha.
struct MomentCheck {
  double value;
  double boundary_ratio;
  bool reliable;
};

MomentCheck moment_checked(const Field& f, const MultiIndex& alpha);

struct ExpansionTerm {
  int ell;
  MultiIndex alpha;
  double coeff; // M_alpha(v0)
};

struct ExpansionCoefficients {
  double sigma;
  int k;
  double lambda_k;
  std::vector<ExpansionTerm> terms;
  bool moments_reliable = true;

  // A_k(xi) = sum |xi|^{2 sigma ell} coeff (i xi)^alpha.
  std::complex<double> evaluate(const std::array<double, 3>& xi) const;
};

ExpansionCoefficients expansion_coefficients(const Field& v0, double sigma,
                                             int k);

// Term dump: columns ell, alpha0, alpha1, alpha2, coeff.
void write_expansion_coefficients_csv(const ExpansionCoefficients& a,
                                      const std::filesystem::path& path);

// dt^j |D|^a v(t) for the diffusion flow with data v0, via the multiplier
// (-w)^j |xi|^a e^{-t w}, w = |xi|^{2 sigma}.
Field evaluate_diffusion(const Field& v0, double sigma, double t, int j = 0,
                         double a = 0.0);

SpectralField evaluate_diffusion_spectral(const SpectralField& v0_hat,
                                          double sigma, double t, int j = 0,
                                          double a = 0.0);

// Discrete L2(dx) norm of dt^j |D|^a G_sigma(t, .) realized spectrally on the
// given grid. Rejects t <= 0 (the kernel is distributional at t = 0).
double g_sigma_norm(double sigma, double t, int j, double a,
                    const GridSpec& grid);

// || u_hat(t) - A_k e^{-t |xi|^{2 sigma}} ||_{L2(d xi)} over the full lattice,
// with v0 = u0 + u1 and k determined by gamma. Requires t >= 1.
double expansion_residual(const Field& u0, const Field& u1, double sigma,
                          double gamma, double t);

// |F(xi) - A_k(xi)| with F(xi) = v0_hat(xi)/(1 - |xi|^{2 sigma}), sampled at
// frequencies (xi, 0, 0) with |xi| <= 1/2; v0_hat evaluated by off-lattice
// quadrature. The ratio to |xi|^gamma is the quantity that must stay bounded.
std::vector<double> pointwise_symbol_residual(
    const Field& v0, double sigma, double gamma,
    const std::vector<double>& xi_samples);

} // namespace sigmalab
