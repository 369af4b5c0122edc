#include "sigmalab/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sigmalab/io.hpp"
#include "sigmalab/propagator.hpp"

namespace sigmalab {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

double multi_factorial(const MultiIndex& alpha) {
  return factorial(alpha[0]) * factorial(alpha[1]) * factorial(alpha[2]);
}

double power(double base, int exp) {
  double r = 1.0;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// All multi-indices of order exactly `order` in `dim` dimensions.
std::vector<MultiIndex> multi_indices_of_order(int dim, int order) {
  std::vector<MultiIndex> out;
  if (dim == 1) {
    out.push_back({order, 0, 0});
    return out;
  }
  for (int a0 = 0; a0 <= order; ++a0) {
    if (dim == 2) {
      out.push_back({a0, order - a0, 0});
    } else {
      for (int a1 = 0; a1 <= order - a0; ++a1)
        out.push_back({a0, a1, order - a0 - a1});
    }
  }
  return out;
}

constexpr double kDedupTol = 1e-12;

} // namespace

int multi_index_order(const MultiIndex& alpha) {
  return alpha[0] + alpha[1] + alpha[2];
}

SpectrumSequence spectrum_sequence(double sigma, int k_max) {
  if (sigma < 1.0) throw std::invalid_argument("spectrum_sequence: sigma < 1");
  if (k_max < 0) throw std::invalid_argument("spectrum_sequence: k_max < 0");

  // The integers alone give 0,1,2,..., so the (k_max+1) smallest elements of
  // {2 sigma l + j} all lie in [0, k_max]; enumerate up to that bound.
  const double bound = static_cast<double>(k_max) + kDedupTol;
  std::vector<double> all;
  for (int ell = 0; 2.0 * sigma * ell <= bound; ++ell)
    for (int j = 0; 2.0 * sigma * ell + j <= bound; ++j)
      all.push_back(2.0 * sigma * ell + j);
  std::sort(all.begin(), all.end());

  SpectrumSequence seq;
  seq.sigma = sigma;
  for (double v : all) {
    if (seq.values.empty() || v - seq.values.back() > kDedupTol)
      seq.values.push_back(v);
    if (static_cast<int>(seq.values.size()) == k_max + 1) break;
  }
  return seq;
}

int expansion_order_for(double sigma, double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("expansion_order_for: gamma < 0");
  // The distinct values of {2 sigma l + j} in [0, gamma] number at most
  // (gamma/(2 sigma) + 1)(gamma + 1), so enumerating that many reaches past
  // gamma and the index with lambda(k) <= gamma < lambda(k+1) is in range.
  const int pair_bound =
      static_cast<int>((gamma / (2.0 * sigma) + 1.0) * (gamma + 1.0)) + 2;
  const SpectrumSequence seq = spectrum_sequence(sigma, pair_bound);
  int k = 0;
  for (std::size_t i = 1; i < seq.values.size(); ++i)
    if (seq.values[i] <= gamma + kDedupTol) k = static_cast<int>(i);
  return k;
}

MomentCheck moment_checked(const Field& f, const MultiIndex& alpha) {
  const GridSpec& g = f.grid;
  for (int d = g.dimension; d < 3; ++d)
    if (alpha[d] != 0)
      throw std::invalid_argument("moment: multi-index exceeds dimension");

  const int order = multi_index_order(alpha);
  const double cell = std::pow(g.spacing, g.dimension);
  const int last = g.points_per_axis - 1;
  const auto ext = g.extents();

  double signed_sum = 0.0, abs_sum = 0.0, boundary_max = 0.0;
  std::size_t flat = 0;
  for (int i0 = 0; i0 < ext[0]; ++i0) {
    for (int i1 = 0; i1 < ext[1]; ++i1) {
      for (int i2 = 0; i2 < ext[2]; ++i2, ++flat) {
        const double x0 = g.coordinate(i0);
        const double x1 = g.dimension > 1 ? g.coordinate(i1) : 0.0;
        const double x2 = g.dimension > 2 ? g.coordinate(i2) : 0.0;
        const double xa =
            power(x0, alpha[0]) * power(x1, alpha[1]) * power(x2, alpha[2]);
        const double v = f.values[flat];
        signed_sum += xa * v;
        abs_sum += std::abs(xa * v);
        const bool on_boundary =
            i0 == 0 || i0 == last ||
            (g.dimension > 1 && (i1 == 0 || i1 == last)) ||
            (g.dimension > 2 && (i2 == 0 || i2 == last));
        if (on_boundary) {
          const double r = std::sqrt(x0 * x0 + x1 * x1 + x2 * x2);
          boundary_max =
              std::max(boundary_max, std::pow(r, order) * std::abs(v));
        }
      }
    }
  }

  MomentCheck out;
  const double sign = order % 2 == 0 ? 1.0 : -1.0;
  out.value = sign / multi_factorial(alpha) * signed_sum * cell;
  const double mass = std::max(abs_sum * cell, 1e-300);
  out.boundary_ratio = boundary_max / mass;
  out.reliable = out.boundary_ratio <= 1e-8;
  return out;
}

double moment(const Field& f, const MultiIndex& alpha) {
  return moment_checked(f, alpha).value;
}

std::complex<double> ExpansionCoefficients::evaluate(
    const std::array<double, 3>& xi) const {
  const double mag2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
  std::complex<double> total = 0.0;
  for (const ExpansionTerm& term : terms) {
    // (i xi)^alpha = i^{|alpha|} xi^alpha
    const int order = multi_index_order(term.alpha);
    const double xa = power(xi[0], term.alpha[0]) *
                      power(xi[1], term.alpha[1]) *
                      power(xi[2], term.alpha[2]);
    static constexpr std::complex<double> i_pow[4] = {
        {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    const double radial =
        term.ell == 0 ? 1.0 : std::pow(mag2, sigma * static_cast<double>(term.ell));
    total += radial * term.coeff * xa * i_pow[order % 4];
  }
  return total;
}

ExpansionCoefficients expansion_coefficients(const Field& v0, double sigma,
                                             int k) {
  if (k < 0) throw std::invalid_argument("expansion_coefficients: k < 0");
  const SpectrumSequence seq = spectrum_sequence(sigma, k);
  const double lambda_k = seq.values.back();

  ExpansionCoefficients out;
  out.sigma = sigma;
  out.k = k;
  out.lambda_k = lambda_k;
  for (int ell = 0; 2.0 * sigma * ell <= lambda_k + kDedupTol; ++ell) {
    const double slack = lambda_k - 2.0 * sigma * ell;
    for (int j = 0; j <= static_cast<int>(slack + kDedupTol); ++j) {
      for (const MultiIndex& alpha :
           multi_indices_of_order(v0.grid.dimension, j)) {
        const MomentCheck m = moment_checked(v0, alpha);
        out.terms.push_back({ell, alpha, m.value});
        out.moments_reliable = out.moments_reliable && m.reliable;
      }
    }
  }
  return out;
}

void write_expansion_coefficients_csv(const ExpansionCoefficients& a,
                                      const std::filesystem::path& path) {
  CsvWriter csv(path, {"ell", "alpha0", "alpha1", "alpha2", "coeff"});
  for (const ExpansionTerm& term : a.terms)
    csv.row({static_cast<double>(term.ell), static_cast<double>(term.alpha[0]),
             static_cast<double>(term.alpha[1]),
             static_cast<double>(term.alpha[2]), term.coeff});
}

SpectralField evaluate_diffusion_spectral(const SpectralField& v0_hat,
                                          double sigma, double t, int j,
                                          double a) {
  if (t < 0.0) throw std::invalid_argument("evaluate_diffusion: t < 0");
  if (j != 0 && j != 1)
    throw std::invalid_argument("evaluate_diffusion: j must be 0 or 1");
  SpectralField out;
  out.grid = v0_hat.grid;
  out.coefficients.resize(v0_hat.coefficients.size());
  for_each_mode_magnitude(out.grid, [&](std::size_t i, double xi_mag) {
    const double w = std::pow(xi_mag, 2.0 * sigma);
    const double amp = a == 0.0 ? 1.0 : std::pow(xi_mag, a);
    const double deriv = j == 0 ? 1.0 : -w;
    out.coefficients[i] =
        deriv * amp * std::exp(-t * w) * v0_hat.coefficients[i];
  });
  return out;
}

Field evaluate_diffusion(const Field& v0, double sigma, double t, int j,
                         double a) {
  return to_physical(evaluate_diffusion_spectral(to_spectral(v0), sigma, t, j, a));
}

double g_sigma_norm(double sigma, double t, int j, double a,
                    const GridSpec& grid) {
  if (!(t > 0.0))
    throw std::invalid_argument("g_sigma_norm: t must be positive");
  // Parseval: ||f||_{L2(dx)}^2 = (2 pi)^{-n} sum |f_hat|^2 (2 pi / L)^n.
  const int n = grid.dimension;
  double sum = 0.0;
  for_each_mode_magnitude(grid, [&](std::size_t, double xi_mag) {
    const double w = std::pow(xi_mag, 2.0 * sigma);
    const double amp = a == 0.0 ? 1.0 : std::pow(xi_mag, a);
    const double deriv = j == 0 ? 1.0 : w;
    const double symbol = deriv * amp * std::exp(-t * w);
    sum += symbol * symbol;
  });
  const double dxi = 2.0 * std::numbers::pi / grid.box_length;
  return std::sqrt(sum * std::pow(dxi, n)) /
         std::pow(2.0 * std::numbers::pi, 0.5 * n);
}

double expansion_residual(const Field& u0, const Field& u1, double sigma,
                          double gamma, double t) {
  if (t < 1.0) throw std::invalid_argument("expansion_residual: t < 1");
  if (!u0.grid.same_layout(u1.grid))
    throw std::invalid_argument("expansion_residual: grid mismatch");

  Field v0 = u0;
  for (std::size_t i = 0; i < v0.values.size(); ++i)
    v0.values[i] += u1.values[i];

  const int k = expansion_order_for(sigma, gamma);
  const ExpansionCoefficients ak = expansion_coefficients(v0, sigma, k);

  const SpectralField u0_hat = to_spectral(u0);
  const SpectralField u1_hat = to_spectral(u1);
  const SpectralField u_hat =
      propagate_linear_spectral(u0_hat, u1_hat, sigma, t, 0, 0.0);

  double sum = 0.0;
  for_each_mode(u_hat.grid, [&](std::size_t i, const std::array<double, 3>& xi) {
    const double mag2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    const double w = std::pow(mag2, sigma); // |xi|^{2 sigma}
    const std::complex<double> profile = ak.evaluate(xi) * std::exp(-t * w);
    sum += std::norm(u_hat.coefficients[i] - profile);
  });
  const double dxi = 2.0 * std::numbers::pi / u_hat.grid.box_length;
  return std::sqrt(sum * std::pow(dxi, u_hat.grid.dimension));
}

std::vector<double> pointwise_symbol_residual(
    const Field& v0, double sigma, double gamma,
    const std::vector<double>& xi_samples) {
  for (double s : xi_samples)
    if (std::abs(s) > 0.5)
      throw std::invalid_argument(
          "pointwise_symbol_residual: samples must have |xi| <= 1/2");

  const int k = expansion_order_for(sigma, gamma);
  const ExpansionCoefficients ak = expansion_coefficients(v0, sigma, k);
  const double cell = std::pow(v0.grid.spacing, v0.grid.dimension);

  std::vector<double> out;
  out.reserve(xi_samples.size());
  for (double s : xi_samples) {
    // Off-lattice quadrature of v0_hat(xi) = sum v0(x) e^{-i xi x1} h^n.
    std::complex<double> v0_hat = 0.0;
    for_each_point(v0.grid, [&](std::size_t i, const std::array<double, 3>& x) {
      v0_hat += v0.values[i] *
                std::complex<double>(std::cos(s * x[0]), -std::sin(s * x[0]));
    });
    v0_hat *= cell;

    const double w = std::pow(std::abs(s), 2.0 * sigma);
    const std::complex<double> f_symbol = v0_hat / (1.0 - w);
    out.push_back(std::abs(f_symbol - ak.evaluate({s, 0.0, 0.0})));
  }
  return out;
}

} // namespace sigmalab
