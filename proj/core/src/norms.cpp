#include "sigmalab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sigmalab {

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr int kGLPoints = 16;
constexpr double kGLNodes[kGLPoints] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318,
    -0.7554044083550030, -0.6178762444026438, -0.4580167776572274,
    -0.2816035507792589, -0.0950125098376374, 0.0950125098376374,
    0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,
    0.9894009349916499};
constexpr double kGLWeights[kGLPoints] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928,
    0.1246289712555339, 0.1495959888165767, 0.1691565193950025,
    0.1826034150449236, 0.1894506104550685, 0.1894506104550685,
    0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479,
    0.0271524594117541};

double gauss_legendre(double a, double b, const auto& fn) {
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double sum = 0.0;
  for (int i = 0; i < kGLPoints; ++i)
    sum += kGLWeights[i] * fn(mid + half * kGLNodes[i]);
  return sum * half;
}

double sphere_area(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: throw std::invalid_argument("dimension must be 1, 2, or 3");
  }
}

} // namespace

double lq_norm(const Field& f, double q) {
  if (q < 1.0) throw std::invalid_argument("lq_norm: q < 1");
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
  }
  const double cell = std::pow(f.grid.spacing, f.grid.dimension);
  double sum = 0.0;
  if (q == 2.0) {
    for (double v : f.values) sum += v * v;
  } else if (q == 1.0) {
    for (double v : f.values) sum += std::abs(v);
  } else {
    for (double v : f.values) sum += std::pow(std::abs(v), q);
  }
  return std::pow(sum * cell, 1.0 / q);
}

double weighted_l1_norm(const Field& f, double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("weighted_l1_norm: gamma < 0");
  const double cell = std::pow(f.grid.spacing, f.grid.dimension);
  double sum = 0.0;
  for_each_point(f.grid, [&](std::size_t i, const std::array<double, 3>& x) {
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    sum += std::pow(1.0 + r, gamma) * std::abs(f.values[i]);
  });
  return sum * cell;
}

double spectral_norm_l2(const SpectralField& c) {
  const double dxi = 2.0 * std::numbers::pi / c.grid.box_length;
  double sum = 0.0;
  for (const auto& z : c.coefficients) sum += std::norm(z);
  return std::sqrt(sum * std::pow(dxi, c.grid.dimension));
}

double l2_norm_from_spectrum(const SpectralField& c) {
  return spectral_norm_l2(c) /
         std::pow(2.0 * std::numbers::pi, 0.5 * c.grid.dimension);
}

DecayFit loglog_fit(std::span<const double> xs, std::span<const double> ys,
                    int min_samples) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("loglog_fit: size mismatch");
  if (static_cast<int>(xs.size()) < min_samples)
    throw std::invalid_argument("loglog_fit: too few samples");
  const std::size_t n = xs.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw std::invalid_argument("loglog_fit: non-positive sample");
    if (i > 0 && !(xs[i] > xs[i - 1]))
      throw std::invalid_argument("loglog_fit: abscissae not increasing");
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = static_cast<double>(n) * sxx - sx * sx;
  DecayFit fit;
  fit.slope = (static_cast<double>(n) * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / static_cast<double>(n);
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r =
        std::log(ys[i]) - (fit.intercept + fit.slope * std::log(xs[i]));
    rss += r * r;
  }
  fit.rms_residual = std::sqrt(rss / static_cast<double>(n));
  fit.t_min = xs.front();
  fit.t_max = xs.back();
  fit.sample_count = static_cast<int>(n);
  return fit;
}

DecayFit fit_decay_exponent(std::span<const double> times,
                            std::span<const double> values) {
  if (times.size() < 8)
    throw std::invalid_argument("fit_decay_exponent: need >= 8 samples");
  if (!times.empty() && times.back() < 10.0 * times.front())
    throw std::invalid_argument(
        "fit_decay_exponent: window must span at least one decade");
  return loglog_fit(times, values, 8);
}

double critical_exponent(int n, double sigma) {
  return 1.0 + 2.0 * sigma / static_cast<double>(n);
}

double lifespan_exponent(int n, double sigma, double p) {
  if (!(p > 1.0) || !(p < critical_exponent(n, sigma)))
    throw std::invalid_argument(
        "lifespan_exponent: requires 1 < p < 1 + 2 sigma / n");
  return 2.0 * sigma * (p - 1.0) /
         (2.0 * sigma - static_cast<double>(n) * (p - 1.0));
}

double predicted_exponent(const RateQuery& query) {
  const double n = static_cast<double>(query.n);
  const double s = query.sigma;
  if (query.n < 1) throw std::invalid_argument("rate query: n >= 1 required");
  if (s < 1.0) throw std::invalid_argument("rate query: sigma >= 1 required");
  if (query.j != 0 && query.j != 1)
    throw std::invalid_argument("rate query: j must be 0 or 1");
  if (query.a < 0.0) throw std::invalid_argument("rate query: a >= 0 required");

  switch (query.kind) {
    case RateKind::linear_l2:
      if (query.m < 1.0 || query.m >= 2.0)
        throw std::invalid_argument("rate query: m must lie in [1, 2)");
      return -(n / (2.0 * s)) * (1.0 / query.m - 0.5) - query.a / (2.0 * s) -
             query.j;
    case RateKind::linear_deriv:
      return -query.a / (2.0 * s) - query.j;
    case RateKind::diffusion_gap:
      if (query.p < 1.0 || query.q < query.p)
        throw std::invalid_argument("rate query: need 1 <= p <= q <= inf");
      return -(n / (2.0 * s)) * (1.0 / query.p - 1.0 / query.q) -
             query.a / (2.0 * s) - query.j - 1.0;
    case RateKind::first_order_profile:
      return -n / (4.0 * s) - 1.0 / (2.0 * s);
    case RateKind::expansion:
      if (query.gamma < 0.0)
        throw std::invalid_argument("rate query: gamma >= 0 required");
      return -n / (4.0 * s) - query.gamma / (2.0 * s);
    case RateKind::gsigma:
      return -n / (4.0 * s) - query.a / (2.0 * s) - query.j;
    case RateKind::semilinear: {
      if (query.m < 1.0 || query.m >= 2.0)
        throw std::invalid_argument("rate query: m must lie in [1, 2)");
      if (!(query.p > 1.0 + 2.0 * query.m * s / n))
        throw std::invalid_argument(
            "rate query: supercritical p > 1 + 2 m sigma / n required");
      if (!(query.p >= 2.0 / query.m))
        throw std::invalid_argument("rate query: p >= 2/m required");
      if (n > 2.0 * s) {
        if (n > 4.0 * s / (2.0 - query.m))
          throw std::invalid_argument(
              "rate query: n <= 4 sigma / (2 - m) required");
        if (query.p > n / (n - 2.0 * s))
          throw std::invalid_argument(
              "rate query: p <= n / (n - 2 sigma) required");
      }
      const bool a_zero = query.a == 0.0;
      if (!a_zero && query.a != s)
        throw std::invalid_argument(
            "rate query: semilinear rates cover a in {0, sigma}");
      const double k = a_zero ? 0.0 : 1.0;
      if (k == 1.0 && query.j == 1)
        throw std::invalid_argument("rate query: (a, j) = (sigma, 1) excluded");
      return -(n / (2.0 * s)) * (1.0 / query.m - 0.5) - 0.5 * k - query.j;
    }
  }
  throw std::invalid_argument("rate query: unknown kind");
}

double annulus_integral(int n, double alpha, double beta, double c, double t) {
  if (!(alpha > 0.0) || !(c > 0.0) || !(static_cast<double>(n) + beta > 0.0))
    throw std::invalid_argument(
        "annulus_integral: need alpha > 0, c > 0, n + beta > 0");
  // Geometric subdivision of [0, 1] resolves both the rho^{n+beta-1} endpoint
  // and the e^{-c t rho^alpha} boundary layer of width ~ (c t)^{-1/alpha}.
  const auto integrand = [&](double rho) {
    return std::pow(rho, static_cast<double>(n) + beta - 1.0) *
           std::exp(-c * t * std::pow(rho, alpha));
  };
  double total = 0.0;
  double hi = 1.0;
  for (int level = 0; level < 60; ++level) {
    const double lo = hi * 0.5;
    total += gauss_legendre(lo, hi, integrand);
    hi = lo;
    if (hi < 1e-14) break;
  }
  return sphere_area(n) * total;
}

DecayFit appendix_integral_check(int n, double alpha, double beta, double c,
                                 std::span<const double> t_values) {
  std::vector<double> values;
  values.reserve(t_values.size());
  for (double t : t_values)
    values.push_back(annulus_integral(n, alpha, beta, c, t));
  return fit_decay_exponent(t_values, values);
}

std::vector<double> log_spaced(double t_min, double t_max, int count) {
  if (count < 2 || !(t_min > 0.0) || !(t_max > t_min))
    throw std::invalid_argument("log_spaced: invalid window");
  std::vector<double> out(count);
  const double ratio = std::log(t_max / t_min) / (count - 1);
  for (int i = 0; i < count; ++i)
    out[i] = t_min * std::exp(ratio * static_cast<double>(i));
  out.back() = t_max;
  return out;
}

} // namespace sigmalab
