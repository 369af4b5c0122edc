//==============================================================================
// grid.hpp
// Discrete periodic box approximating R^n (n = 1, 2, 3) with forward/inverse
// Fourier transforms matching the continuous convention
//     c(k) = sum_x f(x) e^{-i xi_k . x} h^n        (so c(0) ~ integral of f)
//     f(x) = (1/L^n) sum_k c(k) e^{+i xi_k . x}
// on the centered box [-L/2, L/2)^n with xi_k = 2 pi k / L.
//==============================================================================
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace sigmalab {

struct GridSpec {
  int dimension = 1;       // n in {1,2,3}
  int points_per_axis = 8; // N, power of two, >= 8
  double box_length = 1.0; // L; box is [-L/2, L/2)^n
  double spacing = 0.125;  // L/N (exact: N is a power of two)

  std::size_t total_points() const;

  // Lattice frequency for storage index i on one axis (FFT layout:
  // i -> k = i for i < N/2, k = i - N otherwise), xi_k = 2 pi k / L.
  double frequency(int index) const;
  // Centered coordinate x_i = -L/2 + i * spacing.
  double coordinate(int index) const;
  // Axis extents as used by flat row-major indexing (unused axes are 1).
  std::array<int, 3> extents() const;

  bool same_layout(const GridSpec& other) const;
};

// Validates n in {1,2,3}, N a power of two >= 8, L > 0.
GridSpec make_grid(int dimension, int points_per_axis, double box_length);

// Real-space grid function.
struct Field {
  GridSpec grid;
  std::vector<double> values; // row-major, size N^n
};

// Frequency-space counterpart; coefficients follow the per-axis FFT layout.
struct SpectralField {
  GridSpec grid;
  std::vector<std::complex<double>> coefficients;

  std::complex<double> zero_mode() const { return coefficients.at(0); }
};

// Forward transform (Riemann approximation of the Fourier integral).
// Throws std::invalid_argument on non-finite input.
SpectralField to_spectral(const Field& f);

// Inverse transform. Throws std::runtime_error when the imaginary residue of
// the inverse exceeds 1e-8 of the field scale (broken conjugate symmetry).
Field to_physical(const SpectralField& c);

// Evaluates fn on every grid point; unused coordinates are passed as 0.
Field make_field(const GridSpec& grid,
                 const std::function<double(double, double, double)>& fn);

Field zero_field(const GridSpec& grid);

// sum f h^n, the discrete integral over the box.
double field_integral(const Field& f);

// Visits every lattice site: fn(flat_index, xi) with xi the frequency vector.
template <typename F>
void for_each_mode(const GridSpec& g, F&& fn) {
  const auto ext = g.extents();
  std::array<double, 3> xi{0.0, 0.0, 0.0};
  std::size_t flat = 0;
  for (int i0 = 0; i0 < ext[0]; ++i0) {
    xi[0] = g.frequency(i0);
    for (int i1 = 0; i1 < ext[1]; ++i1) {
      xi[1] = g.dimension > 1 ? g.frequency(i1) : 0.0;
      for (int i2 = 0; i2 < ext[2]; ++i2) {
        xi[2] = g.dimension > 2 ? g.frequency(i2) : 0.0;
        fn(flat++, xi);
      }
    }
  }
}

// Same visitation with the frequency magnitude |xi| precomputed.
template <typename F>
void for_each_mode_magnitude(const GridSpec& g, F&& fn) {
  for_each_mode(g, [&](std::size_t flat, const std::array<double, 3>& xi) {
    const double mag =
        std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    fn(flat, mag);
  });
}

// Visits every grid point: fn(flat_index, x) with x the centered coordinates.
template <typename F>
void for_each_point(const GridSpec& g, F&& fn) {
  const auto ext = g.extents();
  std::array<double, 3> x{0.0, 0.0, 0.0};
  std::size_t flat = 0;
  for (int i0 = 0; i0 < ext[0]; ++i0) {
    x[0] = g.coordinate(i0);
    for (int i1 = 0; i1 < ext[1]; ++i1) {
      x[1] = g.dimension > 1 ? g.coordinate(i1) : 0.0;
      for (int i2 = 0; i2 < ext[2]; ++i2) {
        x[2] = g.dimension > 2 ? g.coordinate(i2) : 0.0;
        fn(flat++, x);
      }
    }
  }
}

} // namespace sigmalab
