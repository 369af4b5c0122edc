#include "sigmalab/grid.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace sigmalab {

namespace {

// FFTW's planner is not thread-safe; executions on distinct plans are.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanEntry {
  fftw_complex* buffer = nullptr;
  fftw_plan forward = nullptr;  // e^{-i 2 pi j m / N} convention
  fftw_plan backward = nullptr; // e^{+i 2 pi j m / N}
  std::size_t size = 0;

  ~PlanEntry() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    if (buffer) fftw_free(buffer);
  }
};

// One in-place c2c plan pair per (dimension, N), cached per thread so
// independent fields can transform concurrently.
PlanEntry& plans_for(const GridSpec& g) {
  thread_local std::map<std::pair<int, int>, PlanEntry> cache;
  auto key = std::make_pair(g.dimension, g.points_per_axis);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  PlanEntry& entry = cache[key];
  entry.size = g.total_points();
  entry.buffer = fftw_alloc_complex(entry.size);
  if (!entry.buffer) throw std::bad_alloc();

  int dims[3] = {g.points_per_axis, g.points_per_axis, g.points_per_axis};
  std::lock_guard<std::mutex> lock(planner_mutex());
  entry.forward = fftw_plan_dft(g.dimension, dims, entry.buffer, entry.buffer,
                                FFTW_FORWARD, FFTW_ESTIMATE);
  entry.backward = fftw_plan_dft(g.dimension, dims, entry.buffer, entry.buffer,
                                 FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!entry.forward || !entry.backward)
    throw std::runtime_error("FFTW plan creation failed");
  return entry;
}

// Parity of i0+i1+i2 for flat row-major index; equals parity of k0+k1+k2
// because N is even, so (-1)^{sum k} = (-1)^{sum i}. This phase realizes the
// half-box shift x in [-L/2, L/2) relative to FFTW's x in [0, L).
int index_parity(const GridSpec& g, std::size_t flat) {
  const auto ext = g.extents();
  int sum = 0;
  std::size_t rest = flat;
  for (int axis = g.dimension - 1; axis >= 0; --axis) {
    sum += static_cast<int>(rest % static_cast<std::size_t>(ext[axis]));
    rest /= static_cast<std::size_t>(ext[axis]);
  }
  return sum & 1;
}

} // namespace

std::size_t GridSpec::total_points() const {
  std::size_t total = 1;
  for (int d = 0; d < dimension; ++d)
    total *= static_cast<std::size_t>(points_per_axis);
  return total;
}

double GridSpec::frequency(int index) const {
  const int n = points_per_axis;
  const int k = index < n / 2 ? index : index - n;
  return 2.0 * std::numbers::pi * static_cast<double>(k) / box_length;
}

double GridSpec::coordinate(int index) const {
  return -0.5 * box_length + spacing * static_cast<double>(index);
}

std::array<int, 3> GridSpec::extents() const {
  return {points_per_axis, dimension > 1 ? points_per_axis : 1,
          dimension > 2 ? points_per_axis : 1};
}

bool GridSpec::same_layout(const GridSpec& other) const {
  return dimension == other.dimension &&
         points_per_axis == other.points_per_axis &&
         box_length == other.box_length;
}

GridSpec make_grid(int dimension, int points_per_axis, double box_length) {
  if (dimension < 1 || dimension > 3)
    throw std::invalid_argument("grid dimension must be 1, 2, or 3");
  if (points_per_axis < 8 ||
      !std::has_single_bit(static_cast<unsigned>(points_per_axis)))
    throw std::invalid_argument(
        "points_per_axis must be a power of two >= 8");
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    throw std::invalid_argument("box_length must be positive and finite");
  GridSpec g;
  g.dimension = dimension;
  g.points_per_axis = points_per_axis;
  g.box_length = box_length;
  g.spacing = box_length / static_cast<double>(points_per_axis);
  return g;
}

SpectralField to_spectral(const Field& f) {
  const GridSpec& g = f.grid;
  if (f.values.size() != g.total_points())
    throw std::invalid_argument("field size does not match its grid");
  for (double v : f.values)
    if (!std::isfinite(v))
      throw std::invalid_argument("to_spectral: non-finite field value");

  PlanEntry& plan = plans_for(g);
  for (std::size_t i = 0; i < plan.size; ++i) {
    plan.buffer[i][0] = f.values[i];
    plan.buffer[i][1] = 0.0;
  }
  fftw_execute(plan.forward);

  const double scale = std::pow(g.spacing, g.dimension);
  SpectralField out;
  out.grid = g;
  out.coefficients.resize(plan.size);
  for (std::size_t i = 0; i < plan.size; ++i) {
    const double sign = index_parity(g, i) ? -scale : scale;
    out.coefficients[i] =
        std::complex<double>(sign * plan.buffer[i][0], sign * plan.buffer[i][1]);
  }
  return out;
}

Field to_physical(const SpectralField& c) {
  const GridSpec& g = c.grid;
  if (c.coefficients.size() != g.total_points())
    throw std::invalid_argument("spectral field size does not match its grid");

  PlanEntry& plan = plans_for(g);
  const double inv_volume = 1.0 / std::pow(g.box_length, g.dimension);
  for (std::size_t i = 0; i < plan.size; ++i) {
    const double sign = index_parity(g, i) ? -inv_volume : inv_volume;
    plan.buffer[i][0] = sign * c.coefficients[i].real();
    plan.buffer[i][1] = sign * c.coefficients[i].imag();
  }
  fftw_execute(plan.backward);

  double max_im = 0.0, max_abs = 0.0;
  for (std::size_t i = 0; i < plan.size; ++i) {
    max_im = std::max(max_im, std::abs(plan.buffer[i][1]));
    max_abs = std::max(max_abs, std::hypot(plan.buffer[i][0], plan.buffer[i][1]));
  }
  if (max_im > 1e-8 * max_abs && max_abs > 0.0)
    throw std::runtime_error(
        "to_physical: imaginary residue exceeds 1e-8 of the field scale "
        "(input is not conjugate-symmetric)");

  Field out;
  out.grid = g;
  out.values.resize(plan.size);
  for (std::size_t i = 0; i < plan.size; ++i) out.values[i] = plan.buffer[i][0];
  return out;
}

Field make_field(const GridSpec& grid,
                 const std::function<double(double, double, double)>& fn) {
  Field f;
  f.grid = grid;
  f.values.resize(grid.total_points());
  for_each_point(grid, [&](std::size_t flat, const std::array<double, 3>& x) {
    f.values[flat] = fn(x[0], x[1], x[2]);
  });
  return f;
}

Field zero_field(const GridSpec& grid) {
  Field f;
  f.grid = grid;
  f.values.assign(grid.total_points(), 0.0);
  return f;
}

double field_integral(const Field& f) {
  double sum = 0.0;
  for (double v : f.values) sum += v;
  return sum * std::pow(f.grid.spacing, f.grid.dimension);
}

} // namespace sigmalab
