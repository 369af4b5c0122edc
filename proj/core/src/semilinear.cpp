#include "sigmalab/semilinear.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sigmalab/norms.hpp"
#include "sigmalab/propagator.hpp"

namespace sigmalab {

void validate_config(const SemilinearConfig& cfg) {
  if (!(cfg.p > 1.0)) throw std::invalid_argument("semilinear: p must be > 1");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("semilinear: dt must be > 0");
  if (cfg.dt > 0.25)
    throw std::invalid_argument("semilinear: dt must be <= 0.25");
  if (!(cfg.t_end >= 0.0))
    throw std::invalid_argument("semilinear: t_end must be >= 0");
  if (!(cfg.blowup_threshold > 0.0))
    throw std::invalid_argument("semilinear: blowup_threshold must be > 0");
  if (cfg.sigma < 1.0) throw std::invalid_argument("semilinear: sigma >= 1");
  if (cfg.sample_count < 2)
    throw std::invalid_argument("semilinear: sample_count >= 2");
}

Field nonlinearity(const Field& u, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("nonlinearity: p must be > 1");
  Field out;
  out.grid = u.grid;
  out.values.resize(u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i)
    out.values[i] = std::pow(std::abs(u.values[i]), p);
  return out;
}

SpectralField dealias_two_thirds(const SpectralField& c) {
  SpectralField out = c;
  const int n_axis = c.grid.points_per_axis;
  const int keep = n_axis / 3;
  const auto ext = c.grid.extents();
  std::size_t flat = 0;
  for (int i0 = 0; i0 < ext[0]; ++i0) {
    const int k0 = i0 < n_axis / 2 ? i0 : i0 - n_axis;
    for (int i1 = 0; i1 < ext[1]; ++i1) {
      const int k1 = c.grid.dimension > 1 ? (i1 < n_axis / 2 ? i1 : i1 - n_axis) : 0;
      for (int i2 = 0; i2 < ext[2]; ++i2, ++flat) {
        const int k2 =
            c.grid.dimension > 2 ? (i2 < n_axis / 2 ? i2 : i2 - n_axis) : 0;
        if (std::abs(k0) > keep || std::abs(k1) > keep || std::abs(k2) > keep)
          out.coefficients[flat] = 0.0;
      }
    }
  }
  return out;
}

namespace {

// Per-mode multiplier tables for one fixed step size.
struct StepTables {
  std::vector<double> w;        // |xi|^{2 sigma}
  std::vector<double> m0_full, m1_full, expw_full;
  std::vector<double> m0_half, m1_half, q1_half; // predictor over dt/2
  std::vector<double> duh_u, duh_v;              // midpoint Duhamel weights
  std::vector<char> keep;                        // dealias mask (p <= 3)
  bool dealias = false;
};

StepTables build_tables(const SemilinearConfig& cfg) {
  const double dt = cfg.dt;
  StepTables tb;
  const std::size_t total = cfg.grid.total_points();
  tb.w.resize(total);
  tb.m0_full.resize(total);
  tb.m1_full.resize(total);
  tb.expw_full.resize(total);
  tb.m0_half.resize(total);
  tb.m1_half.resize(total);
  tb.q1_half.resize(total);
  tb.duh_u.resize(total);
  tb.duh_v.resize(total);
  const double e_full = std::exp(-dt), e_half = std::exp(-0.5 * dt);
  for_each_mode_magnitude(cfg.grid, [&](std::size_t i, double xi_mag) {
    const double w = std::pow(xi_mag, 2.0 * cfg.sigma);
    tb.w[i] = w;
    const double m1f = detail::m1_symbol(w, dt);
    tb.m1_full[i] = m1f;
    tb.m0_full[i] = e_full + m1f;
    tb.expw_full[i] = std::exp(-w * dt);
    const double m1h = detail::m1_symbol(w, 0.5 * dt);
    tb.m1_half[i] = m1h;
    tb.m0_half[i] = e_half + m1h;
    // integral_0^{dt/2} m1(s) ds by midpoint
    tb.q1_half[i] = 0.5 * dt * detail::m1_symbol(w, 0.25 * dt);
    // integral_0^{dt} m1(dt - s) N(s) ds ~ dt m1(dt/2) N(mid), same for dt m1
    tb.duh_u[i] = dt * m1h;
    tb.duh_v[i] = dt * (std::exp(-w * 0.5 * dt) - m1h);
  });
  tb.dealias = cfg.p <= 3.0;
  if (tb.dealias) {
    tb.keep.assign(total, 1);
    const int n_axis = cfg.grid.points_per_axis;
    const int keep_k = n_axis / 3;
    const auto ext = cfg.grid.extents();
    std::size_t flat = 0;
    for (int i0 = 0; i0 < ext[0]; ++i0) {
      const int k0 = i0 < n_axis / 2 ? i0 : i0 - n_axis;
      for (int i1 = 0; i1 < ext[1]; ++i1) {
        const int k1 =
            cfg.grid.dimension > 1 ? (i1 < n_axis / 2 ? i1 : i1 - n_axis) : 0;
        for (int i2 = 0; i2 < ext[2]; ++i2, ++flat) {
          const int k2 =
              cfg.grid.dimension > 2 ? (i2 < n_axis / 2 ? i2 : i2 - n_axis) : 0;
          if (std::abs(k0) > keep_k || std::abs(k1) > keep_k ||
              std::abs(k2) > keep_k)
            tb.keep[flat] = 0;
        }
      }
    }
  }
  return tb;
}

struct Engine {
  const SemilinearConfig& cfg;
  StepTables tables;
  SpectralField u_hat, v_hat;
  Field u_phys;
  double t = 0.0;

  Engine(const Field& u0, const Field& u1, const SemilinearConfig& config)
      : cfg(config), tables(build_tables(config)) {
    if (!u0.grid.same_layout(cfg.grid) || !u1.grid.same_layout(cfg.grid))
      throw std::invalid_argument("semilinear: data grid differs from config");
    u_hat = to_spectral(u0);
    v_hat = to_spectral(u1);
    u_phys = u0;
  }

  // Sets *linf to max |u| (infinity when non-finite); false once the state
  // violates the blow-up bounds.
  bool state_ok(double* linf) const {
    double m = 0.0;
    bool finite = true;
    for (double v : u_phys.values) {
      if (!std::isfinite(v)) {
        finite = false;
        break;
      }
      m = std::max(m, std::abs(v));
    }
    *linf = finite ? m : std::numeric_limits<double>::infinity();
    return finite && m <= cfg.blowup_threshold;
  }

  SpectralField forcing_spectrum(const Field& u) const {
    Field nl = nonlinearity(u, cfg.p);
    const double coef = cfg.nonlinearity_coefficient;
    for (double& v : nl.values) {
      if (!std::isfinite(v)) throw std::overflow_error("forcing overflow");
      v *= coef;
    }
    SpectralField nh = to_spectral(nl);
    if (tables.dealias)
      for (std::size_t i = 0; i < nh.coefficients.size(); ++i)
        if (!tables.keep[i]) nh.coefficients[i] = 0.0;
    return nh;
  }

  void step() {
    const bool with_forcing = cfg.nonlinearity_coefficient != 0.0;
    SpectralField mid;
    mid.grid = cfg.grid;
    mid.coefficients.resize(u_hat.coefficients.size());

    if (with_forcing) {
      const SpectralField n0 = forcing_spectrum(u_phys);
      for (std::size_t i = 0; i < mid.coefficients.size(); ++i)
        mid.coefficients[i] = tables.m0_half[i] * u_hat.coefficients[i] +
                              tables.m1_half[i] * v_hat.coefficients[i] +
                              tables.q1_half[i] * n0.coefficients[i];
      const Field u_mid = to_physical(mid);
      const SpectralField n_mid = forcing_spectrum(u_mid);
      for (std::size_t i = 0; i < mid.coefficients.size(); ++i) {
        const auto u_old = u_hat.coefficients[i];
        const auto v_old = v_hat.coefficients[i];
        u_hat.coefficients[i] = tables.m0_full[i] * u_old +
                                tables.m1_full[i] * v_old +
                                tables.duh_u[i] * n_mid.coefficients[i];
        v_hat.coefficients[i] =
            -tables.w[i] * tables.m1_full[i] * u_old +
            (tables.expw_full[i] - tables.m1_full[i]) * v_old +
            tables.duh_v[i] * n_mid.coefficients[i];
      }
    } else {
      for (std::size_t i = 0; i < u_hat.coefficients.size(); ++i) {
        const auto u_old = u_hat.coefficients[i];
        const auto v_old = v_hat.coefficients[i];
        u_hat.coefficients[i] =
            tables.m0_full[i] * u_old + tables.m1_full[i] * v_old;
        v_hat.coefficients[i] =
            -tables.w[i] * tables.m1_full[i] * u_old +
            (tables.expw_full[i] - tables.m1_full[i]) * v_old;
      }
    }
    u_phys = to_physical(u_hat);
    t += cfg.dt;
  }

  double lp_mass() const {
    const double cell = std::pow(cfg.grid.spacing, cfg.grid.dimension);
    double sum = 0.0;
    for (double v : u_phys.values) sum += std::pow(std::abs(v), cfg.p);
    return sum * cell;
  }
};

} // namespace

std::pair<Field, Field> duhamel_step(const Field& u_now, const Field& udot_now,
                                     const SemilinearConfig& cfg) {
  validate_config(cfg);
  Engine engine(u_now, udot_now, cfg);
  double linf = 0.0;
  if (!engine.state_ok(&linf))
    throw std::invalid_argument("duhamel_step: state exceeds blow-up bounds");
  engine.step();
  return {engine.u_phys, to_physical(engine.v_hat)};
}

double first_crossing_time(const SolutionLog& log, double threshold) {
  for (std::size_t i = 0; i < log.times.size(); ++i)
    if (!(log.linf_norms[i] <= threshold) || !std::isfinite(log.linf_norms[i]))
      return log.times[i];
  return -1.0;
}

SolutionLog run_semilinear(const Field& u0, const Field& u1,
                           const SemilinearConfig& cfg,
                           std::span<StepObserver* const> observers) {
  validate_config(cfg);
  Engine engine(u0, u1, cfg);

  SolutionLog log;
  std::vector<double> targets;
  if (!cfg.dense_sampling && cfg.t_end > cfg.dt)
    targets = log_spaced(std::max(cfg.dt, cfg.t_end / 256.0), cfg.t_end,
                         cfg.sample_count);
  std::size_t next_target = 0;

  double cumulative = 0.0;
  double prev_mass = 0.0;
  bool have_prev_mass = false;

  const auto record = [&](double linf) {
    log.times.push_back(engine.t);
    log.l2_norms.push_back(l2_norm_from_spectrum(engine.u_hat));
    log.linf_norms.push_back(linf);
    log.lp_mass.push_back(engine.lp_mass());
    log.cumulative_mass.push_back(cumulative);
  };

  const long total_steps = std::lround(std::ceil(cfg.t_end / cfg.dt - 1e-12));
  for (long step = 0;; ++step) {
    double linf = 0.0;
    if (!engine.state_ok(&linf)) {
      log.blown_up = true;
      log.blowup_time = engine.t;
      log.times.push_back(engine.t);
      log.l2_norms.push_back(std::isfinite(linf)
                                 ? l2_norm_from_spectrum(engine.u_hat)
                                 : std::numeric_limits<double>::quiet_NaN());
      log.linf_norms.push_back(linf);
      log.lp_mass.push_back(std::isfinite(linf)
                                ? engine.lp_mass()
                                : std::numeric_limits<double>::quiet_NaN());
      log.cumulative_mass.push_back(cumulative);
      break;
    }

    // Trapezoid accumulation of the forcing mass actually applied.
    const double mass_now = engine.lp_mass() * cfg.nonlinearity_coefficient;
    if (have_prev_mass) cumulative += 0.5 * cfg.dt * (prev_mass + mass_now);
    prev_mass = mass_now;
    have_prev_mass = true;

    const bool sample_due =
        cfg.dense_sampling || step == 0 || step == total_steps ||
        (next_target < targets.size() &&
         engine.t >= targets[next_target] - 1e-9 * cfg.t_end);
    if (sample_due) {
      record(linf);
      while (next_target < targets.size() &&
             engine.t >= targets[next_target] - 1e-9 * cfg.t_end)
        ++next_target;
    }
    for (StepObserver* obs : observers)
      obs->observe(engine.t, engine.u_phys, engine.u_hat, engine.v_hat);

    if (step == total_steps) break;
    try {
      engine.step();
    } catch (const std::overflow_error&) {
      log.blown_up = true;
      log.blowup_time = engine.t;
      break;
    }
  }
  return log;
}

double profile_deviation(const SpectralState& state, double m_estimate,
                         double sigma, int j, int k) {
  if (j < 0 || j > 1 || k < 0 || k > 1)
    throw std::invalid_argument("profile_deviation: j, k must be 0 or 1");
  if (j == 1 && k == 1)
    throw std::invalid_argument("profile_deviation: (j, k) = (1, 1) excluded");
  const SpectralField& base = j == 0 ? state.u_hat : state.udot_hat;
  const double t = state.t;

  double sum = 0.0;
  for_each_mode_magnitude(base.grid, [&](std::size_t i, double xi_mag) {
    const double w = std::pow(xi_mag, 2.0 * sigma);
    const double g_symbol = (j == 0 ? 1.0 : -w) * std::exp(-t * w);
    const double amp = k == 0 ? 1.0 : std::pow(xi_mag, sigma);
    const std::complex<double> diff =
        amp * (base.coefficients[i] - m_estimate * g_symbol);
    sum += std::norm(diff);
  });
  const double dxi = 2.0 * std::numbers::pi / base.grid.box_length;
  return std::sqrt(sum * std::pow(dxi, base.grid.dimension)) /
         std::pow(2.0 * std::numbers::pi, 0.5 * base.grid.dimension);
}

SnapshotObserver::SnapshotObserver(std::vector<double> target_times)
    : targets_(std::move(target_times)) {
  std::sort(targets_.begin(), targets_.end());
}

void SnapshotObserver::observe(double t, const Field&,
                               const SpectralField& u_hat,
                               const SpectralField& udot_hat) {
  if (next_ < targets_.size() && t >= targets_[next_] - 1e-9) {
    snapshots_.push_back({t, u_hat, udot_hat});
    while (next_ < targets_.size() && t >= targets_[next_] - 1e-9) ++next_;
  }
}

NormTraceObserver::NormTraceObserver(std::vector<double> target_times, int j,
                                     double a)
    : targets_(std::move(target_times)), j_(j), a_(a) {
  std::sort(targets_.begin(), targets_.end());
}

void NormTraceObserver::observe(double t, const Field&,
                                const SpectralField& u_hat,
                                const SpectralField& udot_hat) {
  if (next_ >= targets_.size() || t < targets_[next_] - 1e-9) return;
  const SpectralField& base = j_ == 0 ? u_hat : udot_hat;
  double sum = 0.0;
  for_each_mode_magnitude(base.grid, [&](std::size_t i, double xi_mag) {
    const double amp = a_ == 0.0 ? 1.0 : std::pow(xi_mag, a_);
    sum += amp * amp * std::norm(base.coefficients[i]);
  });
  const double dxi = 2.0 * std::numbers::pi / base.grid.box_length;
  const double value =
      std::sqrt(sum * std::pow(dxi, base.grid.dimension)) /
      std::pow(2.0 * std::numbers::pi, 0.5 * base.grid.dimension);
  times_.push_back(t);
  values_.push_back(value);
  while (next_ < targets_.size() && t >= targets_[next_] - 1e-9) ++next_;
}

LifespanReport lifespan_probe(const Field& u1_shape,
                              const SemilinearConfig& config_template,
                              std::span<const double> epsilons, double t_cap,
                              std::vector<SolutionLog>* logs) {
  validate_config(config_template);
  const int n = config_template.grid.dimension;
  if (!(config_template.p > 1.0) ||
      !(config_template.p < critical_exponent(n, config_template.sigma)))
    throw std::invalid_argument(
        "lifespan_probe: requires strictly subcritical 1 < p < 1 + 2 sigma / n");
  if (epsilons.size() < 4)
    throw std::invalid_argument("lifespan_probe: need >= 4 epsilons");
  const auto [mn, mx] = std::minmax_element(epsilons.begin(), epsilons.end());
  if (!(*mn > 0.0) || *mx / *mn < 8.0)
    throw std::invalid_argument(
        "lifespan_probe: epsilons must be positive spanning a factor >= 8");
  double integral = 0.0, min_value = 0.0;
  for (double v : u1_shape.values) {
    integral += v;
    min_value = std::min(min_value, v);
  }
  if (min_value < 0.0 || !(integral > 0.0))
    throw std::invalid_argument(
        "lifespan_probe: u1_shape must be non-negative with positive integral");

  LifespanReport report;
  report.predicted_exponent =
      lifespan_exponent(n, config_template.sigma, config_template.p);

  const Field u0 = zero_field(config_template.grid);
  for (double eps : epsilons) {
    Field u1 = u1_shape;
    for (double& v : u1.values) v *= eps;

    SemilinearConfig cfg = config_template;
    cfg.t_end = t_cap;
    cfg.epsilon = eps;
    cfg.dense_sampling = true;
    const SolutionLog log = run_semilinear(u0, u1, cfg);

    report.epsilons.push_back(eps);
    report.censored.push_back(!log.blown_up);
    report.lifespans.push_back(log.blown_up ? log.blowup_time : -1.0);
    if (logs) logs->push_back(log);
  }

  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < report.epsilons.size(); ++i)
    if (!report.censored[i] && report.lifespans[i] > 0.0)
      points.emplace_back(report.epsilons[i], report.lifespans[i]);
  std::sort(points.begin(), points.end());
  if (points.size() >= 4) {
    std::vector<double> xs, ys;
    for (const auto& [e, t] : points) {
      xs.push_back(e);
      ys.push_back(t);
    }
    const DecayFit fit = loglog_fit(xs, ys, 4);
    report.fitted_exponent = -fit.slope;
    report.fit_valid = true;
  }
  return report;
}

double bump_profile(double s) {
  const double r = std::abs(s);
  if (r <= 0.5) return 1.0;
  if (r >= 1.0) return 0.0;
  const double c = std::cos(std::numbers::pi * (r - 0.5));
  return c * c;
}

TestFunctionalAccumulator::TestFunctionalAccumulator(const GridSpec& grid,
                                                     double radius,
                                                     double sigma, double p)
    : radius_(radius), sigma_(sigma), p_(p) {
  if (!(radius > 0.0))
    throw std::invalid_argument("test functional: radius must be positive");
  cell_ = std::pow(grid.spacing, grid.dimension);
  for_each_point(grid, [&](std::size_t i, const std::array<double, 3>& x) {
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    const double phi = bump_profile(r / radius);
    if (phi > 0.0) support_.emplace_back(i, phi);
  });
}

void TestFunctionalAccumulator::observe(double t, const Field& u,
                                        const SpectralField&,
                                        const SpectralField&) {
  const double horizon = std::pow(radius_, 2.0 * sigma_);
  double g = 0.0;
  const double eta = bump_profile(t / horizon);
  if (eta > 0.0) {
    double sum = 0.0;
    for (const auto& [idx, phi] : support_)
      sum += std::pow(std::abs(u.values[idx]), p_) * phi;
    g = eta * sum * cell_;
  }
  if (prev_t_ >= 0.0) integral_ += 0.5 * (t - prev_t_) * (prev_g_ + g);
  prev_t_ = t;
  prev_g_ = g;
}

double test_functional(const Field& u0, const Field& u1,
                       const SemilinearConfig& cfg, double radius) {
  const double horizon = std::pow(radius, 2.0 * cfg.sigma);
  if (cfg.t_end < horizon)
    throw std::invalid_argument(
        "test_functional: trajectory must cover [0, R^{2 sigma}]");
  TestFunctionalAccumulator acc(cfg.grid, radius, cfg.sigma, cfg.p);
  StepObserver* obs[] = {&acc};
  run_semilinear(u0, u1, cfg, obs);
  return acc.value();
}

} // namespace sigmalab
