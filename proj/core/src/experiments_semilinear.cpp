// Semilinear experiments: global-decay run, lifespan scaling, the space-time
// test functional, and the appendix quadrature check.
#include "experiment_util.hpp"
#include "sigmalab/diffusion.hpp"
#include "sigmalab/propagator.hpp"
#include "sigmalab/semilinear.hpp"

namespace sigmalab::detail {

ReportBundle exp_semilinear_decay(const ExperimentSpec& spec) {
  const Params& P = spec.parameters;
  const int n = get_int(P, "n", 1);
  const double sigma = get_double(P, "sigma", 1.0);
  const double p = get_double(P, "p", 4.0);
  const double eps = get_double(P, "eps", 1e-2);
  const int N = get_int(P, "N", 1024);
  const double L = get_double(P, "L", 400.0);
  const double dt = get_double(P, "dt", 0.05);
  const double t_end = get_double(P, "t_end", 200.0);
  const double fit_t_min = get_double(P, "t_min", 5.0);
  const int samples = get_int(P, "samples", 24);
  const double tol = get_double(P, "tol", 0.12);
  const double dev_t_min = get_double(P, "dev_t_min", 50.0);
  const int dev_samples = get_int(P, "dev_samples", 8);
  const double tail_bound = get_double(P, "mass_tail", 1e-6);

  const auto dir = ensure_output_dir(spec);
  ReportBundle bundle;
  bundle.experiment = spec.name;

  SemilinearConfig cfg;
  cfg.sigma = sigma;
  cfg.p = p;
  cfg.grid = make_grid(n, N, L);
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.epsilon = eps;
  cfg.sample_count = 96;

  const Field u0 = gaussian_field(cfg.grid, eps, {0, 0, 0});
  const Field u1 = gaussian_field(cfg.grid, eps, {1, 0, 0});
  const double p0 = field_integral(u0);
  const double p1 = field_integral(u1);

  const std::vector<double> fit_times = log_spaced(fit_t_min, t_end, samples);
  NormTraceObserver trace_l2(fit_times, 0, 0.0);
  NormTraceObserver trace_ds(fit_times, 0, sigma);
  NormTraceObserver trace_ut(fit_times, 1, 0.0);
  SnapshotObserver snapshots(log_spaced(dev_t_min, t_end, dev_samples));
  StepObserver* observers[] = {&trace_l2, &trace_ds, &trace_ut, &snapshots};

  const SolutionLog log = run_semilinear(u0, u1, cfg, observers);

  ClaimResult global;
  global.name = "global_existence";
  global.statement = "small supercritical data stay bounded to t_end";
  global.measured = log.blown_up ? 1.0 : 0.0;
  global.predicted = 0.0;
  global.tolerance = 0.0;
  global.pass = !log.blown_up;
  bundle.claims.push_back(global);

  const struct {
    const NormTraceObserver* trace;
    double a;
    int j;
    const char* tag;
  } fits[] = {{&trace_l2, 0.0, 0, "l2"},
              {&trace_ds, sigma, 0, "dsigma"},
              {&trace_ut, 0.0, 1, "ut"}};
  for (const auto& f : fits) {
    const double predicted = predicted_exponent(
        {RateKind::semilinear, n, sigma, 1.0, f.a, f.j, 0.0, p, 2.0});
    if (f.trace->values().empty() || log.blown_up) {
      bundle.claims.push_back(slope_claim(
          std::string("slope_") + f.tag, "semilinear energy decay rate",
          std::numeric_limits<double>::quiet_NaN(), predicted, tol));
      bundle.claims.back().pass = false;
      continue;
    }
    const DecayFit fit =
        fit_decay_exponent(f.trace->times(), f.trace->values());
    bundle.claims.push_back(slope_claim(std::string("slope_") + f.tag,
                                        "semilinear energy decay rate",
                                        fit.slope, predicted, tol));
  }

  // Nonlinear-mass convergence: the cumulative forcing mass must be Cauchy.
  double cum_half = 0.0;
  const double cum_end =
      log.cumulative_mass.empty() ? 0.0 : log.cumulative_mass.back();
  for (std::size_t i = 0; i < log.times.size(); ++i)
    if (log.times[i] <= 0.5 * t_end) cum_half = log.cumulative_mass[i];
  bundle.claims.push_back(bound_claim(
      "mass_cauchy_tail",
      "cumulative nonlinear mass tail over [t_end/2, t_end]",
      cum_end - cum_half, tail_bound));

  // Deviation from the nonlinear profile M G_sigma with
  // M = P0 + P1 + total nonlinear mass (tail beyond t_end bounded above).
  const double m_estimate = p0 + p1 + cum_end;
  std::vector<double> dev_times, dev00, dev01, res00, res01;
  for (const SpectralState& st : snapshots.snapshots()) {
    dev_times.push_back(st.t);
    dev00.push_back(profile_deviation(st, m_estimate, sigma, 0, 0));
    dev01.push_back(profile_deviation(st, m_estimate, sigma, 0, 1));
    res00.push_back(std::pow(st.t, n / (4.0 * sigma)) * dev00.back());
    res01.push_back(std::pow(st.t, n / (4.0 * sigma) + 0.5) * dev01.back());
  }
  const bool enough_snapshots = res00.size() >= 3;
  bundle.claims.push_back(bound_claim(
      "dev00_decreasing",
      "rescaled t^{n/4s} || u - M G_s ||_{L2} decreases on the tail window",
      enough_snapshots ? max_consecutive_ratio(res00)
                       : std::numeric_limits<double>::infinity(),
      1.0 - 1e-12));
  bundle.claims.push_back(bound_claim(
      "dev01_decreasing",
      "rescaled t^{n/4s+1/2} || |D|^s (u - M G_s) ||_{L2} decreases",
      enough_snapshots ? max_consecutive_ratio(res01)
                       : std::numeric_limits<double>::infinity(),
      1.0 - 1e-12));

  {
    const auto path = dir / "solution_log.csv";
    CsvWriter csv(path, {"t", "l2", "linf", "lp_mass", "cum_mass"});
    for (std::size_t i = 0; i < log.times.size(); ++i)
      csv.row({log.times[i], log.l2_norms[i], log.linf_norms[i],
               log.lp_mass[i], log.cumulative_mass[i]});
    bundle.artifacts.push_back(path);
  }
  {
    const auto path = dir / "traces.csv";
    CsvWriter csv(path, {"t", "l2", "dsigma", "ut"});
    for (std::size_t i = 0; i < trace_l2.times().size(); ++i)
      csv.row({trace_l2.times()[i], trace_l2.values()[i],
               trace_ds.values()[i], trace_ut.values()[i]});
    bundle.artifacts.push_back(path);
  }
  {
    const auto path = dir / "deviation.csv";
    CsvWriter csv(path, {"t", "dev00", "rescaled00", "dev01", "rescaled01"});
    for (std::size_t i = 0; i < dev_times.size(); ++i)
      csv.row({dev_times[i], dev00[i], res00[i], dev01[i], res01[i]});
    bundle.artifacts.push_back(path);
  }

  SvgLogLogPlot plot("semilinear decay", "t", "L2 norm");
  plot.add_series("l2", trace_l2.times(), trace_l2.values());
  plot.add_series("dsigma", trace_ds.times(), trace_ds.values());
  plot.add_series("ut", trace_ut.times(), trace_ut.values());
  if (!trace_l2.values().empty()) {
    plot.add_guide("slope -n/4s", -n / (4.0 * sigma), trace_l2.times()[0],
                   trace_l2.values()[0]);
  }
  plot.write(dir / "semilinear.svg");
  bundle.artifacts.push_back(dir / "semilinear.svg");
  write_summary(bundle, dir);
  return bundle;
}

ReportBundle exp_lifespan(const ExperimentSpec& spec) {
  const Params& P = spec.parameters;
  const int n = get_int(P, "n", 1);
  const double sigma = get_double(P, "sigma", 1.0);
  const double p = get_double(P, "p", 2.0);
  // The lifespan law is asymptotic in the data mass; the shape amplitude
  // places the pinned epsilon ladder inside that regime while keeping the
  // longest run clear of box wrap-around.
  const double shape_amp = get_double(P, "shape_amp", 0.5);
  const int N = get_int(P, "N", 1024);
  const double L = get_double(P, "L", 400.0);
  const double dt = get_double(P, "dt", 0.02);
  const std::vector<double> epsilons =
      get_list(P, "epsilons", "0.5,0.25,0.125,0.0625");
  const double t_cap = get_double(P, "t_cap", 3000.0);
  const double tol_rel = get_double(P, "tol_rel", 0.25);
  const double sens_tol = get_double(P, "sens_tol", 0.05);

  if (!(p > 1.0) || !(p < critical_exponent(n, sigma)))
    throw UsageError("lifespan: p must satisfy 1 < p < 1 + 2 sigma / n");
  if (epsilons.size() < 4)
    throw UsageError("lifespan: need >= 4 epsilon values");
  const auto [eps_min, eps_max] =
      std::minmax_element(epsilons.begin(), epsilons.end());
  if (!(*eps_min > 0.0) || *eps_max / *eps_min < 8.0)
    throw UsageError(
        "lifespan: epsilons must be positive spanning a factor >= 8");

  const auto dir = ensure_output_dir(spec);
  ReportBundle bundle;
  bundle.experiment = spec.name;

  SemilinearConfig cfg;
  cfg.sigma = sigma;
  cfg.p = p;
  cfg.grid = make_grid(n, N, L);
  cfg.dt = dt;
  // Run to the widest threshold; smaller thresholds come from the dense log.
  cfg.blowup_threshold = 1e8;
  cfg.dense_sampling = true;

  const Field shape = gaussian_field(cfg.grid, shape_amp, {0, 0, 0});
  std::vector<SolutionLog> logs;
  const LifespanReport report =
      lifespan_probe(shape, cfg, epsilons, t_cap, &logs);

  // T_eps at each detection threshold, extracted from the sup-norm traces.
  const double thresholds[] = {1e4, 1e6, 1e8};
  std::map<double, std::vector<double>> crossing;
  for (double th : thresholds) {
    for (const SolutionLog& log : logs)
      crossing[th].push_back(first_crossing_time(log, th));
  }

  const auto fit_exponent = [&](const std::vector<double>& ts) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < epsilons.size(); ++i)
      if (ts[i] > 0.0) pts.emplace_back(epsilons[i], ts[i]);
    std::sort(pts.begin(), pts.end());
    if (pts.size() < 4) return std::numeric_limits<double>::quiet_NaN();
    std::vector<double> xs, ys;
    for (auto& [e, t] : pts) {
      xs.push_back(e);
      ys.push_back(t);
    }
    return -loglog_fit(xs, ys, 4).slope;
  };

  const double kappa_lo = fit_exponent(crossing[1e4]);
  const double kappa_mid = fit_exponent(crossing[1e6]);
  const double kappa_hi = fit_exponent(crossing[1e8]);
  const double predicted = lifespan_exponent(n, sigma, p);

  ClaimResult all_blow;
  all_blow.name = "all_blow_up";
  all_blow.statement = "every probe run blows up before the time cap";
  all_blow.measured = static_cast<double>(
      std::count(report.censored.begin(), report.censored.end(), true));
  all_blow.predicted = 0.0;
  all_blow.tolerance = 0.0;
  all_blow.pass = all_blow.measured == 0.0;
  bundle.claims.push_back(all_blow);

  ClaimResult kappa;
  kappa.name = "lifespan_exponent";
  kappa.statement = "fitted lifespan exponent matches the lifespan bound";
  kappa.measured = kappa_mid;
  kappa.predicted = predicted;
  kappa.tolerance = tol_rel * predicted;
  kappa.pass = std::isfinite(kappa_mid) &&
               std::abs(kappa_mid - predicted) <= kappa.tolerance;
  bundle.claims.push_back(kappa);

  ClaimResult sens;
  sens.name = "threshold_sensitivity";
  sens.statement =
      "fitted exponent shift between thresholds 1e4 and 1e8 stays below 5%";
  sens.measured = std::isfinite(kappa_lo) && std::isfinite(kappa_hi) &&
                          std::isfinite(kappa_mid)
                      ? std::abs(kappa_hi - kappa_lo) / kappa_mid
                      : std::numeric_limits<double>::quiet_NaN();
  sens.predicted = sens_tol;
  sens.tolerance = 0.0;
  sens.pass = std::isfinite(sens.measured) && sens.measured < sens_tol;
  bundle.claims.push_back(sens);

  // Monotonicity on the fitted subset: T non-increasing as eps grows.
  double worst_monotone = 0.0;
  {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < epsilons.size(); ++i)
      if (crossing[1e6][i] > 0.0)
        pts.emplace_back(epsilons[i], crossing[1e6][i]);
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      worst_monotone =
          std::max(worst_monotone, pts[i + 1].second / pts[i].second);
  }
  bundle.claims.push_back(
      bound_claim("monotone_in_eps",
                  "blow-up time non-increasing in eps on the fitted subset",
                  worst_monotone, 1.0 + 1e-12));

  const auto csv_path = dir / "lifespan.csv";
  CsvWriter csv(csv_path, {"epsilon", "T", "censored", "T_1e4", "T_1e8"});
  for (std::size_t i = 0; i < epsilons.size(); ++i)
    csv.row({epsilons[i], crossing[1e6][i], report.censored[i] ? 1.0 : 0.0,
             crossing[1e4][i], crossing[1e8][i]});
  bundle.artifacts.push_back(csv_path);

  SvgLogLogPlot plot("lifespan scaling", "epsilon", "T_eps");
  {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < epsilons.size(); ++i)
      if (crossing[1e6][i] > 0.0) {
        xs.push_back(epsilons[i]);
        ys.push_back(crossing[1e6][i]);
      }
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end(), std::greater<>());
    plot.add_series("T_eps", xs, ys);
    if (!xs.empty())
      plot.add_guide("slope -kappa", -predicted, xs[0], ys[0]);
  }
  plot.write(dir / "lifespan.svg");
  bundle.artifacts.push_back(dir / "lifespan.svg");
  write_summary(bundle, dir);
  return bundle;
}

ReportBundle exp_test_functional(const ExperimentSpec& spec) {
  const Params& P = spec.parameters;
  const int n = get_int(P, "n", 1);
  const double sigma = get_double(P, "sigma", 1.0);
  const double p = get_double(P, "p", 2.9);
  const double eps = get_double(P, "eps", 0.05);
  const int N = get_int(P, "N", 1024);
  const double L = get_double(P, "L", 400.0);
  const double dt = get_double(P, "dt", 0.1);
  const std::vector<double> radii = get_list(P, "radii", "4,8,16,32");
  const double slope_margin = get_double(P, "slope_margin", 0.15);
  const std::string data_kind = P.count("data") ? P.at("data") : "odd";

  if (!(p > 1.0) || p > critical_exponent(n, sigma))
    throw UsageError("test-functional: p must satisfy 1 < p <= 1 + 2 sigma / n");

  const auto dir = ensure_output_dir(spec);
  ReportBundle bundle;
  bundle.experiment = spec.name;

  const double r_max = *std::max_element(radii.begin(), radii.end());
  SemilinearConfig cfg;
  cfg.sigma = sigma;
  cfg.p = p;
  cfg.grid = make_grid(n, N, L);
  cfg.dt = dt;
  cfg.t_end = std::pow(r_max, 2.0 * sigma);
  cfg.sample_count = 32;

  const Field u0 = zero_field(cfg.grid);
  // Odd data carry zero mass, so the data term in the weak formulation
  // vanishes and the space-time nonlinear mass converges on the window; the
  // functional bound is then visible at the stated margin. `data=gaussian`
  // reproduces the slowly accumulating massive case for comparison.
  Field u1;
  if (data_kind == "odd") {
    u1 = make_field(cfg.grid, [&](double x, double, double) {
      return eps * x * std::exp(-x * x);
    });
  } else if (data_kind == "gaussian") {
    u1 = gaussian_field(cfg.grid, eps, {0, 0, 0});
  } else {
    throw UsageError("test-functional: data must be 'odd' or 'gaussian'");
  }

  std::vector<TestFunctionalAccumulator> accs;
  accs.reserve(radii.size());
  for (double r : radii) accs.emplace_back(cfg.grid, r, sigma, p);
  std::vector<StepObserver*> observers;
  for (auto& a : accs) observers.push_back(&a);

  const SolutionLog log = run_semilinear(u0, u1, cfg, observers);

  ClaimResult bounded;
  bounded.name = "bounded_window";
  bounded.statement = "run stays bounded over [0, R_max^{2s}]";
  bounded.measured = log.blown_up ? 1.0 : 0.0;
  bounded.predicted = 0.0;
  bounded.tolerance = 0.0;
  bounded.pass = !log.blown_up;
  bundle.claims.push_back(bounded);

  const double p_conj = p / (p - 1.0);
  std::vector<double> i_values, powered;
  for (const auto& a : accs) {
    i_values.push_back(a.value());
    powered.push_back(std::pow(a.value(), 1.0 / p_conj));
  }

  double worst_monotone = 1.0;
  for (std::size_t i = 0; i + 1 < i_values.size(); ++i)
    if (i_values[i] > 0.0)
      worst_monotone = std::min(worst_monotone, i_values[i + 1] / i_values[i]);
  ClaimResult monotone;
  monotone.name = "monotone_in_R";
  monotone.statement = "I_R non-decreasing in R (nested supports)";
  monotone.measured = worst_monotone;
  monotone.predicted = 1.0;
  monotone.tolerance = 1e-12;
  monotone.pass = worst_monotone >= 1.0 - 1e-12;
  bundle.claims.push_back(monotone);

  const double bound_slope =
      -2.0 * sigma + (static_cast<double>(n) + 2.0 * sigma) / p_conj;
  const DecayFit fit = loglog_fit(radii, powered, 2);
  bundle.claims.push_back(slope_claim(
      "functional_growth",
      "I_R^{1/p'} grows no faster than the weak-formulation bound", fit.slope,
      bound_slope, slope_margin, true));

  const auto csv_path = dir / "functional.csv";
  CsvWriter csv(csv_path, {"R", "I_R", "I_R_pow"});
  for (std::size_t i = 0; i < radii.size(); ++i)
    csv.row({radii[i], i_values[i], powered[i]});
  bundle.artifacts.push_back(csv_path);

  SvgLogLogPlot plot("test functional", "R", "I_R^{1/p'}");
  plot.add_series("I_R^{1/p'}", radii, powered);
  plot.add_guide("bound slope", bound_slope, radii[0], powered[0]);
  plot.write(dir / "functional.svg");
  bundle.artifacts.push_back(dir / "functional.svg");
  write_summary(bundle, dir);
  return bundle;
}

ReportBundle exp_appendix_lemma(const ExperimentSpec& spec) {
  const Params& P = spec.parameters;
  const double t_min = get_double(P, "t_min", 10.0);
  const double t_max = get_double(P, "t_max", 1000.0);
  const int samples = get_int(P, "samples", 16);
  const double tol = get_double(P, "tol", 0.02);

  const auto dir = ensure_output_dir(spec);
  ReportBundle bundle;
  bundle.experiment = spec.name;

  struct Triple {
    int n;
    double alpha, beta, c;
  };
  const Triple triples[] = {{1, 2.0, 0.0, 1.0},
                            {2, 2.0, 1.0, 1.0},
                            {3, 2.5, 0.5, 2.0}};

  const std::vector<double> times = log_spaced(t_min, t_max, samples);
  SvgLogLogPlot plot("low-frequency multiplier integral", "t", "integral");
  int idx = 0;
  for (const Triple& tr : triples) {
    const DecayFit fit =
        appendix_integral_check(tr.n, tr.alpha, tr.beta, tr.c, times);
    const double predicted = -(static_cast<double>(tr.n) + tr.beta) / tr.alpha;
    const std::string tag = "triple" + std::to_string(idx);
    bundle.claims.push_back(slope_claim(
        "slope_" + tag, "quadrature decay matches -(n+beta)/alpha", fit.slope,
        predicted, tol));

    std::vector<double> values;
    for (double t : times)
      values.push_back(annulus_integral(tr.n, tr.alpha, tr.beta, tr.c, t));
    const auto csv_path = dir / ("appendix_" + tag + ".csv");
    CsvWriter csv(csv_path, {"t", "integral", "predicted_value"});
    for (std::size_t i = 0; i < times.size(); ++i)
      csv.row({times[i], values[i],
               values[0] * std::pow(times[i] / times[0], predicted)});
    bundle.artifacts.push_back(csv_path);
    plot.add_series(tag, times, values);
    plot.add_guide("slope " + format_double(predicted), predicted, times[0],
                   values[0]);
    ++idx;
  }

  // Small-t side: the integral is bounded by its t -> 0 limit and monotone.
  {
    const Triple& tr = triples[0];
    const std::vector<double> small_t = {1e-3, 0.01, 0.1, 0.5, 1.0};
    double limit = annulus_integral(tr.n, tr.alpha, tr.beta, tr.c, 0.0);
    double worst = 0.0;
    double prev = limit;
    for (double t : small_t) {
      const double v = annulus_integral(tr.n, tr.alpha, tr.beta, tr.c, t);
      worst = std::max(worst, v / limit);
      if (v > prev + 1e-12) worst = 2.0; // monotonicity violated
      prev = v;
    }
    bundle.claims.push_back(bound_claim(
        "bounded_small_t",
        "integral bounded by its t = 0 value and monotone on (0, 1]", worst,
        1.0 + 1e-12));
  }

  plot.write(dir / "appendix.svg");
  bundle.artifacts.push_back(dir / "appendix.svg");
  write_summary(bundle, dir);
  return bundle;
}

} // namespace sigmalab::detail
