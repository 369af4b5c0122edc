#include "sigmalab/experiments.hpp"

#include <cstdio>
#include <stdexcept>

#include "experiment_util.hpp"

namespace sigmalab {

bool ReportBundle::pass() const {
  return std::all_of(claims.begin(), claims.end(),
                     [](const ClaimResult& c) { return c.pass; });
}

namespace detail {

double get_double(const Params& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw UsageError("parameter '" + key + "' is not a number: " + it->second);
  }
}

int get_int(const Params& p, const std::string& key, int fallback) {
  const double v = get_double(p, key, static_cast<double>(fallback));
  const int i = static_cast<int>(std::lround(v));
  if (std::abs(v - i) > 1e-9)
    throw UsageError("parameter '" + key + "' must be an integer");
  return i;
}

std::vector<double> get_list(const Params& p, const std::string& key,
                             const std::string& fallback) {
  const std::string raw = p.count(key) ? p.at(key) : fallback;
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("parameter '" + key + "' has a bad entry: " + item);
    }
  }
  if (out.empty()) throw UsageError("parameter '" + key + "' is empty");
  return out;
}

std::filesystem::path ensure_output_dir(const ExperimentSpec& spec) {
  std::filesystem::path dir =
      spec.output_dir.empty() ? std::filesystem::path("out") / spec.name
                              : spec.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory " + dir.string());
  return dir;
}

Field gaussian_field(const GridSpec& grid, double amplitude,
                     std::array<double, 3> center, double width) {
  return make_field(grid, [&](double x, double y, double z) {
    const double dx = x - center[0], dy = y - center[1], dz = z - center[2];
    const double r2 = dx * dx + dy * dy + dz * dz;
    return amplitude * std::exp(-r2 / (width * width));
  });
}

ClaimResult slope_claim(const std::string& name, const std::string& statement,
                        double measured, double predicted, double tolerance,
                        bool one_sided) {
  ClaimResult c;
  c.name = name;
  c.statement = statement;
  c.measured = measured;
  c.predicted = predicted;
  c.tolerance = tolerance;
  c.pass = one_sided ? measured <= predicted + tolerance
                     : std::abs(measured - predicted) <= tolerance;
  return c;
}

ClaimResult bound_claim(const std::string& name, const std::string& statement,
                        double measured, double bound) {
  ClaimResult c;
  c.name = name;
  c.statement = statement;
  c.measured = measured;
  c.predicted = bound;
  c.tolerance = 0.0;
  c.pass = measured <= bound;
  return c;
}

void write_summary(const ReportBundle& bundle,
                   const std::filesystem::path& dir) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("experiment", bundle.experiment);
  for (const ClaimResult& c : bundle.claims) {
    kv.emplace_back("claim." + c.name + ".statement", c.statement);
    kv.emplace_back("claim." + c.name + ".measured", format_double(c.measured));
    kv.emplace_back("claim." + c.name + ".predicted",
                    format_double(c.predicted));
    kv.emplace_back("claim." + c.name + ".tolerance",
                    format_double(c.tolerance));
    kv.emplace_back("claim." + c.name + ".pass", c.pass ? "true" : "false");
  }
  kv.emplace_back("overall", bundle.pass() ? "pass" : "fail");
  write_kv_file(dir / "summary.txt", kv);
}

double coefficient_l2_trace(
    const GridSpec& grid, const std::vector<const SpectralField*>& spectra,
    const std::function<void(double, std::vector<double>&)>& coefficients) {
  const int n = grid.dimension;
  std::vector<double> coef(spectra.size());
  double sum = 0.0;
  for_each_mode_magnitude(grid, [&](std::size_t i, double xi_mag) {
    coefficients(xi_mag, coef);
    std::complex<double> z = 0.0;
    for (std::size_t s = 0; s < spectra.size(); ++s)
      z += coef[s] * spectra[s]->coefficients[i];
    sum += std::norm(z);
  });
  const double dxi = 2.0 * std::numbers::pi / grid.box_length;
  return std::sqrt(sum * std::pow(dxi, n)) /
         std::pow(2.0 * std::numbers::pi, 0.5 * n);
}

double max_consecutive_ratio(const std::vector<double>& values) {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (!(values[i] > 0.0)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, values[i + 1] / values[i]);
  }
  return worst;
}

} // namespace detail

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "linear-decay", "diffusion-gap", "expansion",       "profile",
      "semilinear-decay", "lifespan",  "test-functional", "appendix-lemma"};
  return names;
}

ReportBundle run_experiment(const ExperimentSpec& spec) {
  if (spec.name == "linear-decay") return detail::exp_linear_decay(spec);
  if (spec.name == "diffusion-gap") return detail::exp_diffusion_gap(spec);
  if (spec.name == "expansion") return detail::exp_expansion(spec);
  if (spec.name == "profile") return detail::exp_profile(spec);
  if (spec.name == "semilinear-decay") return detail::exp_semilinear_decay(spec);
  if (spec.name == "lifespan") return detail::exp_lifespan(spec);
  if (spec.name == "test-functional") return detail::exp_test_functional(spec);
  if (spec.name == "appendix-lemma") return detail::exp_appendix_lemma(spec);
  throw UsageError("unknown experiment: " + spec.name);
}

std::string experiment_help(const std::string& name) {
  if (name == "linear-decay")
    return "Fits the L2 decay of dt^j |D|^a u for (a,j) in {(0,0),(s,0),(0,1)} "
           "against the (L^m cap L^2)-L^2 rates.\n"
           "  params: n sigma m N L t_min t_max samples tol box_check\n"
           "  csv decay_<tag>.csv: t,value,predicted_value";
  if (name == "diffusion-gap")
    return "Fits || dt^j |D|^a (u_low - v_low) ||_{L^q} against the low-"
           "frequency gap rate and checks the margin over u itself.\n"
           "  params: n sigma p q a j N L t_min t_max samples tol gap_margin\n"
           "  csv gap.csv: t,gap,solution,predicted_gap";
  if (name == "expansion")
    return "Checks that the rescaled expansion residual decreases for each "
           "gamma, symbol-residual ratios stay bounded, and the sigma = 1.25 "
           "exponent sequence is exact.\n"
           "  params: n sigma N L t_min t_max samples gammas\n"
           "  csv residual_gamma<g>.csv: t,residual,rescaled; coefficients_gamma<g>.csv: ell,alpha0..2,coeff; "
           "symbol_ratio.csv: gamma,xi,residual,ratio; spectrum.csv: k,lambda";
  if (name == "profile")
    return "First-order profile deviation || u - (P0+P1) G_s || decay and the "
           "two-sided band on t^{n/4s} || u ||.\n"
           "  params: n sigma N L t_min t_max samples tol band_t_min band_ratio\n"
           "  csv profile.csv: t,deviation,solution,predicted_deviation";
  if (name == "semilinear-decay")
    return "Small-data supercritical run: global existence, the three energy "
           "decay rates, nonlinear-mass convergence, and the rescaled "
           "deviation from M G_sigma decreasing.\n"
           "  params: n sigma p eps N L dt t_end samples tol dev_t_min dev_samples\n"
           "  csv solution_log.csv: t,l2,linf,lp_mass,cum_mass; traces.csv: "
           "t,l2,dsigma,ut; deviation.csv: t,dev00,rescaled00,dev01,rescaled01";
  if (name == "lifespan")
    return "Subcritical blow-up probe: fits T_eps against eps and compares "
           "with the lifespan exponent; includes threshold sensitivity.\n"
           "  params: n sigma p shape_amp N L dt epsilons t_cap tol_rel sens_tol\n"
           "  csv lifespan.csv: epsilon,T,censored (plus per-threshold columns)";
  if (name == "test-functional")
    return "Space-time functional I_R on nested bumps: growth of I_R^{1/p'} "
           "across R stays under the weak-formulation bound.\n"
           "  params: n sigma p eps N L dt radii slope_margin\n"
           "  csv functional.csv: R,I_R,I_R_pow";
  if (name == "appendix-lemma")
    return "Radial quadrature of int_{|xi|<=1} |xi|^beta e^{-c|xi|^alpha t}: "
           "fitted slopes match -(n+beta)/alpha; bounded near t = 0.\n"
           "  params: triples (as n,alpha,beta,c;...) t_min t_max samples tol\n"
           "  csv appendix_<i>.csv: t,integral,predicted_value";
  throw UsageError("unknown experiment: " + name);
}

} // namespace sigmalab
