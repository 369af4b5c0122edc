// Command line driver: one subcommand per experiment, plus `accept` for the
// full acceptance suite. Exit codes: 0 pass, 1 criterion/claim failure,
// 2 usage error, 3 runtime error.
#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <map>
#include <string>
#include <vector>

#include "sigmalab/experiments.hpp"
#include "sigmalab/io.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitClaimFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct GlobalOptions {
  std::string out;
  std::uint64_t seed = 12345;
  int jobs = 1;
  bool quick = false;
};

int run_one(const std::string& name, const GlobalOptions& global,
            const std::vector<std::string>& overrides,
            const std::string& config_path) {
  sigmalab::ExperimentSpec spec;
  spec.name = name;
  spec.seed = global.seed;
  if (!global.out.empty()) spec.output_dir = global.out;

  if (!config_path.empty())
    spec.parameters = sigmalab::parse_kv_file(config_path);
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw sigmalab::UsageError("expected key=value, got: " + kv);
    spec.parameters[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  if (global.quick) {
    // Reduced grids, shorter windows, tolerances widened by 0.05.
    if (!spec.parameters.count("N")) spec.parameters["N"] = "512";
    if (!spec.parameters.count("L")) spec.parameters["L"] = "200";
    if (!spec.parameters.count("t_max")) spec.parameters["t_max"] = "100";
    if (!spec.parameters.count("tol")) spec.parameters["tol"] = "0.15";
  }

  const sigmalab::ReportBundle bundle = sigmalab::run_experiment(spec);
  for (const sigmalab::ClaimResult& c : bundle.claims)
    std::printf("[%s] %s: measured=%s predicted=%s tol=%s\n",
                c.pass ? "PASS" : "FAIL", c.name.c_str(),
                sigmalab::format_double(c.measured).c_str(),
                sigmalab::format_double(c.predicted).c_str(),
                sigmalab::format_double(c.tolerance).c_str());
  return bundle.pass() ? kExitPass : kExitClaimFailure;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Fourier-spectral laboratory for doubly damped sigma-evolution "
      "dynamics: exact linear propagators, diffusion profiles, semilinear "
      "Duhamel runs, and decay-rate regression."};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--out", global.out, "output directory for CSV/SVG reports");
  app.add_option("--seed", global.seed, "seed for randomized inputs");
  app.add_option("--jobs", global.jobs, "parallel criteria in `accept`")
      ->check(CLI::PositiveNumber);
  app.add_flag("--quick", global.quick,
               "reduced grids and windows, looser tolerances");

  struct SubState {
    std::vector<std::string> overrides;
    std::string config;
  };
  std::map<std::string, SubState> states;

  for (const std::string& name : sigmalab::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, sigmalab::experiment_help(name));
    sub->fallthrough();
    SubState& st = states[name];
    sub->add_option("-P,--param", st.overrides,
                    "parameter override as key=value (repeatable)");
    sub->add_option("--config", st.config,
                    "flat key = value config file with parameters");
  }
  CLI::App* accept = app.add_subcommand(
      "accept",
      "run the acceptance suite: every criterion with pinned tolerances, one "
      "pass/fail line each; nonzero exit on any failure");
  accept->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (accept->parsed()) {
      sigmalab::AcceptanceOptions opts;
      if (!global.out.empty()) opts.output_dir = global.out;
      opts.seed = global.seed;
      opts.quick = global.quick;
      opts.jobs = global.jobs;
      const sigmalab::AcceptanceResult result =
          sigmalab::acceptance_suite(opts);
      return result.pass ? kExitPass : kExitClaimFailure;
    }
    for (const auto& [name, st] : states)
      if (app.get_subcommand(name)->parsed())
        return run_one(name, global, st.overrides, st.config);
    std::fprintf(stderr, "no subcommand selected\n");
    return kExitUsage;
  } catch (const sigmalab::UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
}
