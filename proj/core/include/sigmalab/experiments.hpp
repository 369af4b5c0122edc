//==============================================================================
// experiments.hpp
// Named experiments binding the grid, propagator, diffusion, norm, and
// semilinear modules into reproducible runs: each emits data CSVs, a flat
// key = value summary with (measured, predicted, tolerance, pass/fail) per
// claim, and a log-log SVG with the predicted-slope guide. The acceptance
// suite executes the project's eleven acceptance checks end to end.
//==============================================================================
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace sigmalab {

// Invalid experiment name / parameters (CLI exit code 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentSpec {
  std::string name;
  std::map<std::string, std::string> parameters;
  std::filesystem::path output_dir;
  std::uint64_t seed = 12345;
};

struct ClaimResult {
  std::string name;      // slug, stable across runs
  std::string statement; // which estimate this checks, human-readable
  double measured = 0.0;
  double predicted = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ReportBundle {
  std::string experiment;
  std::vector<ClaimResult> claims;
  std::vector<std::filesystem::path> artifacts;

  bool pass() const;
};

// Names: linear-decay, diffusion-gap, expansion, profile, semilinear-decay,
// lifespan, test-functional, appendix-lemma. Unknown names and malformed
// parameters raise UsageError; I/O failures raise std::runtime_error.
ReportBundle run_experiment(const ExperimentSpec& spec);

const std::vector<std::string>& experiment_names();

// One-line CSV schema and parameter documentation for --help.
std::string experiment_help(const std::string& name);

struct AcceptanceOptions {
  std::filesystem::path output_dir; // empty: no artifacts, console only
  std::uint64_t seed = 12345;
  bool quick = false; // reduced grids and windows, tolerances +0.05
  int jobs = 1;       // parallel criteria
};

struct CriterionResult {
  int index = 0;
  std::string label;
  std::vector<ClaimResult> claims;
  double seconds = 0.0;
  double budget_seconds = 0.0; // 0: no runtime budget
  bool pass = false;
};

struct AcceptanceResult {
  std::vector<CriterionResult> criteria;
  bool pass = false;
};

// Runs every acceptance criterion; prints one pass/fail line per criterion
// to stdout and writes acceptance_summary.txt when output_dir is set.
AcceptanceResult acceptance_suite(const AcceptanceOptions& options);

} // namespace sigmalab
