// Internal helpers shared by the experiment translation units. Not installed.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "sigmalab/experiments.hpp"
#include "sigmalab/grid.hpp"
#include "sigmalab/io.hpp"
#include "sigmalab/norms.hpp"

namespace sigmalab::detail {

using Params = std::map<std::string, std::string>;

double get_double(const Params& p, const std::string& key, double fallback);
int get_int(const Params& p, const std::string& key, int fallback);
std::vector<double> get_list(const Params& p, const std::string& key,
                             const std::string& fallback);

std::filesystem::path ensure_output_dir(const ExperimentSpec& spec);

Field gaussian_field(const GridSpec& grid, double amplitude,
                     std::array<double, 3> center, double width = 1.0);

ClaimResult slope_claim(const std::string& name, const std::string& statement,
                        double measured, double predicted, double tolerance,
                        bool one_sided = false);
ClaimResult bound_claim(const std::string& name, const std::string& statement,
                        double measured, double bound);

void write_summary(const ReportBundle& bundle,
                   const std::filesystem::path& dir);

// L2(dx) norm of sum_i coef_i(|xi|) spectra_i(xi) over the lattice, via the
// exact discrete Parseval identity (no inverse transform).
double coefficient_l2_trace(
    const GridSpec& grid, const std::vector<const SpectralField*>& spectra,
    const std::function<void(double, std::vector<double>&)>& coefficients);

// Largest consecutive ratio v[i+1]/v[i]; < 1 means strictly decreasing.
double max_consecutive_ratio(const std::vector<double>& values);

// Experiment entry points.
ReportBundle exp_linear_decay(const ExperimentSpec& spec);
ReportBundle exp_diffusion_gap(const ExperimentSpec& spec);
ReportBundle exp_expansion(const ExperimentSpec& spec);
ReportBundle exp_profile(const ExperimentSpec& spec);
ReportBundle exp_semilinear_decay(const ExperimentSpec& spec);
ReportBundle exp_lifespan(const ExperimentSpec& spec);
ReportBundle exp_test_functional(const ExperimentSpec& spec);
ReportBundle exp_appendix_lemma(const ExperimentSpec& spec);

} // namespace sigmalab::detail
