// The acceptance suite: eleven end-to-end checks with pinned tolerances,
// one printed pass/fail line each. --quick shrinks grids and windows and
// widens fitted-slope tolerances by 0.05 (documented in the README).
#include <chrono>
#include <cstdio>
#include <functional>
#include <future>
#include <iostream>
#include <random>

#include "experiment_util.hpp"
#include "sigmalab/diffusion.hpp"
#include "sigmalab/propagator.hpp"
#include "sigmalab/semilinear.hpp"

namespace sigmalab {

namespace {

using detail::bound_claim;
using detail::gaussian_field;

ClaimResult flag_claim(const std::string& name, const std::string& statement,
                       bool pass, double measured) {
  ClaimResult c;
  c.name = name;
  c.statement = statement;
  c.measured = measured;
  c.predicted = 0.0;
  c.tolerance = 0.0;
  c.pass = pass;
  return c;
}

std::vector<ClaimResult> criterion_oracle(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> xi_dist(0.0, 4.0);
  std::uniform_real_distribution<double> t_dist(0.0, 5.0);
  std::uniform_real_distribution<double> band(-2e-4, 2e-4);
  const double sigmas[] = {1.0, 1.25, 1.5, 2.0};

  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double sigma = sigmas[i % 4];
    // Every fifth tuple lands inside the |w - 1| guard band.
    const double xi = i % 5 == 0
                          ? std::pow(1.0 + band(rng), 1.0 / (2.0 * sigma))
                          : xi_dist(rng);
    const double t = t_dist(rng);
    const std::complex<double> u0(unit(rng), unit(rng));
    const std::complex<double> u1(unit(rng), unit(rng));

    const MultiplierPair mp = multiplier_pair(xi, sigma, t);
    const std::complex<double> closed = mp.m0 * u0 + mp.m1 * u1;
    const std::complex<double> oracle =
        mode_ode_oracle(xi, sigma, u0, u1, t, oracle_steps(xi, sigma, t));
    worst = std::max(worst,
                     std::abs(closed - oracle) / (1.0 + std::abs(closed)));
  }
  return {bound_claim("oracle_agreement",
                      "closed-form multipliers vs per-mode RK4 on 200 tuples",
                      worst, 1e-8)};
}

std::vector<ClaimResult> criterion_structural(std::uint64_t seed) {
  std::vector<ClaimResult> claims;
  std::mt19937_64 rng(seed ^ 0x5157u);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  const auto random_field = [&](const GridSpec& g) {
    Field f = zero_field(g);
    for (double& v : f.values) v = unit(rng);
    return f;
  };

  for (const GridSpec& grid :
       {make_grid(1, 256, 10.0), make_grid(2, 32, 5.0)}) {
    const Field f = random_field(grid);
    const SpectralField c = to_spectral(f);
    const Field back = to_physical(c);
    double sup = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      sup = std::max(sup, std::abs(back.values[i] - f.values[i]));
      scale = std::max(scale, std::abs(f.values[i]));
    }
    claims.push_back(bound_claim(
        "roundtrip_n" + std::to_string(grid.dimension),
        "transform round-trip relative sup error", sup / scale, 1e-12));

    const double phys = lq_norm(f, 2.0);
    const double spec_side = l2_norm_from_spectrum(c);
    claims.push_back(bound_claim(
        "parseval_n" + std::to_string(grid.dimension),
        "discrete Parseval identity relative error",
        std::abs(phys - spec_side) / phys, 1e-10));
  }

  {
    const GridSpec grid = make_grid(1, 512, 100.0);
    const Field u0 = gaussian_field(grid, 1.0, {1, 0, 0});
    const Field u1 = gaussian_field(grid, 0.7, {-1, 0, 0});
    const double p0 = field_integral(u0);
    const double p1 = field_integral(u1);
    double worst = 0.0;
    for (double t : {0.5, 3.0, 17.0}) {
      const Field u = propagate_linear(u0, u1, 1.25, t);
      const double expected = p0 + (1.0 - std::exp(-t)) * p1;
      worst = std::max(worst, std::abs(field_integral(u) - expected) /
                                  (std::abs(p0) + std::abs(p1)));
    }
    claims.push_back(bound_claim("zero_mode_mass",
                                 "zero-mode mass law, exact discrete identity",
                                 worst, 1e-12));

    const Field f = random_field(grid);
    const auto [low, high] = lowhigh_decompose(f, CutoffProfile{});
    double sup = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      sup = std::max(sup,
                     std::abs(low.values[i] + high.values[i] - f.values[i]));
      scale = std::max(scale, std::abs(f.values[i]));
    }
    claims.push_back(bound_claim("cutoff_partition",
                                 "low/high cutoff partition of unity",
                                 sup / scale, 1e-12));
  }

  {
    const GridSpec grid = make_grid(1, 256, 40.0);
    const Field v0 = gaussian_field(grid, 1.0, {0.5, 0, 0});
    int violations = 0;
    for (double sigma : {1.0, 1.25}) {
      for (int k = 0; k < 4; ++k) {
        const auto a_k = expansion_coefficients(v0, sigma, k);
        const auto a_next = expansion_coefficients(v0, sigma, k + 1);
        for (const ExpansionTerm& term : a_k.terms) {
          const bool found = std::any_of(
              a_next.terms.begin(), a_next.terms.end(),
              [&](const ExpansionTerm& other) {
                return other.ell == term.ell && other.alpha == term.alpha;
              });
          if (!found) ++violations;
        }
      }
    }
    claims.push_back(flag_claim("expansion_nesting",
                                "A_k term sets nest into A_{k+1}",
                                violations == 0,
                                static_cast<double>(violations)));
  }

  {
    double min_gap = std::numeric_limits<double>::infinity(), max_gap = 0.0;
    for (double sigma : {1.0, 1.1, 1.25, 1.5, 2.0, 2.7}) {
      const SpectrumSequence seq = spectrum_sequence(sigma, 25);
      for (std::size_t i = 0; i + 1 < seq.values.size(); ++i) {
        const double gap = seq.values[i + 1] - seq.values[i];
        min_gap = std::min(min_gap, gap);
        max_gap = std::max(max_gap, gap);
      }
    }
    claims.push_back(flag_claim("spectrum_gaps",
                                "exponent gaps lie in (0, 1] for all sigma",
                                min_gap > 0.0 && max_gap <= 1.0 + 1e-12,
                                max_gap));
  }
  return claims;
}

struct Task {
  std::vector<int> indices; // criteria produced by this task
  std::function<std::vector<CriterionResult>()> run;
};

ExperimentSpec make_spec(const AcceptanceOptions& opt, int index,
                         const std::string& name,
                         std::map<std::string, std::string> params) {
  ExperimentSpec spec;
  spec.name = name;
  spec.parameters = std::move(params);
  spec.seed = opt.seed;
  if (!opt.output_dir.empty()) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "criterion-%02d", index);
    spec.output_dir = opt.output_dir / (std::string(buf) + "-" + name);
  } else {
    spec.output_dir = std::filesystem::path("out") / "acceptance" / name;
  }
  return spec;
}

CriterionResult finish(int index, const std::string& label, double budget,
                       std::vector<ClaimResult> claims,
                       std::chrono::steady_clock::time_point start) {
  CriterionResult r;
  r.index = index;
  r.label = label;
  r.claims = std::move(claims);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            start)
                  .count();
  r.budget_seconds = budget;
  if (budget > 0.0)
    r.claims.push_back(
        bound_claim("runtime_budget", "wall-clock runtime budget (seconds)",
                    r.seconds, budget));
  r.pass = std::all_of(r.claims.begin(), r.claims.end(),
                       [](const ClaimResult& c) { return c.pass; });
  return r;
}

} // namespace

AcceptanceResult acceptance_suite(const AcceptanceOptions& options) {
  const bool quick = options.quick;
  const double tol_pad = quick ? 0.05 : 0.0;
  const auto fd = [](double v) { return format_double(v); };

  std::vector<Task> tasks;

  tasks.push_back({{1}, [&, options] {
    const auto start = std::chrono::steady_clock::now();
    auto spec = make_spec(options, 1, "linear-decay",
                          {{"N", quick ? "512" : "1024"},
                           {"L", quick ? "200" : "400"},
                           {"t_max", quick ? "100" : "200"},
                           {"samples", quick ? "16" : "24"},
                           {"tol", fd(0.1 + tol_pad)},
                           {"box_check", quick ? "0" : "1"}});
    return std::vector<CriterionResult>{
        finish(1, "linear L2 decay rates", 30.0,
               run_experiment(spec).claims, start)};
  }});

  tasks.push_back({{2}, [&, options] {
    const auto start = std::chrono::steady_clock::now();
    return std::vector<CriterionResult>{finish(
        2, "multiplier oracle equivalence", 5.0,
        criterion_oracle(options.seed), start)};
  }});

  tasks.push_back({{3}, [&, options] {
    const auto start = std::chrono::steady_clock::now();
    auto spec = make_spec(options, 3, "diffusion-gap",
                          {{"N", quick ? "512" : "1024"},
                           {"L", quick ? "200" : "400"},
                           {"t_max", quick ? "100" : "200"},
                           {"samples", quick ? "16" : "24"},
                           {"tol", fd(0.1 + tol_pad)}});
    return std::vector<CriterionResult>{
        finish(3, "low-frequency diffusion gap", 30.0,
               run_experiment(spec).claims, start)};
  }});

  tasks.push_back({{4}, [&, options] {
    const auto start = std::chrono::steady_clock::now();
    auto spec = make_spec(options, 4, "profile",
                          {{"N", quick ? "512" : "1024"},
                           {"L", quick ? "200" : "400"},
                           {"t_max", quick ? "100" : "200"},
                           {"samples", quick ? "16" : "24"},
                           {"tol", fd(0.1 + tol_pad)}});
    return std::vector<CriterionResult>{
        finish(4, "first-order profile and two-sided band", 0.0,
               run_experiment(spec).claims, start)};
  }});

  tasks.push_back({{5}, [&, options] {
    const auto start = std::chrono::steady_clock::now();
    auto spec = make_spec(options, 5, "expansion",
                          {{"N", quick ? "512" : "1024"},
                           {"L", quick ? "200" : "400"},
                           {"t_max", quick ? "100" : "200"},
                           {"samples", quick ? "8" : "12"}});
    return std::vector<CriterionResult>{
        finish(5, "expansion residual and exponent sequence", 0.0,
               run_experiment(spec).claims, start)};
  }});

  tasks.push_back({{6}, [&, options] {
    const auto start = std::chrono::steady_clock::now();
    auto spec = make_spec(options, 6, "appendix-lemma", {});
    return std::vector<CriterionResult>{
        finish(6, "multiplier integral quadrature", 5.0,
               run_experiment(spec).claims, start)};
  }});

  tasks.push_back({{7, 8}, [&, options] {
    const auto start = std::chrono::steady_clock::now();
    auto spec = make_spec(options, 7, "semilinear-decay",
                          {{"N", quick ? "512" : "1024"},
                           {"L", quick ? "200" : "400"},
                           {"dt", quick ? "0.1" : "0.05"},
                           {"t_end", quick ? "100" : "200"},
                           {"samples", quick ? "16" : "24"},
                           {"tol", fd(0.12 + tol_pad)},
                           {"dev_t_min", quick ? "25" : "50"}});
    const ReportBundle bundle = run_experiment(spec);
    std::vector<ClaimResult> c7, c8;
    for (const ClaimResult& c : bundle.claims) {
      if (c.name.rfind("dev0", 0) == 0)
        c8.push_back(c);
      else
        c7.push_back(c);
    }
    std::vector<CriterionResult> out;
    out.push_back(
        finish(7, "semilinear global decay", 0.0, std::move(c7), start));
    out.push_back(
        finish(8, "nonlinear diffusion profile", 0.0, std::move(c8), start));
    return out;
  }});

  tasks.push_back({{9}, [&, options] {
    const auto start = std::chrono::steady_clock::now();
    auto spec = quick ? make_spec(options, 9, "lifespan",
                                  {{"N", "512"},
                                   {"L", "200"},
                                   {"dt", "0.04"},
                                   {"shape_amp", "1.0"},
                                   {"t_cap", "800"},
                                   {"tol_rel", "0.3"}})
                      : make_spec(options, 9, "lifespan", {});
    return std::vector<CriterionResult>{
        finish(9, "lifespan scaling", 300.0, run_experiment(spec).claims,
               start)};
  }});

  tasks.push_back({{10}, [&, options] {
    const auto start = std::chrono::steady_clock::now();
    auto spec = make_spec(options, 10, "test-functional",
                          {{"N", quick ? "512" : "1024"},
                           {"L", quick ? "200" : "400"},
                           {"dt", quick ? "0.2" : "0.1"},
                           {"radii", quick ? "4,8,16" : "4,8,16,32"}});
    return std::vector<CriterionResult>{
        finish(10, "space-time test functional", 0.0,
               run_experiment(spec).claims, start)};
  }});

  tasks.push_back({{11}, [&, options] {
    const auto start = std::chrono::steady_clock::now();
    return std::vector<CriterionResult>{
        finish(11, "structural property suite", 10.0,
               criterion_structural(options.seed), start)};
  }});

  // Execute in waves of `jobs` tasks; results are reordered afterwards.
  const int jobs = std::max(1, options.jobs);
  std::vector<CriterionResult> results;
  for (std::size_t base = 0; base < tasks.size();
       base += static_cast<std::size_t>(jobs)) {
    std::vector<std::future<std::vector<CriterionResult>>> wave;
    const std::size_t end =
        std::min(tasks.size(), base + static_cast<std::size_t>(jobs));
    for (std::size_t i = base; i < end; ++i)
      wave.push_back(jobs == 1
                         ? std::async(std::launch::deferred, tasks[i].run)
                         : std::async(std::launch::async, tasks[i].run));
    for (auto& f : wave)
      for (CriterionResult& r : f.get()) results.push_back(std::move(r));
  }
  std::sort(results.begin(), results.end(),
            [](const CriterionResult& a, const CriterionResult& b) {
              return a.index < b.index;
            });

  AcceptanceResult outcome;
  outcome.criteria = std::move(results);
  outcome.pass = std::all_of(outcome.criteria.begin(), outcome.criteria.end(),
                             [](const CriterionResult& c) { return c.pass; });

  for (const CriterionResult& c : outcome.criteria) {
    std::printf("[%s] criterion %2d: %s (%.1f s)\n", c.pass ? "PASS" : "FAIL",
                c.index, c.label.c_str(), c.seconds);
    if (!c.pass)
      for (const ClaimResult& claim : c.claims)
        if (!claim.pass)
          std::printf("         - %s: measured=%s predicted=%s tol=%s\n",
                      claim.name.c_str(), format_double(claim.measured).c_str(),
                      format_double(claim.predicted).c_str(),
                      format_double(claim.tolerance).c_str());
  }
  std::fflush(stdout);

  if (!options.output_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(options.output_dir, ec);
    std::vector<std::pair<std::string, std::string>> kv;
    for (const CriterionResult& c : outcome.criteria) {
      const std::string key = "criterion." + std::to_string(c.index);
      kv.emplace_back(key + ".label", c.label);
      kv.emplace_back(key + ".pass", c.pass ? "true" : "false");
      kv.emplace_back(key + ".seconds", format_double(c.seconds));
      for (const ClaimResult& claim : c.claims) {
        kv.emplace_back(key + ".claim." + claim.name + ".measured",
                        format_double(claim.measured));
        kv.emplace_back(key + ".claim." + claim.name + ".pass",
                        claim.pass ? "true" : "false");
      }
    }
    kv.emplace_back("overall", outcome.pass ? "pass" : "fail");
    write_kv_file(options.output_dir / "acceptance_summary.txt", kv);
  }
  return outcome;
}

} // namespace sigmalab
