//==============================================================================
// semilinear.hpp
// Duhamel integration of
//     u_tt + (-Laplace)^sigma u + u_t + (-Laplace)^sigma u_t = |u|^p
// on top of the exact linear multiplier flow. One step propagates the state
// (u, u_t) exactly through the linear semigroup over dt and adds the Duhamel
// increment with an exponential midpoint rule:
//     predictor  u* = linear half-step + (dt/2) m1(dt/4) N(u_n)
//     increment  integral_0^dt m1(dt - s) N(u(s)) ds ~ dt m1(dt/2) N(u*)
// (and dt [e^{-w dt/2} - m1(dt/2)] N(u*) for the u_t component), local error
// O(dt^3), global order 2. All stiffness sits in the exact linear factors.
//==============================================================================
#pragma once

#include <memory>
#include <span>
#include <vector>

#include "sigmalab/grid.hpp"

namespace sigmalab {

struct SemilinearConfig {
  double sigma = 1.0;
  double p = 2.0;
  GridSpec grid;
  double dt = 0.05;
  double t_end = 200.0;
  double blowup_threshold = 1e6;
  double epsilon = 1.0; // data scale, applied by the experiment drivers
  // 0 disables the forcing; the run then reproduces the linear flow exactly.
  double nonlinearity_coefficient = 1.0;
  int sample_count = 48;       // log-spaced norm samples over (0, t_end]
  bool dense_sampling = false; // record every step instead
};

// Rejects p <= 1, non-positive dt, dt > 0.25 (the linear flow is exact, the
// cap keeps the nonlinear quadrature second-order accurate), bad thresholds.
void validate_config(const SemilinearConfig& cfg);

// Pointwise |u|^p (absolute value first, also for non-integer p). Overflow
// produces infinities that the run loop converts into a blow-up record.
Field nonlinearity(const Field& u, double p);

// 2/3-rule spectral truncation: zeroes modes with any axis |k| > N/3.
SpectralField dealias_two_thirds(const SpectralField& c);

struct SolutionLog {
  std::vector<double> times;
  std::vector<double> l2_norms;
  std::vector<double> linf_norms;
  std::vector<double> lp_mass;        // ||u||_p^p
  std::vector<double> cumulative_mass; // integral_0^t coef ||u||_p^p dtau
  bool blown_up = false;
  double blowup_time = -1.0;
};

// First time the recorded sup-norm trace crosses the threshold (requires a
// dense log); negative when it never does.
double first_crossing_time(const SolutionLog& log, double threshold);

// Hook run every accepted step (including the initial state).
class StepObserver {
 public:
  virtual ~StepObserver() = default;
  virtual void observe(double t, const Field& u, const SpectralField& u_hat,
                       const SpectralField& udot_hat) = 0;
};

// One Duhamel step of length cfg.dt from (u_now, udot_now).
std::pair<Field, Field> duhamel_step(const Field& u_now, const Field& udot_now,
                                     const SemilinearConfig& cfg);

// Full trajectory from (u0, u1) to cfg.t_end (or blow-up).
SolutionLog run_semilinear(const Field& u0, const Field& u1,
                           const SemilinearConfig& cfg,
                           std::span<StepObserver* const> observers = {});

// Spectral state snapshot (u_hat, u_t_hat) at a fixed time.
struct SpectralState {
  double t = 0.0;
  SpectralField u_hat;
  SpectralField udot_hat;
};

// || dt^j |D|^{k sigma} (u(t) - M G_sigma(t)) ||_{L2(dx)} from a snapshot.
// (j, k) = (1, 1) is rejected.
double profile_deviation(const SpectralState& state, double m_estimate,
                         double sigma, int j, int k);

// Captures snapshots at the requested times (matched to the step grid).
class SnapshotObserver : public StepObserver {
 public:
  explicit SnapshotObserver(std::vector<double> target_times);
  void observe(double t, const Field& u, const SpectralField& u_hat,
               const SpectralField& udot_hat) override;
  const std::vector<SpectralState>& snapshots() const { return snapshots_; }

 private:
  std::vector<double> targets_;
  std::size_t next_ = 0;
  std::vector<SpectralState> snapshots_;
};

// Samples || |D|^a dt^j u ||_{L2} at the requested times.
class NormTraceObserver : public StepObserver {
 public:
  NormTraceObserver(std::vector<double> target_times, int j, double a);
  void observe(double t, const Field& u, const SpectralField& u_hat,
               const SpectralField& udot_hat) override;
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> targets_;
  std::size_t next_ = 0;
  int j_;
  double a_;
  std::vector<double> times_, values_;
};

struct LifespanReport {
  std::vector<double> epsilons;
  std::vector<double> lifespans; // negative when censored
  std::vector<bool> censored;
  double fitted_exponent = -1.0; // from log T_eps vs log eps, sign-flipped
  double predicted_exponent = 0.0;
  bool fit_valid = false;
};

// Runs data (0, eps * u1_shape) for each eps until blow-up or t_cap; fits
// log T_eps against log eps on the uncensored subset (needs >= 4 points).
// Requires 1 < p < 1 + 2 sigma / n, u1_shape >= 0 with positive integral,
// >= 4 epsilons spanning a factor >= 8. Dense logs are returned through
// `logs` when non-null (one per epsilon, for threshold sensitivity studies).
LifespanReport lifespan_probe(const Field& u1_shape,
                              const SemilinearConfig& config_template,
                              std::span<const double> epsilons, double t_cap,
                              std::vector<SolutionLog>* logs = nullptr);

// Space-time functional I_R = integral |u|^p eta(t/R^{2 sigma}) phi(|x|/R),
// accumulated by trapezoid along a trajectory.
class TestFunctionalAccumulator : public StepObserver {
 public:
  TestFunctionalAccumulator(const GridSpec& grid, double radius, double sigma,
                            double p);
  void observe(double t, const Field& u, const SpectralField& u_hat,
               const SpectralField& udot_hat) override;
  double value() const { return integral_; }
  double radius() const { return radius_; }

 private:
  double radius_, sigma_, p_;
  std::vector<std::pair<std::size_t, double>> support_; // (index, phi weight)
  double cell_ = 0.0;
  double prev_t_ = -1.0, prev_g_ = 0.0;
  double integral_ = 0.0;
};

// Smooth bump: 1 on [0, 1/2], 0 beyond 1, cosine-squared ramp between.
double bump_profile(double s);

// Convenience wrapper: runs (u0, u1) under cfg and returns I_R. The
// trajectory must cover [0, R^{2 sigma}] (cfg.t_end too small is rejected).
double test_functional(const Field& u0, const Field& u1,
                       const SemilinearConfig& cfg, double radius);

} // namespace sigmalab
