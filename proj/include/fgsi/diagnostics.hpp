#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fgsi/reference.hpp"
#include "fgsi/stepper.hpp"

namespace fgsi {

// ---------------------------------------------------------------------------
// Error series

struct ErrorSeries {
  std::vector<double> times;
  std::vector<double> values;

  double max() const;
  double last() const { return values.empty() ? 0.0 : values.back(); }
};

/// values[k] = |H(state_k) - e0|, from the trajectory's cached energies.
ErrorSeries energy_error_series(const Trajectory& traj, double e0);

/// Euclidean distance over the coordinate block. Both trajectories must be
/// sampled at the same times (relative tolerance 1e-9), else Error(Input).
ErrorSeries position_error_series(const Trajectory& traj, const Trajectory& reference);

// ---------------------------------------------------------------------------
// Convergence order

struct ConvergenceResult {
  std::vector<double> taus;
  std::vector<double> errors;  // phase-space distance to the reference at t_end
  double slope = 0.0;          // least-squares slope of log10 error vs log10 tau
};

/// Runs `method` to t_end (= n tau exactly, n rounded) for every tau and
/// compares the final state with an RKF 7(8) solution at tolerance
/// `reference.tol`.
ConvergenceResult convergence(const Method& method, const SystemModel& system, const State& s0,
                              std::span<const double> taus, double t_end,
                              const RkfOptions& reference = {});

/// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Symplecticity

struct JacobianSample {
  double t = 0.0;
  PhaseMat matrix;  // d z(t) / d z(0), z = (q, p)
  double det = 1.0;
};

/// Jacobian of the whole-trajectory map, built by chaining the exact
/// one-step Jacobians from forward-mode differentiation. det is the running
/// product of the one-step determinants. Sample 0 is the identity at s0.t.
std::vector<JacobianSample> jacobian_determinant(const Method& method, const SystemModel& system,
                                                 const State& s0, double tau, long n_steps,
                                                 long sample_every = 1);

/// max |S^T J S - J| with J = [[0, I], [-I, 0]] in (q, p) ordering.
double symplectic_defect(const PhaseMat& s);

// ---------------------------------------------------------------------------
// Poincare sections

struct SectionSpec {
  int coordinate = 0;       // crosses zero
  int momentum = 0;         // must be positive at the crossing
  bool wrap_angle = false;  // compare the coordinate after wrapping to (-pi, pi]
  double tolerance = 1e-10;
  int max_iterations = 80;
};

/// x = 0 with px > 0 for the Henon-Heiles models, phi = 0 with pphi > 0 for
/// the spring pendulum.
SectionSpec default_section(const SystemModel& system);

/// Section coordinate value of s under `spec` (wrapped when requested).
double section_value(const SectionSpec& spec, const State& s);

struct SectionPoints {
  SectionSpec spec;
  std::vector<State> points;
  int skipped = 0;  // crossings whose refinement did not converge
};

/// Crossings are located between consecutive steps and refined by bisection
/// on the step length from the pre-crossing state, so every stored point lies
/// on the numerical flow. An orbit that stays on the section throws
/// Error(Input).
SectionPoints poincare_section(const Method& method, const SystemModel& system, const State& s0,
                               double tau, double t_end, const SectionSpec& spec);

// ---------------------------------------------------------------------------
// Fast Lyapunov indicator

struct FliOptions {
  double d0 = 1e-8;
  /// Unit deviation in (q, p); defaults to the normalized all-ones vector.
  std::optional<PhaseVec> direction;
  /// The shadow orbit is pulled back to distance d0 once d / d0 exceeds this.
  double renorm_threshold = 1e6;
  long sample_every = 1;
};

struct FliResult {
  std::vector<double> times;
  std::vector<double> values;  // log10 of accumulated separation growth
  int renormalizations = 0;

  double final_value() const { return values.empty() ? 0.0 : values.back(); }
};

/// Two-orbit FLI with renormalization. Throws Error(Parameter) for d0 <= 0
/// or a zero direction.
FliResult fli(const Method& method, const SystemModel& system, const State& s0, double tau,
              double t_end, const FliOptions& options = {});

// ---------------------------------------------------------------------------
// 0-1 test for chaos

using Observable = std::function<double(const State&)>;

struct ZeroOneOptions {
  double c = 1.8;
  double T = 1e5;            // averaging window for the mean-square displacement
  double sample_step = 1.0;  // spacing of the s-grid and lag grid
  int lag_count = 1000;      // log-spaced lags in [t_max / 10, t_max], deduplicated
  /// When > 0, report the median growth rate over this many c drawn
  /// uniformly from (0.5, pi - 0.5) with `seed`.
  int random_c = 0;
  std::uint64_t seed = 0;
  Observable observable;  // defaults to the first coordinate
};

struct ZeroOneResult {
  double lambda = 0.0;
  bool degenerate = false;  // L(t) vanished; lambda reported as 0
  int points_used = 0;
  double residual = 0.0;  // RMS residual of the log-log fit
  double c = 0.0;         // c of the reported fit (the median one in random mode)
  double T = 0.0;
  double sample_step = 0.0;
  std::vector<double> lag_times;
  std::vector<double> log_msd;  // ln L at lag_times
};

/// 0-1 test on a sampled observable psi_k = psi(k dt). The series must cover
/// [0, T + t_max].
ZeroOneResult zero_one_from_series(std::span<const double> psi, double dt, double t_max,
                                   const ZeroOneOptions& options);

/// Integrates s0 over [0, T + t_max] with step tau and runs the 0-1 test on
/// the observable.
ZeroOneResult zero_one_test(const Method& method, const SystemModel& system, const State& s0,
                            double tau, double t_max, const ZeroOneOptions& options = {});

}  // namespace fgsi
