#pragma once

#include <span>

#include "fgsi/stepper.hpp"

namespace fgsi {

/// Hamilton's equations for the full H: (K_p, -K_q - V_q).
PhaseVec hamiltonian_field(const SystemModel& system, const State& s);

State rk4_step(const SystemModel& system, const State& s, double tau);

Trajectory rk4_integrate(const SystemModel& system, const State& s0, double tau, long n_steps,
                         long sample_every = 1);

struct RkfOptions {
  double tol = 1e-14;
  double safety = 0.9;
  double min_factor = 0.2;
  double max_factor = 5.0;
  double initial_step = 1e-2;
  long max_steps = 100'000'000;
};

/// Adaptive embedded Runge-Kutta-Fehlberg 7(8) integration, advancing the
/// eighth-order solution. Steps are shortened to land exactly on every
/// requested output time, which must be non-decreasing and not before s0.t.
Trajectory rkf89_integrate(const SystemModel& system, const State& s0,
                           std::span<const double> output_times,
                           const RkfOptions& options = {});

/// Outputs at s0.t + k dt for k = 0..round((t_end - s0.t) / dt), last at t_end.
Trajectory rkf89_integrate(const SystemModel& system, const State& s0, double t_end,
                           double output_interval, const RkfOptions& options = {});

}  // namespace fgsi
