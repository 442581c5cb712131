#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fgsi/errors.hpp"
#include "fgsi/scheme.hpp"
#include "fgsi/system.hpp"

namespace fgsi {

/// p_i <- p_i - dtau V_qi + gtau3 D_i, where
///   D_i = sum_jk (2 V_qiqj V_qk K_pjpk + V_qj V_qk K_qipjpk).
/// D depends on q only, so the update is the exact flow of the stage.
State grad_kick(const SystemModel& system, const State& s, double dtau, double gtau3);

/// One step of a splitting scheme. Errors are rethrown with the failing
/// stage index in the message.
State step(const SchemeSpec& scheme, const SystemModel& system, const State& s, double tau);

/// One step together with its exact Jacobian d z_next / d z, z = (q, p).
struct StepTangent {
  State next;
  PhaseMat jacobian;
};

/// Fixed-step propagator: a splitting scheme or classical RK4.
class Method {
 public:
  static Method scheme(const SchemeSpec& spec) { return Method(&spec); }
  static Method rk4() { return Method(nullptr); }
  /// Any registry name or "rk4". Throws Error(Config) otherwise.
  static Method by_name(std::string_view name);

  State step(const SystemModel& system, const State& s, double tau) const;
  /// Same step, differentiated in forward mode.
  StepTangent step_tangent(const SystemModel& system, const State& s, double tau) const;
  std::string_view name() const;
  bool symplectic() const { return spec_ != nullptr; }
  const SchemeSpec* spec() const { return spec_; }

 private:
  explicit Method(const SchemeSpec* spec) : spec_(spec) {}
  const SchemeSpec* spec_;
};

/// Names accepted on the command line: the ten schemes plus rk4 and rkf89.
std::vector<std::string> method_names();

struct Failure {
  ErrorKind kind;
  std::string message;
};

/// Time-ordered samples of an orbit with cached energies. A run that hits a
/// numerical failure keeps the samples taken so far and records the failure.
struct Trajectory {
  std::vector<State> states;
  std::vector<double> energies;
  std::optional<Failure> failure;

  std::size_t size() const { return states.size(); }
  bool empty() const { return states.empty(); }
  void push(const SystemModel& system, const State& s);
};

/// Runs n_steps fixed steps. Sample k sits at t0 + k tau for every k that is
/// a multiple of sample_every, plus the final step.
Trajectory integrate(const Method& method, const SystemModel& system, const State& s0,
                     double tau, long n_steps, long sample_every = 1);

inline Trajectory integrate(const SchemeSpec& scheme, const SystemModel& system,
                            const State& s0, double tau, long n_steps, long sample_every = 1) {
  return integrate(Method::scheme(scheme), system, s0, tau, n_steps, sample_every);
}

}  // namespace fgsi
