#include "fgsi/stepper.hpp"

#include <cmath>
#include <sstream>

#include "fgsi/reference.hpp"
#include "kernels.hpp"

namespace fgsi {

State grad_kick(const SystemModel& system, const State& s, double dtau, double gtau3) {
  State out = s;
  detail::grad_kick(system, out.q, out.p, dtau, gtau3);
  return out;
}

State step(const SchemeSpec& scheme, const SystemModel& system, const State& s, double tau) {
  State cur = s;
  detail::apply_stages(scheme, system, cur.q, cur.p, tau);
  cur.t = s.t + tau;
  return cur;
}

Method Method::by_name(std::string_view name) {
  if (name == "rk4") return rk4();
  return scheme(find_scheme(name));
}

State Method::step(const SystemModel& system, const State& s, double tau) const {
  if (spec_) return fgsi::step(*spec_, system, s, tau);
  return rk4_step(system, s, tau);
}

StepTangent Method::step_tangent(const SystemModel& system, const State& s, double tau) const {
  const int n = s.dim();
  DualVec q(n), p(n);
  for (int i = 0; i < n; ++i) {
    q[i] = Dual(s.q[i], 2 * n, i);
    p[i] = Dual(s.p[i], 2 * n, n + i);
  }
  if (spec_)
    detail::apply_stages(*spec_, system, q, p, tau);
  else
    detail::rk4(system, q, p, tau);

  StepTangent out;
  out.next = State(values_of(q), values_of(p), s.t + tau);
  out.jacobian.resize(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    out.jacobian.row(i) = q[i].derivatives().transpose();
    out.jacobian.row(n + i) = p[i].derivatives().transpose();
  }
  return out;
}

std::string_view Method::name() const { return spec_ ? std::string_view(spec_->name) : "rk4"; }

std::vector<std::string> method_names() {
  std::vector<std::string> out;
  for (const auto& s : scheme_registry()) out.push_back(s.name);
  out.emplace_back("rk4");
  out.emplace_back("rkf89");
  return out;
}

void Trajectory::push(const SystemModel& system, const State& s) {
  states.push_back(s);
  energies.push_back(system.kinetic(s.q, s.p) + system.potential(s.q));
}

Trajectory integrate(const Method& method, const SystemModel& system, const State& s0,
                     double tau, long n_steps, long sample_every) {
  if (n_steps < 1) throw Error(ErrorKind::Parameter, "n_steps must be >= 1");
  if (sample_every < 1) throw Error(ErrorKind::Parameter, "sample_every must be >= 1");
  if (!(std::isfinite(tau) && tau != 0.0))
    throw Error(ErrorKind::Parameter, "time step must be finite and nonzero");
  validate_state(system, s0);

  Trajectory traj;
  traj.states.reserve(static_cast<std::size_t>(n_steps / sample_every + 2));
  traj.energies.reserve(traj.states.capacity());
  traj.push(system, s0);
  State cur = s0;
  for (long k = 1; k <= n_steps; ++k) {
    try {
      cur = method.step(system, cur, tau);
    } catch (const Error& e) {
      std::ostringstream os;
      os << "step " << k << " (t = " << s0.t + static_cast<double>(k - 1) * tau
         << "): " << e.what();
      traj.failure = Failure{e.kind(), os.str()};
      return traj;
    }
    cur.t = s0.t + static_cast<double>(k) * tau;
    if (k % sample_every == 0 || k == n_steps) traj.push(system, cur);
  }
  return traj;
}

}  // namespace fgsi
