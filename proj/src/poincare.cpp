#include <cmath>
#include <numbers>

#include "fgsi/diagnostics.hpp"

namespace fgsi {

SectionSpec default_section(const SystemModel& system) {
  SectionSpec spec;
  if (system.angle_coordinate() >= 0) {
    spec.coordinate = system.angle_coordinate();
    spec.momentum = system.angle_coordinate();
    spec.wrap_angle = true;
  }
  return spec;
}

double section_value(const SectionSpec& spec, const State& s) {
  const double v = s.q[spec.coordinate];
  return spec.wrap_angle ? std::remainder(v, 2.0 * std::numbers::pi) : v;
}

namespace {

bool straddles(const SectionSpec& spec, double a, double b) {
  if (!((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0))) return false;
  // A jump across the +-pi seam is not a crossing of zero.
  return !spec.wrap_angle || std::abs(a - b) < std::numbers::pi;
}

}  // namespace

SectionPoints poincare_section(const Method& method, const SystemModel& system, const State& s0,
                               double tau, double t_end, const SectionSpec& spec) {
  validate_state(system, s0);
  if (!(tau > 0.0) || !(t_end > s0.t))
    throw Error(ErrorKind::Parameter, "need tau > 0 and t_end > t0");
  if (spec.coordinate < 0 || spec.coordinate >= s0.dim() || spec.momentum < 0 ||
      spec.momentum >= s0.dim())
    throw Error(ErrorKind::Parameter, "section indices out of range");

  SectionPoints out;
  out.spec = spec;
  const long n_steps = std::lround((t_end - s0.t) / tau);
  State prev = s0;
  double f_prev = section_value(spec, prev);
  int on_section_run = std::abs(f_prev) <= spec.tolerance ? 1 : 0;

  for (long k = 1; k <= n_steps; ++k) {
    State cur = method.step(system, prev, tau);
    cur.t = s0.t + static_cast<double>(k) * tau;
    const double f_cur = section_value(spec, cur);

    if (std::abs(f_cur) <= spec.tolerance) {
      if (++on_section_run >= 3)
        throw Error(ErrorKind::Input, "orbit does not leave the section surface");
      if (std::abs(f_prev) > spec.tolerance && cur.p[spec.momentum] > 0.0)
        out.points.push_back(cur);
    } else {
      on_section_run = 0;
      if (std::abs(f_prev) > spec.tolerance && straddles(spec, f_prev, f_cur)) {
        double lo = 0.0, hi = tau;
        bool converged = false;
        State mid_state;
        for (int it = 0; it < spec.max_iterations; ++it) {
          const double mid = 0.5 * (lo + hi);
          mid_state = method.step(system, prev, mid);
          const double f_mid = section_value(spec, mid_state);
          if (std::abs(f_mid) <= spec.tolerance) {
            converged = true;
            break;
          }
          if ((f_mid < 0.0) == (f_prev < 0.0))
            lo = mid;
          else
            hi = mid;
        }
        if (!converged)
          ++out.skipped;
        else if (mid_state.p[spec.momentum] > 0.0)
          out.points.push_back(mid_state);
      }
    }
    prev = std::move(cur);
    f_prev = f_cur;
  }
  return out;
}

}  // namespace fgsi
