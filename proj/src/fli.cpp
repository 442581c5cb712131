#include <cmath>

#include "fgsi/diagnostics.hpp"

namespace fgsi {

FliResult fli(const Method& method, const SystemModel& system, const State& s0, double tau,
              double t_end, const FliOptions& options) {
  validate_state(system, s0);
  if (!(options.d0 > 0.0)) throw Error(ErrorKind::Parameter, "FLI needs d0 > 0");
  if (!(tau > 0.0) || !(t_end > s0.t))
    throw Error(ErrorKind::Parameter, "need tau > 0 and t_end > t0");
  if (options.sample_every < 1) throw Error(ErrorKind::Parameter, "sample_every must be >= 1");
  if (!(options.renorm_threshold > 1.0))
    throw Error(ErrorKind::Parameter, "renormalization threshold must exceed 1");

  const int dim = 2 * s0.dim();
  PhaseVec dir = options.direction ? *options.direction : PhaseVec::Ones(dim);
  if (dir.size() != dim) throw Error(ErrorKind::Parameter, "deviation direction has wrong size");
  const double norm = dir.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw Error(ErrorKind::Parameter, "deviation direction must be nonzero");
  dir /= norm;

  State base = s0;
  State shadow = State::from_phase(s0.phase() + options.d0 * dir, s0.t);
  validate_state(system, shadow);

  FliResult out;
  out.times.push_back(s0.t);
  out.values.push_back(0.0);

  const long n_steps = std::lround((t_end - s0.t) / tau);
  double accumulated = 0.0;
  for (long k = 1; k <= n_steps; ++k) {
    base = method.step(system, base, tau);
    shadow = method.step(system, shadow, tau);
    const PhaseVec sep = shadow.phase() - base.phase();
    const double d = sep.norm();
    if (!std::isfinite(d)) throw Error(ErrorKind::Overflow, "non-finite orbit separation");
    const double ratio = d / options.d0;
    double value = accumulated + std::log10(ratio);
    if (ratio > options.renorm_threshold) {
      accumulated = value;
      shadow = State::from_phase(base.phase() + (options.d0 / d) * sep, base.t);
      ++out.renormalizations;
    }
    if (k % options.sample_every == 0 || k == n_steps) {
      out.times.push_back(s0.t + static_cast<double>(k) * tau);
      out.values.push_back(value);
    }
  }
  return out;
}

}  // namespace fgsi
