#include <algorithm>
#include <cmath>

#include "fgsi/diagnostics.hpp"

namespace fgsi {

double ErrorSeries::max() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

ErrorSeries energy_error_series(const Trajectory& traj, double e0) {
  if (traj.empty()) throw Error(ErrorKind::Input, "empty trajectory");
  ErrorSeries out;
  out.times.reserve(traj.size());
  out.values.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out.times.push_back(traj.states[k].t);
    out.values.push_back(std::abs(traj.energies[k] - e0));
  }
  return out;
}

ErrorSeries position_error_series(const Trajectory& traj, const Trajectory& reference) {
  if (traj.size() != reference.size())
    throw Error(ErrorKind::Input, "trajectories have different sample counts");
  ErrorSeries out;
  out.times.reserve(traj.size());
  out.values.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double t = traj.states[k].t;
    const double tr = reference.states[k].t;
    if (std::abs(t - tr) > 1e-9 * std::max(1.0, std::abs(t)))
      throw Error(ErrorKind::Input, "trajectories are sampled at different times");
    out.times.push_back(t);
    out.values.push_back((traj.states[k].q - reference.states[k].q).norm());
  }
  return out;
}

}  // namespace fgsi
