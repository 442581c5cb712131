#pragma once

#include <random>

#include "fgsi/models.hpp"

namespace fgsi::test {

/// Random state well inside the domain of each model.
inline State random_state(const SystemModel& system, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  State s(Vec::Zero(system.dim()), Vec::Zero(system.dim()), 0.0);
  for (int i = 0; i < system.dim(); ++i) {
    s.q[i] = u(rng);
    s.p[i] = u(rng);
  }
  if (system.id() == "spring") {
    s.q[0] = 1.0 + 0.5 * u(rng);
    s.q[1] = 6.0 * u(rng);
  }
  if (system.id() == "mhh") s.q[1] = -1.0 + u(rng);  // keeps a(0,0) = y/2 away from 0
  return s;
}

inline double max_abs_diff(const State& a, const State& b) {
  return std::max((a.q - b.q).cwiseAbs().maxCoeff(), (a.p - b.p).cwiseAbs().maxCoeff());
}

}  // namespace fgsi::test
