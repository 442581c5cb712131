#include "fgsi/system.hpp"

#include <cmath>
#include <sstream>

#include "fgsi/models.hpp"

namespace fgsi {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Input: return "input";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::InfeasibleEnergy: return "infeasible-energy";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

SystemPtr make_system(std::string_view id) {
  if (id == "mhh") return std::make_shared<ModifiedHenonHeiles>();
  if (id == "hh") return std::make_shared<StandardHenonHeiles>();
  if (id == "spring") return std::make_shared<SpringPendulum>();
  std::ostringstream os;
  os << "unknown system '" << id << "' (valid: mhh, hh, spring)";
  throw Error(ErrorKind::Config, os.str());
}

std::vector<std::string> system_ids() { return {"mhh", "hh", "spring"}; }

std::pair<bool, int> variable_index(const SystemModel& system, std::string_view name) {
  const auto qs = system.coordinate_names();
  const auto ps = system.momentum_names();
  for (int i = 0; i < static_cast<int>(qs.size()); ++i)
    if (qs[i] == name) return {false, i};
  for (int i = 0; i < static_cast<int>(ps.size()); ++i)
    if (ps[i] == name) return {true, i};
  std::ostringstream os;
  os << "system '" << system.id() << "' has no variable '" << name << "'";
  throw Error(ErrorKind::Config, os.str());
}

namespace {

void validate_coordinates(const SystemModel& system, const Vec& q) {
  if (q.size() != system.dim())
    throw Error(ErrorKind::Input, "coordinate vector has wrong dimension");
  if (!q.allFinite()) throw Error(ErrorKind::Input, "non-finite coordinates");
  system.check_domain(q);
}

}  // namespace

void validate_state(const SystemModel& system, const State& s) {
  if (s.q.size() != system.dim() || s.p.size() != system.dim())
    throw Error(ErrorKind::Input, "state has wrong dimension");
  if (!s.finite()) throw Error(ErrorKind::Input, "non-finite state");
  system.check_domain(s.q);
}

double energy(const SystemModel& system, const State& s) {
  validate_state(system, s);
  return system.kinetic(s.q, s.p) + system.potential(s.q);
}

Vec v_gradient(const SystemModel& system, const Vec& q) {
  validate_coordinates(system, q);
  return system.potential_gradient(q);
}

Mat v_hessian(const SystemModel& system, const Vec& q) {
  validate_coordinates(system, q);
  return system.potential_hessian(q);
}

State k_flow(const SystemModel& system, const State& s, double h) {
  validate_state(system, s);
  if (!std::isfinite(h)) throw Error(ErrorKind::Input, "non-finite time increment");
  return system.kinetic_flow(s, h);
}

Mat k_pp(const SystemModel& system, const Vec& q) {
  validate_coordinates(system, q);
  return 2.0 * system.kinetic_a(q);
}

Tensor3 k_qpp(const SystemModel& system, const Vec& q) {
  validate_coordinates(system, q);
  Tensor3 t = system.kinetic_da(q);
  for (int i = 0; i < t.n; ++i) t.slice[i] *= 2.0;
  return t;
}

Vec k_q(const SystemModel& system, const Vec& q, const Vec& p) {
  const Tensor3 da = system.kinetic_da(q);
  Vec out = system.kinetic_db(q) * p;
  for (int i = 0; i < da.n; ++i) out[i] += p.dot(da.slice[i] * p);
  return out;
}

Vec k_p(const SystemModel& system, const Vec& q, const Vec& p) {
  return 2.0 * (system.kinetic_a(q) * p) + system.kinetic_b(q);
}

State solve_missing_momentum(const SystemModel& system, const State& s, int unknown,
                             double target_energy) {
  if (unknown < 0 || unknown >= system.dim())
    throw Error(ErrorKind::Input, "closure momentum index out of range");
  if (!std::isfinite(target_energy)) throw Error(ErrorKind::Input, "non-finite energy");
  State out = s;
  out.p[unknown] = 0.0;
  validate_state(system, out);

  // K(p_m) = alpha p_m^2 + beta p_m + K0, solved against E - V.
  const Mat a = system.kinetic_a(out.q);
  const Vec b = system.kinetic_b(out.q);
  const double alpha = a(unknown, unknown);
  double beta = b[unknown];
  for (int j = 0; j < system.dim(); ++j)
    if (j != unknown) beta += 2.0 * a(unknown, j) * out.p[j];
  const double k0 = system.kinetic(out.q, out.p);
  const double gamma = k0 - (target_energy - system.potential(out.q));

  auto infeasible = [&] {
    std::ostringstream os;
    os << "no positive momentum '" << system.momentum_names()[unknown]
       << "' reaches energy " << target_energy;
    return Error(ErrorKind::InfeasibleEnergy, os.str());
  };

  double root = -1.0;
  if (alpha == 0.0) {
    if (beta == 0.0) throw infeasible();
    root = -gamma / beta;
  } else {
    const double disc = beta * beta - 4.0 * alpha * gamma;
    if (disc < 0.0) throw infeasible();
    // Cancellation-free pair of roots.
    const double w = -0.5 * (beta + std::copysign(std::sqrt(disc), beta));
    const double r1 = w / alpha;
    const double r2 = w != 0.0 ? gamma / w : r1;
    root = std::max(r1, r2);
  }
  if (!(root > 0.0) || !std::isfinite(root)) throw infeasible();
  out.p[unknown] = root;
  return out;
}

}  // namespace fgsi
