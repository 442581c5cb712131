#pragma once

#include <sstream>
#include <variant>

#include "fgsi/scheme.hpp"
#include "fgsi/system.hpp"

namespace fgsi::detail {

template <class T>
void grad_kick(const SystemModel& system, const VecT<T>& q, VecT<T>& p, double dtau,
               double gtau3) {
  if (dtau == 0.0 && gtau3 == 0.0) return;
  const VecT<T> f = system.potential_gradient(q);
  p -= dtau * f;
  if (gtau3 != 0.0) {
    const MatT<T> hess = system.potential_hessian(q);
    const MatT<T> a = system.kinetic_a(q);
    const Tensor3T<T> da = system.kinetic_da(q);
    // K_pp = 2a and K_qpp = 2da.
    VecT<T> d = 4.0 * (hess * (a * f));
    for (int i = 0; i < da.n; ++i) d[i] += 2.0 * f.dot(da.slice[i] * f);
    p += gtau3 * d;
  }
  if (!all_finite(p)) throw Error(ErrorKind::Overflow, "non-finite momenta after kick");
}

template <class T>
void drift(const SystemModel& system, VecT<T>& q, VecT<T>& p, double h) {
  if constexpr (std::is_same_v<T, double>) {
    State s(q, p);
    s = system.kinetic_flow(s, h);
    q = s.q;
    p = s.p;
  } else {
    system.kinetic_flow(q, p, h);
  }
  if (!all_finite(q) || !all_finite(p))
    throw Error(ErrorKind::Overflow, "non-finite state after drift");
  system.check_domain(values_of(q));
}

template <class T>
void apply_stages(const SchemeSpec& scheme, const SystemModel& system, VecT<T>& q, VecT<T>& p,
                  double tau) {
  const double tau3 = tau * tau * tau;
  for (std::size_t i = 0; i < scheme.stages.size(); ++i) {
    try {
      if (const auto* d = std::get_if<Drift>(&scheme.stages[i])) {
        drift(system, q, p, d->c * tau);
      } else {
        const auto& k = std::get<GradKick>(scheme.stages[i]);
        grad_kick(system, q, p, k.d * tau, k.g * tau3);
      }
    } catch (const Error& e) {
      std::ostringstream os;
      os << scheme.name << " stage " << i << ": " << e.what();
      throw Error(e.kind(), os.str());
    }
  }
}

/// (K_p, -K_q - V_q) stacked as (dq, dp).
template <class T>
void hamiltonian_field(const SystemModel& system, const VecT<T>& q, const VecT<T>& p,
                       VecT<T>& dq, VecT<T>& dp) {
  system.check_domain(values_of(q));
  const Tensor3T<T> da = system.kinetic_da(q);
  VecT<T> kq = system.kinetic_db(q) * p;
  for (int i = 0; i < da.n; ++i) kq[i] += p.dot(da.slice[i] * p);
  dq = 2.0 * (system.kinetic_a(q) * p) + system.kinetic_b(q);
  dp = -kq - system.potential_gradient(q);
  if (!all_finite(dq) || !all_finite(dp))
    throw Error(ErrorKind::Overflow, "non-finite vector field");
}

template <class T>
void rk4(const SystemModel& system, VecT<T>& q, VecT<T>& p, double tau) {
  VecT<T> k1q, k1p, k2q, k2p, k3q, k3p, k4q, k4p;
  hamiltonian_field(system, q, p, k1q, k1p);
  hamiltonian_field<T>(system, q + 0.5 * tau * k1q, p + 0.5 * tau * k1p, k2q, k2p);
  hamiltonian_field<T>(system, q + 0.5 * tau * k2q, p + 0.5 * tau * k2p, k3q, k3p);
  hamiltonian_field<T>(system, q + tau * k3q, p + tau * k3p, k4q, k4p);
  q += (tau / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
  p += (tau / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
}

}  // namespace fgsi::detail
