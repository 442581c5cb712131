#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fgsi/dual.hpp"
#include "fgsi/errors.hpp"
#include "fgsi/types.hpp"

namespace fgsi {

/// Hamiltonian H = K(p, q) + V(q) with
///   K = sum_jk a_jk(q) p_j p_k + sum_i b_i(q) p_i
/// and an exactly solvable K-flow.
///
/// Implementations hold no mutable state and may be shared across threads.
/// The virtual methods assume their arguments already passed check_domain();
/// the free functions below do the validation.
class SystemModel {
 public:
  virtual ~SystemModel() = default;

  virtual std::string_view id() const = 0;
  virtual int dim() const = 0;
  virtual std::vector<std::string> coordinate_names() const = 0;
  virtual std::vector<std::string> momentum_names() const = 0;

  /// Index of the coordinate that is an angle, or -1.
  virtual int angle_coordinate() const { return -1; }

  /// Throws Error(Domain) when q lies outside the model's domain.
  virtual void check_domain(const Vec& q) const { (void)q; }

  virtual double potential(const Vec& q) const = 0;
  virtual Vec potential_gradient(const Vec& q) const = 0;
  virtual Mat potential_hessian(const Vec& q) const = 0;

  /// Symmetric kinetic metric a(q).
  virtual Mat kinetic_a(const Vec& q) const = 0;
  /// da[i](j, k) = d a_jk / d q_i.
  virtual Tensor3 kinetic_da(const Vec& q) const = 0;
  /// Linear kinetic coefficients b(q); zero unless overridden.
  virtual Vec kinetic_b(const Vec& q) const { return Vec::Zero(q.size()); }
  /// db(i, j) = d b_j / d q_i; zero unless overridden.
  virtual Mat kinetic_db(const Vec& q) const { return Mat::Zero(q.size(), q.size()); }

  /// Exact flow of K alone over time h. Advances t by h.
  virtual State kinetic_flow(const State& s, double h) const = 0;

  // Forward-mode versions of the above, used to propagate exact tangent maps.
  virtual DualVec potential_gradient(const DualVec& q) const = 0;
  virtual DualMat potential_hessian(const DualVec& q) const = 0;
  virtual DualMat kinetic_a(const DualVec& q) const = 0;
  virtual DualTensor3 kinetic_da(const DualVec& q) const = 0;
  virtual DualVec kinetic_b(const DualVec& q) const { return DualVec::Zero(q.size()); }
  virtual DualMat kinetic_db(const DualVec& q) const {
    return DualMat::Zero(q.size(), q.size());
  }
  /// In-place K-flow over time h.
  virtual void kinetic_flow(DualVec& q, DualVec& p, double h) const = 0;

  double kinetic(const Vec& q, const Vec& p) const {
    return p.dot(kinetic_a(q) * p) + kinetic_b(q).dot(p);
  }
};

/// Implements both scalar flavours of SystemModel from member templates of
/// Derived: potential_t, gradient_t, hessian_t, metric_t, metric_derivative_t
/// and flow_t (in place). linear_t and linear_derivative_t default to zero.
template <class Derived>
class ModelBase : public SystemModel {
 public:
  double potential(const Vec& q) const override { return self().potential_t(q); }

  Vec potential_gradient(const Vec& q) const override { return self().gradient_t(q); }
  DualVec potential_gradient(const DualVec& q) const override { return self().gradient_t(q); }

  Mat potential_hessian(const Vec& q) const override { return self().hessian_t(q); }
  DualMat potential_hessian(const DualVec& q) const override { return self().hessian_t(q); }

  Mat kinetic_a(const Vec& q) const override { return self().metric_t(q); }
  DualMat kinetic_a(const DualVec& q) const override { return self().metric_t(q); }

  Tensor3 kinetic_da(const Vec& q) const override { return self().metric_derivative_t(q); }
  DualTensor3 kinetic_da(const DualVec& q) const override {
    return self().metric_derivative_t(q);
  }

  Vec kinetic_b(const Vec& q) const override { return self().linear_t(q); }
  DualVec kinetic_b(const DualVec& q) const override { return self().linear_t(q); }

  Mat kinetic_db(const Vec& q) const override { return self().linear_derivative_t(q); }
  DualMat kinetic_db(const DualVec& q) const override {
    return self().linear_derivative_t(q);
  }

  State kinetic_flow(const State& s, double h) const override {
    if (h == 0.0) return s;
    State out = s;
    self().flow_t(out.q, out.p, h);
    out.t = s.t + h;
    return out;
  }
  void kinetic_flow(DualVec& q, DualVec& p, double h) const override {
    if (h != 0.0) self().flow_t(q, p, h);
  }

  template <class T>
  VecT<T> linear_t(const VecT<T>& q) const {
    return VecT<T>::Zero(q.size());
  }
  template <class T>
  MatT<T> linear_derivative_t(const VecT<T>& q) const {
    return MatT<T>::Zero(q.size(), q.size());
  }

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }
};

using SystemPtr = std::shared_ptr<const SystemModel>;

/// Built-in ids: "mhh", "spring", "hh".
SystemPtr make_system(std::string_view id);
std::vector<std::string> system_ids();

/// Index of a coordinate or momentum by name; returns {is_momentum, index}.
/// Throws Error(Config) on unknown names.
std::pair<bool, int> variable_index(const SystemModel& system, std::string_view name);

// Validated operations.

double energy(const SystemModel& system, const State& s);
Vec v_gradient(const SystemModel& system, const Vec& q);
Mat v_hessian(const SystemModel& system, const Vec& q);
State k_flow(const SystemModel& system, const State& s, double h);
/// d^2 K / dp_j dp_k = 2 a_jk.
Mat k_pp(const SystemModel& system, const Vec& q);
/// d^3 K / dq_i dp_j dp_k = 2 da[i](j, k).
Tensor3 k_qpp(const SystemModel& system, const Vec& q);

/// Kinetic-energy gradient with respect to q at fixed p.
Vec k_q(const SystemModel& system, const Vec& q, const Vec& p);
/// Kinetic-energy gradient with respect to p at fixed q.
Vec k_p(const SystemModel& system, const Vec& q, const Vec& p);

/// Installs the positive root of K(p) = E - V(q) in momentum `unknown`,
/// keeping the other momenta of `s`. When both roots are positive the larger
/// one is taken. Throws Error(InfeasibleEnergy) when no positive real root
/// exists.
State solve_missing_momentum(const SystemModel& system, const State& s, int unknown,
                             double target_energy);

/// Throws Error(Input) when s has the wrong dimension or non-finite entries,
/// then delegates to check_domain.
void validate_state(const SystemModel& system, const State& s);

}  // namespace fgsi
