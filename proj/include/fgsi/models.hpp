#pragma once

#include <cmath>

#include "fgsi/system.hpp"

namespace fgsi {

namespace detail {

template <class T>
T henon_heiles_potential(const VecT<T>& q) {
  const T& x = q[0];
  const T& y = q[1];
  return 0.5 * (x * x + y * y) + x * x * y - y * y * y / 3.0;
}

template <class T>
VecT<T> henon_heiles_gradient(const VecT<T>& q) {
  const T& x = q[0];
  const T& y = q[1];
  VecT<T> g(2);
  g << x + 2.0 * x * y, y + x * x - y * y;
  return g;
}

template <class T>
MatT<T> henon_heiles_hessian(const VecT<T>& q) {
  const T& x = q[0];
  const T& y = q[1];
  MatT<T> h(2, 2);
  h << 1.0 + 2.0 * y, 2.0 * x, 2.0 * x, 1.0 - 2.0 * y;
  return h;
}

}  // namespace detail

/// Henon-Heiles potential with the position-dependent kinetic energy
/// K = (y px^2 + py^2) / 2.
class ModifiedHenonHeiles final : public ModelBase<ModifiedHenonHeiles> {
 public:
  std::string_view id() const override { return "mhh"; }
  int dim() const override { return 2; }
  std::vector<std::string> coordinate_names() const override { return {"x", "y"}; }
  std::vector<std::string> momentum_names() const override { return {"px", "py"}; }

  template <class T>
  T potential_t(const VecT<T>& q) const { return detail::henon_heiles_potential(q); }
  template <class T>
  VecT<T> gradient_t(const VecT<T>& q) const { return detail::henon_heiles_gradient(q); }
  template <class T>
  MatT<T> hessian_t(const VecT<T>& q) const { return detail::henon_heiles_hessian(q); }

  template <class T>
  MatT<T> metric_t(const VecT<T>& q) const {
    MatT<T> a = MatT<T>::Zero(2, 2);
    a(0, 0) = 0.5 * q[1];
    a(1, 1) = T(0.5);
    return a;
  }

  template <class T>
  Tensor3T<T> metric_derivative_t(const VecT<T>&) const {
    Tensor3T<T> da = Tensor3T<T>::zero(2);
    da(1, 0, 0) = T(0.5);
    return da;
  }

  // x' = y px, y' = py, px' = 0, py' = -px^2 / 2.
  template <class T>
  void flow_t(VecT<T>& q, VecT<T>& p, double h) const {
    const T x = q[0], y = q[1], px = p[0], py = p[1];
    const T px2 = px * px;
    q[0] = x + px * (y * h + 0.5 * py * h * h - px2 * (h * h * h / 12.0));
    q[1] = y + py * h - 0.25 * px2 * h * h;
    p[1] = py - 0.5 * px2 * h;
  }
};

/// Classical Henon-Heiles, K = (px^2 + py^2) / 2.
class StandardHenonHeiles final : public ModelBase<StandardHenonHeiles> {
 public:
  std::string_view id() const override { return "hh"; }
  int dim() const override { return 2; }
  std::vector<std::string> coordinate_names() const override { return {"x", "y"}; }
  std::vector<std::string> momentum_names() const override { return {"px", "py"}; }

  template <class T>
  T potential_t(const VecT<T>& q) const { return detail::henon_heiles_potential(q); }
  template <class T>
  VecT<T> gradient_t(const VecT<T>& q) const { return detail::henon_heiles_gradient(q); }
  template <class T>
  MatT<T> hessian_t(const VecT<T>& q) const { return detail::henon_heiles_hessian(q); }

  template <class T>
  MatT<T> metric_t(const VecT<T>&) const {
    MatT<T> a = MatT<T>::Zero(2, 2);
    a(0, 0) = a(1, 1) = T(0.5);
    return a;
  }

  template <class T>
  Tensor3T<T> metric_derivative_t(const VecT<T>&) const { return Tensor3T<T>::zero(2); }

  template <class T>
  void flow_t(VecT<T>& q, VecT<T>& p, double h) const {
    for (int i = 0; i < 2; ++i) q[i] += h * p[i];
  }
};

/// Elastic pendulum in polar coordinates q = (r, phi):
///   K = (pr^2 + pphi^2 / r^2) / 2,  V = -r cos(phi) + (r - 1)^2.
class SpringPendulum final : public ModelBase<SpringPendulum> {
 public:
  /// Evaluations at r <= kMinRadius are hard errors.
  static constexpr double kMinRadius = 1e-10;

  std::string_view id() const override { return "spring"; }
  int dim() const override { return 2; }
  std::vector<std::string> coordinate_names() const override { return {"r", "phi"}; }
  std::vector<std::string> momentum_names() const override { return {"pr", "pphi"}; }
  int angle_coordinate() const override { return 1; }

  void check_domain(const Vec& q) const override;

  template <class T>
  T potential_t(const VecT<T>& q) const {
    using std::cos;
    return -q[0] * cos(q[1]) + (q[0] - 1.0) * (q[0] - 1.0);
  }

  template <class T>
  VecT<T> gradient_t(const VecT<T>& q) const {
    using std::cos;
    using std::sin;
    VecT<T> g(2);
    g << -cos(q[1]) + 2.0 * (q[0] - 1.0), q[0] * sin(q[1]);
    return g;
  }

  template <class T>
  MatT<T> hessian_t(const VecT<T>& q) const {
    using std::cos;
    using std::sin;
    const T s = sin(q[1]);
    MatT<T> h(2, 2);
    h << T(2.0), s, s, q[0] * cos(q[1]);
    return h;
  }

  template <class T>
  MatT<T> metric_t(const VecT<T>& q) const {
    MatT<T> a = MatT<T>::Zero(2, 2);
    a(0, 0) = T(0.5);
    a(1, 1) = 0.5 / (q[0] * q[0]);
    return a;
  }

  template <class T>
  Tensor3T<T> metric_derivative_t(const VecT<T>& q) const {
    Tensor3T<T> da = Tensor3T<T>::zero(2);
    da(0, 1, 1) = -1.0 / (q[0] * q[0] * q[0]);
    return da;
  }

  /// Free flight in Cartesian coordinates mapped back to polar form. The
  /// angle increment is the signed angle swept by the position vector, so
  /// phi stays continuous.
  template <class T>
  void flow_t(VecT<T>& q, VecT<T>& p, double h) const {
    using std::atan2;
    using std::cos;
    using std::sin;
    const T r = q[0], phi = q[1], pr = p[0], pphi = p[1];
    const T c = cos(phi), sn = sin(phi);
    const T x = r * c, y = r * sn;
    const T vt = pphi / r;
    const T vx = pr * c - vt * sn;
    const T vy = pr * sn + vt * c;
    const T x1 = x + vx * h;
    const T y1 = y + vy * h;
    const T r1 = radius(x1, y1);
    check_flight(value_of(x), value_of(y), value_of(vx), value_of(vy), value_of(r1), h);
    q[0] = r1;
    q[1] = phi + atan2(x * y1 - y * x1, x * x1 + y * y1);
    p[0] = (x1 * vx + y1 * vy) / r1;
  }

 private:
  /// Throws Error(Singularity) when the segment passes within kMinRadius of
  /// the origin.
  static void check_flight(double x, double y, double vx, double vy, double r1, double h);
};

}  // namespace fgsi
