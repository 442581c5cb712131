#pragma once

#include <array>
#include <cmath>

#include <Eigen/Core>

namespace fgsi {

/// Largest configuration-space dimension supported without heap allocation.
inline constexpr int kMaxDim = 4;

template <class T>
using VecT = Eigen::Matrix<T, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
template <class T>
using MatT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

using Vec = VecT<double>;
using Mat = MatT<double>;
using PhaseVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 2 * kMaxDim, 1>;
using PhaseMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 2 * kMaxDim, 2 * kMaxDim>;

/// Rank-3 tensor T[i](j, k), stored as n slices of n x n matrices.
template <class T>
struct Tensor3T {
  int n = 0;
  std::array<MatT<T>, kMaxDim> slice;

  static Tensor3T zero(int n) {
    Tensor3T t;
    t.n = n;
    for (int i = 0; i < n; ++i) t.slice[i] = MatT<T>::Zero(n, n);
    return t;
  }

  const T& operator()(int i, int j, int k) const { return slice[i](j, k); }
  T& operator()(int i, int j, int k) { return slice[i](j, k); }
};

using Tensor3 = Tensor3T<double>;

/// Phase-space point. Angles are stored unwrapped.
struct State {
  Vec q;
  Vec p;
  double t = 0.0;

  State() = default;
  State(Vec q_, Vec p_, double t_ = 0.0) : q(std::move(q_)), p(std::move(p_)), t(t_) {}

  int dim() const { return static_cast<int>(q.size()); }

  bool finite() const {
    return q.allFinite() && p.allFinite() && std::isfinite(t);
  }

  /// (q, p) stacked into one vector.
  PhaseVec phase() const {
    PhaseVec z(2 * dim());
    z << q, p;
    return z;
  }

  static State from_phase(const PhaseVec& z, double t) {
    const int n = static_cast<int>(z.size()) / 2;
    return State(z.head(n), z.tail(n), t);
  }
};

/// Euclidean distance over the raw (q, p) tuple.
inline double phase_distance(const State& a, const State& b) {
  return std::sqrt((a.q - b.q).squaredNorm() + (a.p - b.p).squaredNorm());
}

}  // namespace fgsi
