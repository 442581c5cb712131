#pragma once

#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/AutoDiff>

#include "fgsi/types.hpp"

namespace fgsi {

/// Forward-mode scalar carrying derivatives with respect to the 2n phase
/// variables.
using Tangent = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 2 * kMaxDim, 1>;
using Dual = Eigen::AutoDiffScalar<Tangent>;
using DualVec = VecT<Dual>;
using DualMat = MatT<Dual>;
using DualTensor3 = Tensor3T<Dual>;

inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.value(); }

inline double radius(double x, double y) { return std::hypot(x, y); }
inline Dual radius(const Dual& x, const Dual& y) { return sqrt(x * x + y * y); }

template <class T>
bool all_finite(const VecT<T>& v) {
  for (int i = 0; i < v.size(); ++i)
    if (!std::isfinite(value_of(v[i]))) return false;
  return true;
}

template <class T>
VecT<double> values_of(const VecT<T>& v) {
  VecT<double> out(v.size());
  for (int i = 0; i < v.size(); ++i) out[i] = value_of(v[i]);
  return out;
}

}  // namespace fgsi
