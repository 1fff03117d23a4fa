#pragma once

#include <Eigen/Dense>

#include "mgopcon/errors.hpp"

namespace mgopcon {

/// Saturation of x into [lo, hi]. Bounds must satisfy lo <= hi.
template <typename Scalar>
inline Scalar sat(Scalar lo, Scalar x, Scalar hi) {
  if (lo > hi) throw ValidationError("sat: lower bound exceeds upper bound");
  return x > hi ? hi : (x < lo ? lo : x);
}

/// Element-wise saturation for dense vectors/matrices of equal shape.
template <typename DL, typename DX, typename DH>
inline auto sat(const Eigen::MatrixBase<DL>& lo, const Eigen::MatrixBase<DX>& x,
                const Eigen::MatrixBase<DH>& hi) {
  if (!(lo.array() <= hi.array()).all())
    throw ValidationError("sat: lower bound exceeds upper bound");
  return x.cwiseMax(lo).cwiseMin(hi).eval();
}

/// Unchecked scalar clamp for hot paths where lo <= hi holds by construction.
inline double clamp_unchecked(double lo, double x, double hi) {
  return x > hi ? hi : (x < lo ? lo : x);
}

}  // namespace mgopcon
