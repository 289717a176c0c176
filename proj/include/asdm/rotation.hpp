#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cmath>
#include <stdexcept>

#include "asdm/quaternion.hpp"

namespace asdm {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;

/// The two-to-one covering SU(2) -> SO(3).  Columns of the result are the
/// coefficients of g i g^-1, g j g^-1, g k g^-1 in the basis {i, j, k}.
template <typename S>
inline Eigen::Matrix<S, 3, 3> rho(const Quaternion<S>& g, S unit_tol = S(1e-9)) {
  if (std::abs(g.norm() - S(1)) >= unit_tol)
    throw std::invalid_argument("rho: quaternion is not unit");
  const S w = g.w, x = g.x, y = g.y, z = g.z;
  Eigen::Matrix<S, 3, 3> m;
  m << w * w + x * x - y * y - z * z, 2 * (x * y - w * z), 2 * (x * z + w * y),
       2 * (x * y + w * z), w * w - x * x + y * y - z * z, 2 * (y * z - w * x),
       2 * (x * z - w * y), 2 * (y * z + w * x), w * w - x * x - y * y + z * z;
  return m;
}

/// One of the two unit-quaternion lifts of a rotation matrix (Shepperd's
/// method; the other lift is its negative).
inline Quatd quaternion_lift(const Mat3& r) {
  const double t = r.trace();
  Vec4 q;
  if (t > 0.0) {
    double s = std::sqrt(t + 1.0) * 2.0;
    q << 0.25 * s, (r(2, 1) - r(1, 2)) / s, (r(0, 2) - r(2, 0)) / s,
        (r(1, 0) - r(0, 1)) / s;
  } else {
    int i = 0;
    if (r(1, 1) > r(0, 0)) i = 1;
    if (r(2, 2) > r(i, i)) i = 2;
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    double s = std::sqrt(r(i, i) - r(j, j) - r(k, k) + 1.0) * 2.0;
    q[0] = (r(k, j) - r(j, k)) / s;
    q[1 + i] = 0.25 * s;
    q[1 + j] = (r(j, i) + r(i, j)) / s;
    q[1 + k] = (r(k, i) + r(i, k)) / s;
  }
  q.normalize();
  return Quatd::from_vec4(q);
}

inline Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0, -v[2], v[1], v[2], 0, -v[0], -v[1], v[0], 0;
  return m;
}

/// Rotation about axis v/|v| by angle |v|.
inline Mat3 so3_exp(const Vec3& v) {
  const double th = v.norm();
  if (th < 1e-300) return Mat3::Identity();
  return Eigen::AngleAxisd(th, v / th).toRotationMatrix();
}

/// Axis-angle logarithm with angle in [0, pi].
inline Vec3 so3_log(const Mat3& r) {
  Quatd q = quaternion_lift(r);
  if (q.w < 0) q = -q;  // principal branch
  const double s = q.imag().norm();
  if (s < 1e-16) return 2.0 * q.imag();  // angle ~ 2s, axis*angle ~ 2 Im q
  const double angle = 2.0 * std::atan2(s, q.w);
  return (angle / s) * q.imag();
}

inline double rotation_angle(const Mat3& r) { return so3_log(r).norm(); }

inline bool is_rotation(const Mat3& m, double tol = 1e-10) {
  return (m.transpose() * m - Mat3::Identity()).norm() < tol &&
         std::abs(m.determinant() - 1.0) < tol;
}

}  // namespace asdm
