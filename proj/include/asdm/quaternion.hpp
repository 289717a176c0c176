#pragma once

#include <Eigen/Core>
#include <cmath>

namespace asdm {

/// Quaternion w + x i + y j + z k, identified with the point
/// (x^0, x^1, x^2, x^3) of R^4.  Not restricted to unit norm; this is the
/// ambient coordinate algebra, so all Hamilton operations are exact on
/// arbitrary elements.
template <typename Scalar>
struct Quaternion {
  Scalar w{0}, x{0}, y{0}, z{0};

  Quaternion() = default;
  constexpr Quaternion(Scalar w_, Scalar x_, Scalar y_, Scalar z_)
      : w(w_), x(x_), y(y_), z(z_) {}

  static Quaternion from_vec4(const Eigen::Matrix<Scalar, 4, 1>& v) {
    return {v[0], v[1], v[2], v[3]};
  }
  static Quaternion from_real(Scalar r) { return {r, 0, 0, 0}; }
  static Quaternion from_imag(const Eigen::Matrix<Scalar, 3, 1>& v) {
    return {0, v[0], v[1], v[2]};
  }

  Eigen::Matrix<Scalar, 4, 1> vec4() const {
    return Eigen::Matrix<Scalar, 4, 1>(w, x, y, z);
  }
  Eigen::Matrix<Scalar, 3, 1> imag() const {
    return Eigen::Matrix<Scalar, 3, 1>(x, y, z);
  }
  Scalar real() const { return w; }

  Scalar squared_norm() const { return w * w + x * x + y * y + z * z; }
  Scalar norm() const { return std::sqrt(squared_norm()); }

  Quaternion conj() const { return {w, -x, -y, -z}; }
  Quaternion inverse() const {
    const Scalar n2 = squared_norm();
    return {w / n2, -x / n2, -y / n2, -z / n2};
  }
  Quaternion normalized() const {
    const Scalar n = norm();
    return {w / n, x / n, y / n, z / n};
  }

  Quaternion operator-() const { return {-w, -x, -y, -z}; }
  Quaternion& operator+=(const Quaternion& o) {
    w += o.w; x += o.x; y += o.y; z += o.z;
    return *this;
  }
  Quaternion& operator-=(const Quaternion& o) {
    w -= o.w; x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  Quaternion& operator*=(Scalar s) {
    w *= s; x *= s; y *= s; z *= s;
    return *this;
  }
};

template <typename S>
inline Quaternion<S> operator+(Quaternion<S> a, const Quaternion<S>& b) {
  return a += b;
}
template <typename S>
inline Quaternion<S> operator-(Quaternion<S> a, const Quaternion<S>& b) {
  return a -= b;
}
template <typename S>
inline Quaternion<S> operator*(Quaternion<S> a, S s) {
  return a *= s;
}
template <typename S>
inline Quaternion<S> operator*(S s, Quaternion<S> a) {
  return a *= s;
}
template <typename S>
inline Quaternion<S> operator/(Quaternion<S> a, S s) {
  return a *= (S(1) / s);
}

/// Hamilton product.
template <typename S>
inline Quaternion<S> operator*(const Quaternion<S>& a, const Quaternion<S>& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

template <typename S>
inline Quaternion<S> commutator(const Quaternion<S>& a, const Quaternion<S>& b) {
  return a * b - b * a;
}

template <typename S>
inline Quaternion<S> im_part(const Quaternion<S>& q) {
  return {0, q.x, q.y, q.z};
}

using Quatd = Quaternion<double>;

}  // namespace asdm
