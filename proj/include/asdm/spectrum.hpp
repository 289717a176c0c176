#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>

#include "asdm/forms.hpp"

namespace asdm {

/// Singular values of a 3x3 matrix, descending.
inline Vec3 singular_values(const Mat3& p) {
  return Eigen::JacobiSVD<Mat3>(p).singularValues();
}

/// Fast analytic singular values via the trigonometric solution of the
/// characteristic cubic of P^T P.  Used in brute-force search loops where an
/// SVD per sample would dominate.
inline Vec3 singular_values_fast(const Mat3& p) {
  const Mat3 a = p.transpose() * p;
  const double q = a.trace() / 3.0;
  Mat3 b = a;
  b.diagonal().array() -= q;
  const double p2 = b.squaredNorm() / 6.0;
  const double sp = std::sqrt(p2 > 0 ? p2 : 0);
  Vec3 ev;
  if (sp < 1e-300) {
    ev.setConstant(q);
  } else {
    const double detb = b.determinant();
    double r = detb / (2.0 * sp * sp * sp);
    r = std::fmin(1.0, std::fmax(-1.0, r));
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * sp * std::cos(phi);
    const double e3 = q + 2.0 * sp * std::cos(phi + 2.0 * M_PI / 3.0);
    const double e2 = 3.0 * q - e1 - e3;
    ev << e1, e2, e3;
  }
  for (int i = 0; i < 3; ++i) ev[i] = std::sqrt(ev[i] > 0 ? ev[i] : 0);
  if (ev[0] < ev[1]) std::swap(ev[0], ev[1]);
  if (ev[1] < ev[2]) std::swap(ev[1], ev[2]);
  if (ev[0] < ev[1]) std::swap(ev[0], ev[1]);
  return ev;
}

/// P = U diag(d) V^T with U, V in SO(3) and d1 >= d2 >= |d3|; the sign of d3
/// is the sign of det P.
struct SignedSvd {
  RotationMatrix u;
  Vec3 d;
  RotationMatrix v;

  Mat3 reconstruct() const { return u * d.asDiagonal() * v.transpose(); }
};

inline SignedSvd signed_svd(const Mat3& p) {
  Eigen::JacobiSVD<Mat3> svd(p, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU(), v = svd.matrixV();
  Vec3 d = svd.singularValues();
  // Deterministic column orientation: dominant entry of each of the first two
  // columns of U made positive, compensating in V; third columns rebuilt by
  // cross product so both factors land in SO(3).
  for (int c = 0; c < 2; ++c) {
    int imax = 0;
    u.col(c).cwiseAbs().maxCoeff(&imax);
    if (u(imax, c) < 0) {
      u.col(c) = -u.col(c);
      v.col(c) = -v.col(c);
    }
  }
  u.col(2) = u.col(0).cross(u.col(1));
  v.col(2) = v.col(0).cross(v.col(1));
  d[2] = u.col(2).dot(p * v.col(2));
  return {u, d, v};
}

enum class SpectrumClass {
  generic,
  sigma12_equal,
  sigma23_equal,
  rank_le_1,
  multiple_of_SO3,
  zero,
};

inline const char* to_string(SpectrumClass c) {
  switch (c) {
    case SpectrumClass::generic: return "generic";
    case SpectrumClass::sigma12_equal: return "sigma12_equal";
    case SpectrumClass::sigma23_equal: return "sigma23_equal";
    case SpectrumClass::rank_le_1: return "rank_le_1";
    case SpectrumClass::multiple_of_SO3: return "multiple_of_SO3";
    case SpectrumClass::zero: return "zero";
  }
  return "?";
}

struct SpectrumInfo {
  SpectrumClass cls;
  double gap;  // margin of the defining (in)equalities, see classify_spectrum
  Vec3 sigma;
  double det;
};

/// Most degenerate class whose defining equalities hold within gap_tol.
/// For degenerate classes `gap` is the residual of the equality that fired;
/// for generic it is the smallest gap min(s1-s2, s2-s3).
/// Note multiple_of_SO3 requires the signed diagonal to be scalar (det > 0);
/// sigma-equal but det < 0 matrices land in the sigma12/sigma23 classes,
/// matching the double-root behaviour of the rank-1 decomposition.
inline SpectrumInfo classify_spectrum(const Mat3& p, double gap_tol) {
  if (gap_tol <= 0) throw std::invalid_argument("classify_spectrum: gap_tol <= 0");
  const Vec3 s = singular_values(p);
  const double det = p.determinant();
  SpectrumInfo info{SpectrumClass::generic, 0.0, s, det};
  if (s[0] <= gap_tol) {
    info.cls = SpectrumClass::zero;
    info.gap = s[0];
  } else if (s[1] <= gap_tol) {
    info.cls = SpectrumClass::rank_le_1;
    info.gap = s[1];
  } else if (s[0] - s[2] <= gap_tol && det > 0) {
    info.cls = SpectrumClass::multiple_of_SO3;
    info.gap = s[0] - s[2];
  } else if (s[0] - s[1] <= gap_tol) {
    info.cls = SpectrumClass::sigma12_equal;
    info.gap = s[0] - s[1];
  } else if (s[1] - s[2] <= gap_tol) {
    info.cls = SpectrumClass::sigma23_equal;
    info.gap = s[1] - s[2];
  } else {
    info.gap = std::min(s[0] - s[1], s[1] - s[2]);
  }
  return info;
}

}  // namespace asdm
