#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "asdm/errors.hpp"
#include "asdm/spectrum.hpp"

namespace asdm {

enum class Branch { plus, minus, double_root };

/// One solution of P + s M rank <= 1: s > 0, M in SO(3).  Always s = sigma_2(P).
/// theta is the rotation angle in the canonical (signed-SVD) frame; M is the
/// rotation by pi about the axis in the 1-3 principal plane making angle
/// theta/2 with the third principal axis.
struct ReducibleDecomposition {
  double s;
  RotationMatrix m;
  double theta;
  Branch branch;
};

namespace detail {

inline Mat3 m_theta(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Mat3 m;
  m << -c, 0, s, 0, -1, 0, s, 0, c;
  return m;
}

// arccos argument for the rank-1 root in the canonical frame; grazing
// roundoff just outside [-1, 1] is clamped.
inline double theta_argument(const Vec3& d) {
  double arg = (d[1] * d[1] - d[0] * d[2]) / ((d[0] - d[2]) * d[1]);
  if (arg > 1.0 && arg < 1.0 + 1e-9) arg = 1.0;
  if (arg < -1.0 && arg > -1.0 - 1e-9) arg = -1.0;
  return arg;
}

}  // namespace detail

struct RankCertificate {
  double sigma2;
  double sigma3;
  double tol;
  bool ok() const { return sigma2 < tol && sigma3 < tol; }
};

inline RankCertificate rank1_certificate(const Mat3& p, double s, const Mat3& m,
                                         double sigma1_scale) {
  const Vec3 sv = singular_values(p + s * m);
  return {sv[1], sv[2], 1e-8 * (1.0 + sigma1_scale)};
}

/// The two rank-1 decompositions of a generic 3x3 matrix (distinct singular
/// values, sigma_2 > 0).  Throws DegenerateSpectrumError otherwise.
inline std::array<ReducibleDecomposition, 2> decompose_rank1(
    const Mat3& p, double gap_tol_rel = 1e-8) {
  const SignedSvd svd = signed_svd(p);
  const Vec3& d = svd.d;
  // pre-check tolerance scales with the matrix itself so weak backgrounds
  // classify the same way as unit-scale ones
  const SpectrumInfo info =
      classify_spectrum(p, gap_tol_rel * std::max(d[0], 1e-300));
  if (info.cls != SpectrumClass::generic)
    throw DegenerateSpectrumError("decompose_rank1: degenerate spectrum",
                                  static_cast<int>(info.cls));
  const double theta = std::acos(detail::theta_argument(d));
  std::array<ReducibleDecomposition, 2> out;
  out[0] = {d[1], svd.u * detail::m_theta(theta) * svd.v.transpose(), theta,
            Branch::plus};
  out[1] = {d[1], svd.u * detail::m_theta(-theta) * svd.v.transpose(), -theta,
            Branch::minus};
  return out;
}

/// Double-root decomposition for sigma1=sigma2 or sigma2=sigma3 spectra with
/// sigma2 > 0; theta is 0 or pi.
inline ReducibleDecomposition decompose_rank1_degenerate(
    const Mat3& p, double gap_tol_rel = 1e-8) {
  const SignedSvd svd = signed_svd(p);
  const Vec3& d = svd.d;
  const SpectrumInfo info =
      classify_spectrum(p, gap_tol_rel * std::max(d[0], 1e-300));
  switch (info.cls) {
    case SpectrumClass::multiple_of_SO3:
      throw InfiniteSolutionsError(
          "decompose_rank1_degenerate: scalar multiple of SO(3), infinite "
          "solutions");
    case SpectrumClass::rank_le_1:
    case SpectrumClass::zero:
      throw AlreadyReducibleError(
          "decompose_rank1_degenerate: matrix already has rank <= 1");
    case SpectrumClass::generic:
      throw DegenerateSpectrumError(
          "decompose_rank1_degenerate: spectrum is generic, use "
          "decompose_rank1",
          static_cast<int>(info.cls));
    case SpectrumClass::sigma12_equal:
    case SpectrumClass::sigma23_equal:
      break;
  }
  // Double root sits at theta = 0 when the maximum of the root function
  // (d1-d2)(d2+d3) vanishes, at theta = pi when the minimum -(d1+d2)(d2-d3)
  // does.  With signed entries d2 >= |d3| both products are nonnegative.
  const double at_zero = (d[0] - d[1]) * (d[1] + d[2]);
  const double at_pi = (d[0] + d[1]) * (d[1] - d[2]);
  const double theta = (at_zero <= at_pi) ? 0.0 : M_PI;
  return {d[1], svd.u * detail::m_theta(theta) * svd.v.transpose(), theta,
          Branch::double_root};
}

/// Stability bound for the rank-1 decomposition under a perturbation dP:
/// c * |dP| / min(s1 - s2, s2 - s3) with c calibrated empirically (see
/// tests); an upper-bound certificate, not a sharp constant.
inline constexpr double kSensitivityConstant = 12.0;

inline double sensitivity_bound(const Mat3& p, const Mat3& dp,
                                double gap_tol_rel = 1e-8) {
  const Vec3 s = singular_values(p);
  const SpectrumInfo info =
      classify_spectrum(p, gap_tol_rel * std::max(s[0], 1e-300));
  if (info.cls != SpectrumClass::generic)
    throw DegenerateSpectrumError("sensitivity_bound: degenerate spectrum",
                                  static_cast<int>(info.cls));
  const double gap = std::min(s[0] - s[1], s[1] - s[2]);
  return kSensitivityConstant * dp.norm() / gap;
}

}  // namespace asdm
