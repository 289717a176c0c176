#pragma once

#include <array>
#include <cmath>
#include <optional>

#include "asdm/errors.hpp"
#include "asdm/forms.hpp"
#include "asdm/rotation.hpp"
#include "asdm/spectrum.hpp"

namespace asdm {

// ---------------------------------------------------------------------------
// Standard instanton
// ---------------------------------------------------------------------------

/// Bubble parameters: center y, scale lambda, gluing angle m = rho(g0).
struct GluingData {
  Quatd y;
  double lambda = 1.0;
  RotationMatrix m = RotationMatrix::Identity();
  Quatd g0{1, 0, 0, 0};

  static GluingData from_g0(const Quatd& y, double lambda, const Quatd& g0) {
    if (lambda <= 0) throw std::invalid_argument("GluingData: lambda <= 0");
    GluingData g;
    g.y = y;
    g.lambda = lambda;
    g.g0 = g0.normalized();
    g.m = rho(g.g0);
    return g;
  }
  static GluingData from_m(const Quatd& y, double lambda,
                           const RotationMatrix& m) {
    GluingData g = from_g0(y, lambda, quaternion_lift(m));
    g.m = m;
    return g;
  }
};

/// Mat of the scale-1, center-0 instanton curvature in the regular gauge:
/// (1 + |x|^2)^-2 times the identity.
inline CurvatureMatrix fstd_regular_gauge(const Quatd& x) {
  const double r2 = x.squared_norm();
  return std::pow(1.0 + r2, -2) * Mat3::Identity();
}

/// Mat of the instanton curvature in the exterior radial gauge with gluing
/// angle m: lambda^2/(lambda^2+|x-y|^2)^2 m^-1 rho((x-y)/|x-y|).
inline CurvatureMatrix fstd_radial_gauge(const Quatd& x, const GluingData& g) {
  const Quatd d = x - g.y;
  const double r2 = d.squared_norm();
  if (r2 == 0.0)
    throw SingularGaugeError("fstd_radial_gauge: x at the bubble center");
  const double mag =
      g.lambda * g.lambda / std::pow(g.lambda * g.lambda + r2, 2);
  return mag * (g.m.transpose() * rho(d * (1.0 / std::sqrt(r2))));
}

/// Scalar magnitude lambda^2/(lambda^2+r^2)^2 of the radial-gauge curvature.
inline double fstd_magnitude(double lambda, double r2) {
  return lambda * lambda / std::pow(lambda * lambda + r2, 2);
}

/// Connection form of the instanton in the exterior radial gauge (singular at
/// the center, O(lambda^2/r^3) at infinity), conjugated by g0:
///   A = g0^-1 [ lambda^2 Im((x-y) d(conj(x-y))) / (|x-y|^2 (lambda^2+|x-y|^2)) ] g0.
inline ConnectionForm astd_radial_gauge(const Quatd& x, const GluingData& g) {
  const Quatd d = x - g.y;
  const double r2 = d.squared_norm();
  if (r2 == 0.0)
    throw SingularGaugeError("astd_radial_gauge: x at the bubble center");
  const double pref = g.lambda * g.lambda / (r2 * (g.lambda * g.lambda + r2));
  static const std::array<Quatd, 4> basis = {
      Quatd{1, 0, 0, 0}, Quatd{0, 1, 0, 0}, Quatd{0, 0, 1, 0},
      Quatd{0, 0, 0, 1}};
  const Quatd g0i = g.g0.conj();
  ConnectionForm a;
  for (int mu = 0; mu < 4; ++mu) {
    const Quatd v = im_part(d * basis[mu].conj()) * pref;
    a[mu] = g0i * v * g.g0;
  }
  return a;
}

// ---------------------------------------------------------------------------
// Affine ASD background in the radial (Fock-Schwinger) gauge
// ---------------------------------------------------------------------------

/// Curvature-gradient tensor: grad[rho] is the derivative of the curvature
/// matrix in coordinate direction rho.
using CurvatureGradient = std::array<Mat3, 4>;

/// dF = 0 is four su(2)-valued equations on the 12 matrix entries of an
/// affine ASD variation (per su(2) channel).  Project a raw gradient onto
/// that subspace; only closed gradients are realizable as curvature of a
/// connection, so BackgroundModel stores the projected tensor.
CurvatureGradient bianchi_project(const CurvatureGradient& raw);

/// Polynomial-gauge background: curvature matrix P0 + sum_rho x^rho P1[rho]
/// on a flat patch, realized by the explicit connection form
///   A_nu(x) = 1/2 x^mu F_mu_nu(0) + 1/3 x^mu x^rho d_rho F_mu_nu(0).
class BackgroundModel {
 public:
  BackgroundModel()
      : BackgroundModel(Mat3::Identity(),
                        CurvatureGradient{Mat3::Zero(), Mat3::Zero(),
                                          Mat3::Zero(), Mat3::Zero()},
                        1.0) {}
  BackgroundModel(const Mat3& p0, const CurvatureGradient& p1_raw,
                  double patch_radius)
      : p0_(p0), p1_(bianchi_project(p1_raw)), patch_radius_(patch_radius) {
    if (patch_radius <= 0)
      throw std::invalid_argument("BackgroundModel: patch_radius <= 0");
  }

  static BackgroundModel constant(const Mat3& p0, double patch_radius) {
    return BackgroundModel(p0, CurvatureGradient{Mat3::Zero(), Mat3::Zero(),
                                                 Mat3::Zero(), Mat3::Zero()},
                           patch_radius);
  }

  const Mat3& p0() const { return p0_; }
  const CurvatureGradient& p1() const { return p1_; }
  double patch_radius() const { return patch_radius_; }
  bool constant_curvature() const {
    for (const auto& g : p1_)
      if (g.norm() != 0.0) return false;
    return true;
  }

  CurvatureMatrix curvature_matrix(const Quatd& x) const {
    Mat3 m = p0_;
    const Vec4 v = x.vec4();
    for (int rho = 0; rho < 4; ++rho) m += v[rho] * p1_[rho];
    return m;
  }

  CurvatureForm curvature_form(const Quatd& x) const {
    return form_of_mat(curvature_matrix(x));
  }

  /// |F(0)| in the -tr pairing norm.
  double curvature_magnitude0() const {
    return std::sqrt(curvature_norm_sq(p0_));
  }

  /// Background length scale R3 = min(|F|^{-1/2}, |F|/|grad F|) at the origin.
  double r3() const {
    const double f = curvature_magnitude0();
    double scale = 1.0 / std::sqrt(f);
    double g2 = 0;
    for (const auto& gm : p1_) g2 += 16.0 * gm.squaredNorm();
    if (g2 > 0) scale = std::min(scale, f / std::sqrt(g2));
    return scale;
  }

  double s0() const { return singular_values(p0_)[1]; }

  /// Radial-gauge 1-form about the origin; vanishes at 0.
  ConnectionForm connection_form(const Quatd& x) const {
    return connection_form_centered(x, Quatd{0, 0, 0, 0});
  }

  /// Radial-gauge 1-form about an arbitrary center (the gluing constructions
  /// trivialize the background about the bubble point, where it vanishes).
  ConnectionForm connection_form_centered(const Quatd& x,
                                          const Quatd& center) const;

  /// Exact curvature dA + A^A of the centered radial-gauge form: the affine
  /// model plus the quadratic A^A remainder, so the glued-curvature algebra
  /// closes identically.
  CurvatureForm exact_curvature_form(const Quatd& x,
                                     const Quatd& center) const {
    return curvature_form(x) +
           wedge(connection_form_centered(x, center),
                 connection_form_centered(x, center));
  }

 private:
  Mat3 p0_;
  CurvatureGradient p1_;
  double patch_radius_;
};

/// background_connection_form(x, b): the explicit 1-form of the model; throws
/// OutOfPatchError outside the patch.
inline ConnectionForm background_connection_form(const Quatd& x,
                                                 const BackgroundModel& b) {
  return b.connection_form(x);
}

// ---------------------------------------------------------------------------
// Cutoffs and the glued connection
// ---------------------------------------------------------------------------

/// Smooth monotone cutoff: 0 for r < 1/2, 1 for r > 2, with beta' <= 1
/// exactly.  Built from a slope plateau with quintic-smoothstep ramps, so
/// beta is C^3 (the plain quintic smoothstep on [1/2, 2] would peak at
/// slope 1.25).
double cutoff_beta(double r);
double cutoff_beta_prime(double r);

struct CutoffScales {
  double r1, r2, r3, s0;
  double c_lo = 1e-6;  // R1^2 < c_lo * lambda * R3
  double c_hi = 1e6;   // R2^2 > c_hi * lambda / sqrt(s0)

  void validate(double lambda) const {
    if (!(r1 > 0 && r2 > 0 && r3 > 0 && s0 > 0))
      throw std::invalid_argument("CutoffScales: nonpositive scale");
    if (!(r1 * r1 < c_lo * lambda * r3))
      throw std::invalid_argument("CutoffScales: R1^2 < c_lo*lambda*R3 violated");
    if (!(r2 * r2 > c_hi * lambda / std::sqrt(s0)))
      throw std::invalid_argument(
          "CutoffScales: R2^2 > c_hi*lambda/sqrt(s0) violated");
  }
};

/// Default experiment scales R1 = 1e-4 sqrt(lambda R3), R2 = 1e4
/// sqrt(lambda/sqrt(s0)); both strict inequalities then hold with margin 100.
inline CutoffScales default_scales(double lambda, double r3, double s0) {
  CutoffScales s{1e-4 * std::sqrt(lambda * r3),
                 1e4 * std::sqrt(lambda / std::sqrt(s0)), r3, s0};
  s.validate(lambda);
  return s;
}

enum class Zone {
  I_interior,
  II_inner_shoulder,
  III_plateau,
  IV_outer_shoulder,
  V_exterior,
};

inline const char* to_string(Zone z) {
  switch (z) {
    case Zone::I_interior: return "I";
    case Zone::II_inner_shoulder: return "II";
    case Zone::III_plateau: return "III";
    case Zone::IV_outer_shoulder: return "IV";
    case Zone::V_exterior: return "V";
  }
  return "?";
}

/// Zone of x relative to the bubble center; boundary radii go to the
/// adjacent shoulder.
inline Zone zone_classify(const Quatd& x, const Quatd& y,
                          const CutoffScales& s) {
  const double r = (x - y).norm();
  if (r < 0.5 * s.r1) return Zone::I_interior;
  if (r <= 2.0 * s.r1) return Zone::II_inner_shoulder;
  if (r < 0.5 * s.r2) return Zone::III_plateau;
  if (r <= 2.0 * s.r2) return Zone::IV_outer_shoulder;
  return Zone::V_exterior;
}

/// A' = beta1 A0 + beta2 Astd together with the interpolation parameter t.
struct GluedConnectionModel {
  BackgroundModel background;
  GluingData bubble;
  CutoffScales scales;
  double t = 0.0;
};

struct GluedCurvature {
  CurvatureForm full;        // all terms of the curvature expansion
  CurvatureMatrix asd;       // Mat of the ASD part
  CurvatureForm non_fstd;    // everything except the pure instanton term
};

ConnectionForm glued_connection_form(const Quatd& x,
                                     const GluedConnectionModel& model);

/// Curvature of A' evaluated term by term (cutoff products, d(beta) wedges,
/// cross term); no finite differences.
GluedCurvature glued_curvature(const Quatd& x,
                               const GluedConnectionModel& model);

/// F_t = t (F_A0 + F_std) + (1 - t) F_A'.
GluedCurvature interpolated_curvature(const Quatd& x,
                                      const GluedConnectionModel& model,
                                      double t);

// ---------------------------------------------------------------------------
// Fiber curvature profile
// ---------------------------------------------------------------------------

/// |F_(a,b)(x)|^2 = 48 |a|^4 / (|a|^2 + |x-b|^2)^4 for the instanton with
/// scale-gluing parameter a and center b.
inline double fiber_curvature_norm_sq(const Quatd& x, const Quatd& a,
                                      const Quatd& b) {
  const double a2 = a.squared_norm();
  if (a2 == 0.0)
    throw std::invalid_argument("fiber_curvature_norm_sq: a = 0");
  const double d2 = (x - b).squared_norm();
  return 48.0 * a2 * a2 / std::pow(a2 + d2, 4);
}

}  // namespace asdm
