#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "asdm/quaternion.hpp"
#include "asdm/rotation.hpp"

namespace asdm {

/// An ASD curvature at a point, packaged as a 3x3 real matrix: column c holds
/// half the omega_c component of F^- in the oriented basis
///   omega_1 = dx0 dx1 - dx2 dx3,
///   omega_2 = dx0 dx2 - dx3 dx1,
///   omega_3 = dx0 dx3 - dx1 dx2,
/// rows indexing the su(2) basis {i, j, k}.
using CurvatureMatrix = Mat3;
using RotationMatrix = Mat3;

/// su(2)-valued 1-form on R^4: four imaginary-quaternion coefficients A_mu.
struct ConnectionForm {
  std::array<Quatd, 4> a{};

  const Quatd& operator[](int mu) const { return a[mu]; }
  Quatd& operator[](int mu) { return a[mu]; }

  ConnectionForm& operator+=(const ConnectionForm& o) {
    for (int mu = 0; mu < 4; ++mu) a[mu] += o.a[mu];
    return *this;
  }
  ConnectionForm& operator*=(double s) {
    for (int mu = 0; mu < 4; ++mu) a[mu] *= s;
    return *this;
  }
};

inline ConnectionForm operator+(ConnectionForm a, const ConnectionForm& b) {
  return a += b;
}
inline ConnectionForm operator*(double s, ConnectionForm a) { return a *= s; }

/// Euclidean coefficient norm sqrt(sum_mu |A_mu|^2); used for the pointwise
/// connection-magnitude certificates.
inline double connection_norm(const ConnectionForm& a) {
  double s = 0;
  for (int mu = 0; mu < 4; ++mu) s += a[mu].squared_norm();
  return std::sqrt(s);
}

/// Quaternion-valued 2-form, coefficients on dx^mu ^ dx^nu for mu < nu in the
/// fixed order (01, 02, 03, 12, 13, 23).
struct CurvatureForm {
  std::array<Quatd, 6> f{};

  static constexpr int index(int mu, int nu) {
    // mu < nu assumed
    constexpr int lut[4][4] = {{-1, 0, 1, 2}, {-1, -1, 3, 4}, {-1, -1, -1, 5},
                               {-1, -1, -1, -1}};
    return lut[mu][nu];
  }

  CurvatureForm& operator+=(const CurvatureForm& o) {
    for (int k = 0; k < 6; ++k) f[k] += o.f[k];
    return *this;
  }
  CurvatureForm& operator-=(const CurvatureForm& o) {
    for (int k = 0; k < 6; ++k) f[k] -= o.f[k];
    return *this;
  }
  CurvatureForm& operator*=(double s) {
    for (int k = 0; k < 6; ++k) f[k] *= s;
    return *this;
  }
};

inline CurvatureForm operator+(CurvatureForm a, const CurvatureForm& b) {
  return a += b;
}
inline CurvatureForm operator-(CurvatureForm a, const CurvatureForm& b) {
  return a -= b;
}
inline CurvatureForm operator*(double s, CurvatureForm a) { return a *= s; }

/// Wedge of su(2)-valued 1-forms under the quaternion product:
/// (A ^ B)_{mu nu} = A_mu B_nu - A_nu B_mu.
inline CurvatureForm wedge(const ConnectionForm& a, const ConnectionForm& b) {
  CurvatureForm w;
  int k = 0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu)
      w.f[k++] = a[mu] * b[nu] - a[nu] * b[mu];
  return w;
}

/// ASD/SD split of a 2-form in the omega / omega-bar bases.
struct AsdSplit {
  std::array<Quatd, 3> asd;  // components on omega_c (each |omega_c|^2 = 2)
  std::array<Quatd, 3> sd;   // components on the SD partners
};

inline AsdSplit asd_split(const CurvatureForm& f) {
  const Quatd &f01 = f.f[0], &f02 = f.f[1], &f03 = f.f[2];
  const Quatd &f12 = f.f[3], &f13 = f.f[4], &f23 = f.f[5];
  AsdSplit s;
  s.asd[0] = (f01 - f23) * 0.5;
  s.asd[1] = (f02 + f13) * 0.5;
  s.asd[2] = (f03 - f12) * 0.5;
  s.sd[0] = (f01 + f23) * 0.5;
  s.sd[1] = (f02 - f13) * 0.5;
  s.sd[2] = (f03 + f12) * 0.5;
  return s;
}

/// Mat(F^-): column c is half the omega_c component of the ASD part.
inline CurvatureMatrix mat_of(const CurvatureForm& f) {
  const AsdSplit s = asd_split(f);
  CurvatureMatrix m;
  for (int c = 0; c < 3; ++c) m.col(c) = 0.5 * s.asd[c].imag();
  return m;
}

inline double sd_part_norm(const CurvatureForm& f) {
  const AsdSplit s = asd_split(f);
  double n = 0;
  for (int c = 0; c < 3; ++c) n += s.sd[c].squared_norm();
  return std::sqrt(n);
}

/// Reconstruct the (purely ASD) 2-form with Mat(F) = m.
inline CurvatureForm form_of_mat(const CurvatureMatrix& m) {
  CurvatureForm f;
  std::array<Quatd, 3> comp;
  for (int c = 0; c < 3; ++c) comp[c] = Quatd::from_imag(2.0 * m.col(c));
  f.f[0] = comp[0];
  f.f[5] = -comp[0];
  f.f[1] = comp[1];
  f.f[4] = comp[1];
  f.f[2] = comp[2];
  f.f[3] = -comp[2];
  return f;
}

/// |F|^2 with the -tr(uv) pairing on su(2) (|i|^2 = 2) and unit dx^mu^dx^nu.
/// For an ASD form this equals 16 ||Mat(F)||_F^2; the standard instanton
/// peaks at 48 / lambda^4.
inline double curvature_norm_sq(const CurvatureForm& f) {
  double s = 0;
  for (int k = 0; k < 6; ++k) s += f.f[k].squared_norm();
  return 2.0 * s;
}

inline double curvature_norm_sq(const CurvatureMatrix& m) {
  return 16.0 * m.squaredNorm();
}

/// gauge change Mat(F) -> g Mat(F) h for g, h in SO(3); singular values are
/// preserved.
inline CurvatureMatrix mat_gauge_transform(const CurvatureMatrix& p,
                                           const RotationMatrix& g,
                                           const RotationMatrix& h) {
  return g * p * h;
}

/// Central-difference curvature dA + A^A of a closed-form connection.
inline CurvatureForm fd_curvature(
    const std::function<ConnectionForm(const Quatd&)>& conn, const Quatd& x,
    double h) {
  std::array<std::array<Quatd, 4>, 4> dA;  // dA[mu][nu] = d_mu A_nu
  for (int mu = 0; mu < 4; ++mu) {
    Vec4 xp = x.vec4(), xm = x.vec4();
    xp[mu] += h;
    xm[mu] -= h;
    const ConnectionForm ap = conn(Quatd::from_vec4(xp));
    const ConnectionForm am = conn(Quatd::from_vec4(xm));
    for (int nu = 0; nu < 4; ++nu) dA[mu][nu] = (ap[nu] - am[nu]) / (2.0 * h);
  }
  const ConnectionForm a0 = conn(x);
  CurvatureForm f;
  int k = 0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu)
      f.f[k++] = dA[mu][nu] - dA[nu][mu] + commutator(a0[mu], a0[nu]);
  return f;
}

}  // namespace asdm
