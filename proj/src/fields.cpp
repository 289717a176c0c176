#include "asdm/fields.hpp"

#include <Eigen/Dense>

namespace asdm {

namespace {

// F_{mu nu} components of the ASD 2-form with curvature matrix m:
// omega_1 -> (01, -23), omega_2 -> (02, +13), omega_3 -> (03, -12),
// su(2) coefficient 2 * column.
struct ComponentTable {
  // f[mu][nu] as imaginary quaternions, antisymmetric
  std::array<std::array<Quatd, 4>, 4> f{};
};

ComponentTable components_of_mat(const Mat3& m) {
  ComponentTable t;
  const std::array<Quatd, 3> comp = {Quatd::from_imag(2.0 * m.col(0)),
                                     Quatd::from_imag(2.0 * m.col(1)),
                                     Quatd::from_imag(2.0 * m.col(2))};
  auto set = [&](int mu, int nu, const Quatd& v) {
    t.f[mu][nu] = v;
    t.f[nu][mu] = -v;
  };
  set(0, 1, comp[0]);
  set(2, 3, -comp[0]);
  set(0, 2, comp[1]);
  set(1, 3, comp[1]);
  set(0, 3, comp[2]);
  set(1, 2, -comp[2]);
  return t;
}

}  // namespace

CurvatureGradient bianchi_project(const CurvatureGradient& raw) {
  // Unknowns per su(2) channel: g[rho][c] (12).  Constraint: the 3-form
  // sum_{rho,c} g[rho][c] dx^rho ^ omega_c vanishes (4 components).
  // The constraint matrix is identical for the three su(2) channels.
  Eigen::Matrix<double, 4, 12> a = Eigen::Matrix<double, 4, 12>::Zero();
  // dx^rho ^ e_{mu nu} expanded on the basis eta_k = i_{e_k} vol.
  auto add_wedge = [&](int row_block_rho, int c, int mu, int nu, double sg) {
    const int rho = row_block_rho;
    if (rho == mu || rho == nu) return;
    int tri[3] = {rho, mu, nu};
    double sign = sg;
    // bubble sort to ascending, tracking parity
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2 - i; ++j)
        if (tri[j] > tri[j + 1]) {
          std::swap(tri[j], tri[j + 1]);
          sign = -sign;
        }
    int k;
    if (tri[0] == 1) k = 0;          // (1,2,3)
    else if (tri[1] == 2) k = 1;     // (0,2,3)
    else if (tri[2] == 3 && tri[1] == 1) k = 2;  // (0,1,3)
    else k = 3;                      // (0,1,2)
    a(k, 3 * rho + c) += sign;
  };
  const int pairs[3][2][3] = {{{0, 1, +1}, {2, 3, -1}},
                              {{0, 2, +1}, {1, 3, +1}},
                              {{0, 3, +1}, {1, 2, -1}}};
  for (int rho = 0; rho < 4; ++rho)
    for (int c = 0; c < 3; ++c)
      for (int piece = 0; piece < 2; ++piece)
        add_wedge(rho, c, pairs[c][piece][0], pairs[c][piece][1],
                  pairs[c][piece][2]);

  // Orthogonal projector onto ker(a).
  const Eigen::Matrix<double, 4, 4> gram = a * a.transpose();
  const Eigen::Matrix<double, 12, 12> proj =
      Eigen::Matrix<double, 12, 12>::Identity() -
      a.transpose() * gram.ldlt().solve(a);

  CurvatureGradient out;
  for (int row = 0; row < 3; ++row) {  // su(2) channel
    Eigen::Matrix<double, 12, 1> v;
    for (int rho = 0; rho < 4; ++rho)
      for (int c = 0; c < 3; ++c) v[3 * rho + c] = raw[rho](row, c);
    const Eigen::Matrix<double, 12, 1> w = proj * v;
    for (int rho = 0; rho < 4; ++rho)
      for (int c = 0; c < 3; ++c) out[rho](row, c) = w[3 * rho + c];
  }
  return out;
}

ConnectionForm BackgroundModel::connection_form_centered(
    const Quatd& x, const Quatd& center) const {
  if (x.norm() > patch_radius_)
    throw OutOfPatchError("background_connection_form: |x| > patch_radius");
  const ComponentTable f0 = components_of_mat(curvature_matrix(center));
  std::array<ComponentTable, 4> grad;
  for (int rho = 0; rho < 4; ++rho) grad[rho] = components_of_mat(p1_[rho]);

  const Vec4 v = (x - center).vec4();
  ConnectionForm a;
  for (int nu = 0; nu < 4; ++nu) {
    Quatd s{0, 0, 0, 0};
    for (int mu = 0; mu < 4; ++mu) {
      s += (0.5 * v[mu]) * f0.f[mu][nu];
      for (int rho = 0; rho < 4; ++rho)
        s += (v[mu] * v[rho] / 3.0) * grad[rho].f[mu][nu];
    }
    a[nu] = s;
  }
  return a;
}

// --- cutoff -----------------------------------------------------------------

namespace {

// quintic smoothstep on [0, 1]
double smoothstep5(double t) {
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

// Slope profile on [0, 3/2] (u = r - 1/2): quintic ramps of width eps up to a
// plateau at s_max = 1/(3/2 - eps).  With eps = 0.4 the peak slope is
// 10/11 < 1 and the total rise is exactly 1.
constexpr double kRampWidth = 0.4;
constexpr double kRiseWidth = 1.5;
constexpr double kSlope = 1.0 / (kRiseWidth - kRampWidth);

double ramp_integral(double u) {
  // integral of smoothstep5(u/eps) du from 0 to u, u in [0, eps]
  const double t = u / kRampWidth;
  // antiderivative of smoothstep5: t^4 (2.5 - 3 t + t^2)... times eps
  const double anti = t * t * t * t * (2.5 + t * (-3.0 + t));
  return kRampWidth * anti;
}

}  // namespace

double cutoff_beta(double r) {
  const double u = r - 0.5;
  if (u <= 0.0) return 0.0;
  if (u >= kRiseWidth) return 1.0;
  if (u < kRampWidth) return kSlope * ramp_integral(u);
  if (u <= kRiseWidth - kRampWidth)
    return kSlope * (ramp_integral(kRampWidth) + (u - kRampWidth));
  return 1.0 - kSlope * ramp_integral(kRiseWidth - u);
}

double cutoff_beta_prime(double r) {
  const double u = r - 0.5;
  if (u <= 0.0 || u >= kRiseWidth) return 0.0;
  if (u < kRampWidth) return kSlope * smoothstep5(u / kRampWidth);
  if (u <= kRiseWidth - kRampWidth) return kSlope;
  return kSlope * smoothstep5((kRiseWidth - u) / kRampWidth);
}

// --- glued connection --------------------------------------------------------

namespace {

struct Cutoffs {
  double b1, b2;        // beta_1, beta_2
  Vec4 db1, db2;        // gradients
};

Cutoffs eval_cutoffs(const Quatd& x, const Quatd& y, const CutoffScales& s) {
  const Vec4 d = (x - y).vec4();
  const double r = d.norm();
  Cutoffs c;
  c.b1 = cutoff_beta(r / s.r1);
  c.b2 = 1.0 - cutoff_beta(r / s.r2);
  c.db1.setZero();
  c.db2.setZero();
  if (r > 0) {
    const Vec4 rhat = d / r;
    c.db1 = (cutoff_beta_prime(r / s.r1) / s.r1) * rhat;
    c.db2 = (-cutoff_beta_prime(r / s.r2) / s.r2) * rhat;
  }
  return c;
}

CurvatureForm dbeta_wedge(const Vec4& db, const ConnectionForm& a) {
  CurvatureForm f;
  int k = 0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu)
      f.f[k++] = db[mu] * a[nu] - db[nu] * a[mu];
  return f;
}

}  // namespace

ConnectionForm glued_connection_form(const Quatd& x,
                                     const GluedConnectionModel& model) {
  const Cutoffs c = eval_cutoffs(x, model.bubble.y, model.scales);
  ConnectionForm a;
  if (c.b1 != 0.0)
    a += c.b1 * model.background.connection_form_centered(x, model.bubble.y);
  if (c.b2 != 0.0) a += c.b2 * astd_radial_gauge(x, model.bubble);
  return a;
}

GluedCurvature glued_curvature(const Quatd& x,
                               const GluedConnectionModel& model) {
  const Cutoffs c = eval_cutoffs(x, model.bubble.y, model.scales);

  const CurvatureForm f_std = form_of_mat(fstd_radial_gauge(x, model.bubble));

  GluedCurvature out;
  CurvatureForm rest;  // all terms except beta2 * F_std

  const bool need_a0 = c.b1 != 0.0 || c.db1.squaredNorm() > 0;
  const bool need_astd = (c.b2 != 0.0 && c.b2 != 1.0) ||
                         c.db2.squaredNorm() > 0 ||
                         (c.b1 != 0.0 && c.b2 != 0.0);
  ConnectionForm a0, astd;
  if (need_a0) a0 = model.background.connection_form_centered(x, model.bubble.y);
  if (need_astd) astd = astd_radial_gauge(x, model.bubble);

  if (c.b1 != 0.0)
    rest += c.b1 * (model.background.curvature_form(x) + wedge(a0, a0));

  if (c.b1 * c.b1 - c.b1 != 0.0) rest += (c.b1 * c.b1 - c.b1) * wedge(a0, a0);
  if (c.b2 * c.b2 - c.b2 != 0.0)
    rest += (c.b2 * c.b2 - c.b2) * wedge(astd, astd);
  if (c.db1.squaredNorm() > 0) rest += dbeta_wedge(c.db1, a0);
  if (c.db2.squaredNorm() > 0) rest += dbeta_wedge(c.db2, astd);
  if (c.b1 != 0.0 && c.b2 != 0.0)
    rest += (c.b1 * c.b2) * (wedge(astd, a0) + wedge(a0, astd));

  out.non_fstd = rest;
  out.full = rest + c.b2 * f_std;
  out.asd = mat_of(out.full);
  return out;
}

GluedCurvature interpolated_curvature(const Quatd& x,
                                      const GluedConnectionModel& model,
                                      double t) {
  if (t < 0.0 || t > 1.0)
    throw std::invalid_argument("interpolated_curvature: t outside [0,1]");
  GluedCurvature g = glued_curvature(x, model);
  const CurvatureForm f_std = form_of_mat(fstd_radial_gauge(x, model.bubble));
  const CurvatureForm f_bg =
      model.background.exact_curvature_form(x, model.bubble.y);
  const CurvatureForm endpoint = f_bg + f_std;
  if (t == 1.0) {
    g.full = endpoint;
    g.non_fstd = f_bg;
  } else if (t != 0.0) {
    g.full = t * endpoint + (1.0 - t) * g.full;
    g.non_fstd = t * f_bg + (1.0 - t) * g.non_fstd;
  }
  g.asd = mat_of(g.full);
  return g;
}

}  // namespace asdm
