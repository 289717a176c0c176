// Test-only oracles, independent of the library's solve paths.
#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

#include "asdm/forms.hpp"
#include "asdm/rng.hpp"
#include "asdm/spectrum.hpp"

namespace oracle {

using asdm::Mat3;
using asdm::Quatd;
using asdm::Vec3;

/// Singular values by an eigen-solve of P^T P, independent of the SVD path.
inline Vec3 singular_values_eig(const Mat3& p) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(p.transpose() * p);
  Vec3 ev = es.eigenvalues();  // ascending
  return Vec3(std::sqrt(std::max(ev[2], 0.0)), std::sqrt(std::max(ev[1], 0.0)),
              std::sqrt(std::max(ev[0], 0.0)));
}

/// Brute-force search for rotations M with sigma_2(P + sM) ~ 0 at fixed
/// s = sigma_2(P): random sampling plus coordinate-descent refinement.
/// Returns the refined minimizers with objective below `keep_tol`.
inline std::vector<Mat3> brute_force_rank1_rotations(const Mat3& p,
                                                     int n_samples,
                                                     double keep_tol,
                                                     std::uint64_t seed) {
  const double s = asdm::singular_values(p)[1];
  auto objective = [&](const Mat3& m) {
    const Vec3 sv = asdm::singular_values_fast(p + s * m);
    return sv[1] * sv[1] + sv[2] * sv[2];
  };
  asdm::RngStream rng(seed);
  std::vector<std::pair<double, Quatd>> candidates;
  for (int i = 0; i < n_samples; ++i) {
    const Quatd g = rng.unit_quaternion();
    const double f = objective(asdm::rho(g));
    if (f < 0.05 * s * s) candidates.push_back({f, g});
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  if (candidates.size() > 400) candidates.resize(400);

  std::vector<Mat3> out;
  for (const auto& [f0, g0] : candidates) {
    // refine in the axis-angle chart about the current rotation
    Mat3 m = asdm::rho(g0);
    double step = 0.3, f = objective(m);
    for (int it = 0; it < 700 && step > 1e-12; ++it) {
      bool improved = false;
      for (int ax = 0; ax < 3; ++ax)
        for (double sgn : {1.0, -1.0}) {
          Vec3 v = Vec3::Zero();
          v[ax] = sgn * step;
          const Mat3 trial = asdm::so3_exp(v) * m;
          const double ft = objective(trial);
          if (ft < f) {
            f = ft;
            m = trial;
            improved = true;
          }
        }
      if (!improved) step *= 0.5;
    }
    if (f < keep_tol) {
      bool dup = false;
      for (const auto& seen : out)
        if ((seen - m).norm() < 1e-4) dup = true;
      if (!dup) out.push_back(m);
    }
  }
  return out;
}

/// Observed finite-difference convergence order between two step sizes.
inline double fd_order(double err_coarse, double err_fine, double h_ratio) {
  return std::log(err_coarse / err_fine) / std::log(h_ratio);
}

}  // namespace oracle
