#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "asdm/fields.hpp"
#include "asdm/reducible.hpp"

namespace asdm {

/// Two marked points p = (-L,0,0,0), q = (+L,0,0,0), the bubble-size
/// admissibility cutoff lambda < K L^alpha, and the background.
struct ProblemConfig {
  double L = 1e-2;
  double K = 1.0;
  double alpha = 1.0;
  BackgroundModel background;

  Quatd p() const { return {-L, 0, 0, 0}; }
  Quatd q() const { return {L, 0, 0, 0}; }
  double lambda_max() const { return K * std::pow(L, alpha); }
};

struct DerivedScales {
  double s_p, s_q;   // second singular values of the background at p, q
  double s_m;        // 2/sqrt(s_m) = 1/sqrt(s_p) + 1/sqrt(s_q)
  double delta;      // (1/sqrt(s_p) - 1/sqrt(s_q)) / L
  double r_kalpha;   // largest |y_I| with lambda(y_I) <= K L^alpha
};

DerivedScales derived_scales(const ProblemConfig& cfg);

/// Small root of lambda^2 (1 + Delta^2/16) - lambda/sqrt(s_m) + L^2 + |y_I|^2
/// = 0 and the center offset y0 = lambda Delta / 4; empty when the
/// discriminant is negative.
struct EllipsoidRoot {
  double lambda;
  double y0;
};
std::optional<EllipsoidRoot> ellipsoid_solve(const DerivedScales& scales,
                                             const Vec3& y_imag, double L);

/// g(y) = (conj(y) - conj(p))(y - q) / |(y-p)(y-q)|.
Quatd g_of_y(const Quatd& y, double L);

/// Which rank-1 branch is targeted at p and at q (index into decompose_rank1).
struct BranchPair {
  int at_p = 0;
  int at_q = 0;
};

struct IntersectionSolution {
  GluingData gluing;
  BranchPair pair;
  Vec3 y_imag;
  double y0 = 0;
  double lambda = 0;
  double residual = 0;  // dimensionless: max of relative magnitude and
                        // direction mismatches at p and q
  int sign = 0;
  bool admissible = true;
  // reducibility targets this solution realizes
  double s_p = 0, s_q = 0;
  RotationMatrix m_p_target, m_q_target;
};

enum class CountClassification {
  generic,
  degenerate_alpha_gt_1,
  degenerate_alpha_lt_1,
};

inline const char* to_string(CountClassification c) {
  switch (c) {
    case CountClassification::generic: return "generic";
    case CountClassification::degenerate_alpha_gt_1:
      return "degenerate_alpha_gt_1";
    case CountClassification::degenerate_alpha_lt_1:
      return "degenerate_alpha_lt_1";
  }
  return "?";
}

struct CountReport {
  std::vector<IntersectionSolution> solutions;
  int total_signed_count = 0;
  int ratio_num = 0, ratio_den = 64;  // boundary contribution count/64
  CountClassification classification = CountClassification::generic;
  DerivedScales scales{};
};

struct SolveOptions {
  int jitters_per_seed = 8;      // 8 asymptotic seeds x 8 jitters
  int max_newton_iters = 80;
  double newton_tol = 1e-13;     // on the direction residual norm
  double dedup_radius_rel = 1e-6;  // times L, within a branch pair
  std::uint64_t seed = 0;
};

/// The model intersection count: enumerate all branch pairs, solve the direction system
/// over admissible y_I by seeded multistart Newton, reconstruct (lambda, y0,
/// m), deduplicate, attach orientation signs.
CountReport count_model_intersections(const ProblemConfig& cfg,
                                      const SolveOptions& opts = {});

/// Orientation sign: sign of det of the 8x8 Jacobian of the residual map
/// (magnitude and direction mismatch at p and q) in the oriented chart
/// (y, lambda, axis-angle at m), calibrated so the canonical configuration
/// s_p = s_q = 1, M_p = M_q = I, y = 0, m = I gives +1.
int solution_sign(const IntersectionSolution& sol, const ProblemConfig& cfg,
                  bool flip_m_chart = false);

/// End-to-end certificate, independent of the solve path: largest of
/// sigma_2, sigma_3 of Mat(F0 + F_std) at p and q, relative to 1 + sigma_1.
double reducibility_certificate(const IntersectionSolution& sol,
                                const ProblemConfig& cfg);

/// Synthetic radial-gauge holonomy: targets M_p(y) = M_p(0) exp(skew(c_p L
/// y_I)) (and likewise at q) with ||c|| <= strength, solved by alternating
/// target refresh and Newton.  The signed count stays 6.
struct HolonomyModel {
  Mat3 c_p = Mat3::Zero();
  Mat3 c_q = Mat3::Zero();
  double strength = 0.0;
};
HolonomyModel random_holonomy_model(double strength, std::uint64_t seed);

struct HolonomyCountReport {
  CountReport report;
  CountReport unperturbed;
  double max_displacement_ratio = 0;  // max |dy| / (L |y_I|) over solutions
};
HolonomyCountReport count_with_holonomy_model(const ProblemConfig& cfg,
                                              const HolonomyModel& model,
                                              const SolveOptions& opts = {});

/// Fitted scaling exponents of the solution displacement under perturbations
/// of the target rotation M_p by angle eps, across the given eps and L grids:
/// expected dm ~ eps, dy ~ eps L, dlambda ~ eps L^2.
struct SensitivityExponents {
  double m_eps, m_L;
  double y_eps, y_L;
  double lambda_eps, lambda_L;
};
SensitivityExponents sensitivity_scan(const BackgroundModel& background,
                                      const std::vector<double>& eps_list,
                                      const std::vector<double>& L_list,
                                      std::uint64_t seed,
                                      const SolveOptions& opts = {});

/// Aggregate of many per-background counts: the boundary region contributes
/// count/64 of the simple-type requirement, leaving 64 - count to the
/// interior.
struct BoundarySummary {
  std::vector<int> counts;
  double mean_count = 0;
  int ratio_num = 0, ratio_den = 64;
  int interior_required = 64;
  bool all_generic_six = false;
};
BoundarySummary boundary_report(const std::vector<CountReport>& reports);

// Random background factories used by the experiment drivers.
BackgroundModel random_generic_background(std::uint64_t seed, double gap_min,
                                          double scale = 1.0,
                                          double patch_radius = 1.0,
                                          bool with_gradient = false);
/// sigma1 = sigma2 background with a curvature gradient strong enough to
/// split the double root into the desk-scale admissibility window at the
/// given separation (see the 4-vs-8 dichotomy).
BackgroundModel degenerate_background(std::uint64_t seed, double split_scale,
                                      double patch_radius = 1.0,
                                      double L = 1e-2, double K = 1.0);

}  // namespace asdm
