#pragma once

#include <cstdint>
#include <vector>

#include "asdm/fields.hpp"
#include "asdm/quadrature.hpp"

namespace asdm {

// ---------------------------------------------------------------------------
// Half-plane toy integral
// ---------------------------------------------------------------------------

/// Truncated domain for the wedge of the two polar-angle forms on the upper
/// half plane; the full integral is pi^2/2 for L != 0 and identically 0 for
/// L = 0.
struct ToyConfig {
  double L = 1.0;
  double x_max = 1e7;
  double lambda_max = 1e7;
};

QuadratureResult toy_wedge_integral(const ToyConfig& cfg);

// ---------------------------------------------------------------------------
// Fiber integrand and the 8-dimensional integral I_p
// ---------------------------------------------------------------------------

/// Point of the bubble-parameter fiber: scale-gluing quaternion a (lambda =
/// |a|, gluing angle a/|a|) and center b.
struct FiberPoint {
  Quatd a;
  Quatd b;
};

/// Density of mu_loc(p) ^ mu_loc(q) pulled back to the fiber:
/// 2^4 (8 pi^2)^-2 |F_(a,b)(p)|^2 |F_(a,b)(q)|^2 |a|^-4.
double mu_loc_fiber_integrand(const FiberPoint& fp, const Quatd& p,
                              const Quatd& q);

/// I_p by nested adaptive quadrature of the reduced 3D integral (polar
/// coordinates in the scale-radius quarter-plane, closed-form sphere
/// factors); exact value 1.
QuadratureResult integrate_Ip_reduced(double rel_tol = 1e-7);

/// I_p by importance-sampled Monte Carlo over the full 8D parameter space,
/// half-Cauchy radial proposals centered on the two marked points.
/// Deterministic for fixed seed, independent of thread count.
QuadratureResult integrate_Ip_mc(std::uint64_t seed, std::int64_t n_samples,
                                 int threads = 0);

// ---------------------------------------------------------------------------
// Truncated-domain studies
// ---------------------------------------------------------------------------

/// Rescaled truncation region: lambda in [lambda_min, lambda_max] and the
/// center within radius b_coeff * sqrt(lambda) of p.
struct FiberRegion {
  double lambda_min;
  double lambda_max;
  double b_coeff;

  /// Region schedule of the exhaustion argument: lambda in [L, L^-0.8],
  /// |b - p| <= n0 L^-1/2 sqrt(lambda); nested as L decreases.
  static FiberRegion standard(double L, double n0 = 1.0) {
    return {L, std::pow(L, -0.8), n0 / std::sqrt(L)};
  }

  double b_radius(double lambda) const {
    return b_coeff * std::sqrt(lambda);
  }
  bool empty() const { return lambda_max <= lambda_min || b_coeff <= 0; }
};

/// Integral of the fiber integrand over the rescaled region (p, q at distance
/// 2); approaches I_p = 1 monotonically as L decreases.
QuadratureResult truncated_fiber_integral(double L, const FiberRegion& region,
                                          double rel_tol = 1e-6);

// ---------------------------------------------------------------------------
// Concentration profile
// ---------------------------------------------------------------------------

/// Mass-weighted distribution of the fiber integrand over the bubble scale,
/// for marked points at separation 2L in physical units.  The median scale
/// tracks O(L), in contrast with the O(L^2) scales selected by the
/// intersection solver.
struct ConcentrationProfile {
  double L = 0;
  std::vector<double> bin_lo, bin_hi, mass;  // physical lambda bins
  double median_lambda = 0;
  double total_mass = 0;
  std::int64_t n_evals = 0;
};

ConcentrationProfile concentration_profile(double L, int n_bins = 32,
                                           double rel_tol = 1e-6);

// ---------------------------------------------------------------------------
// Headline report
// ---------------------------------------------------------------------------

/// Headline de Rham numbers: the fiber integral limit (1/2) I_p after the
/// two-to-one cover factor, the structurally-zero coincident-point value, and
/// the ratio against the 4 required for simple type (-> 1/8).
struct DeRhamBoundaryReport {
  double ip_value = 0;
  double ip_error = 0;
  double fiber_limit = 0;
  double coincident_value = 0;
  double naive_requirement = 4.0;
  double ratio = 0;
};

DeRhamBoundaryReport de_rham_boundary_report(const QuadratureResult& ip);

}  // namespace asdm
