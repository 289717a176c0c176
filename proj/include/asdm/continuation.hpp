#pragma once

#include <vector>

#include "asdm/intersect.hpp"

namespace asdm {

struct ContinuationOptions {
  double dt_min = 1e-4;        // adaptive step floor
  int max_outer_iters = 40;    // target-refresh fixed point per t
  SolveOptions solve{};
};

/// Per-t snapshot of the tracked solution family.
struct ContinuationSlice {
  double t;
  CountReport report;
  bool zone_iii_at_p = true;
  bool zone_iii_at_q = true;
  double max_certificate = 0;  // worst sigma_23 / (1 + sigma_1) of Mat(F_t^-)
};

struct ContinuationReport {
  std::vector<ContinuationSlice> slices;  // at the requested grid points
  int steps_taken = 0;
};

/// Track the t = 1 solution family down to t = 0 along the interpolation
/// F_t = t (F_A0 + F_std) + (1 - t) F_A', re-solving the full reducibility
/// system at each step (predictor: previous solution; corrector: alternating
/// rank-1-target refresh and Newton).  The count must stay 6 with every
/// solution in the plateau zone at p and q; violations raise
/// ContinuationFailureError.
ContinuationReport continuation_count(const ProblemConfig& cfg,
                                      const GluedConnectionModel& model_template,
                                      std::vector<double> t_grid,
                                      const ContinuationOptions& opts = {});

/// Cutoff/background setup for gluing experiments: scales derived from the
/// expected bubble size at separation L via the default recipe, validated
/// against the strict scale-separation inequalities.
GluedConnectionModel make_glued_model(const BackgroundModel& background,
                                      double L);

}  // namespace asdm
