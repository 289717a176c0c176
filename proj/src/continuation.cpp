#include "asdm/continuation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace asdm {

namespace {

struct Targets {
  double s_p, s_q;
  Mat3 m_p, m_q;
};

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;

struct State {
  Quatd y;
  double lambda;
  Mat3 m;
  BranchPair pair;
};

Vec8 residual(const State& s, const Vec8& z, const Targets& t, const Quatd& p,
              const Quatd& q) {
  const Quatd y{z[0], z[1], z[2], z[3]};
  const double lambda = z[4];
  const Mat3 m = so3_exp(Vec3(z[5], z[6], z[7])) * s.m;
  Vec8 out;
  const Quatd pts[2] = {p, q};
  const double mags[2] = {t.s_p, t.s_q};
  const Mat3* dirs[2] = {&t.m_p, &t.m_q};
  for (int i = 0; i < 2; ++i) {
    const Quatd d = pts[i] - y;
    out[4 * i] =
        (fstd_magnitude(lambda, d.squared_norm()) - mags[i]) / mags[i];
    out.segment<3>(4 * i + 1) =
        so3_log(dirs[i]->transpose() * (m.transpose() * rho(d.normalized())));
  }
  return out;
}

bool newton8(State& s, const Targets& t, const Quatd& p, const Quatd& q,
             double L, int max_iters, double tol) {
  Vec8 z;
  z << s.y.w, s.y.x, s.y.y, s.y.z, s.lambda, 0, 0, 0;
  Vec8 hs;
  hs << 1e-7 * L, 1e-7 * L, 1e-7 * L, 1e-7 * L, 1e-7 * s.lambda, 1e-7, 1e-7,
      1e-7;
  for (int it = 0; it < max_iters; ++it) {
    const Vec8 r0 = residual(s, z, t, p, q);
    if (r0.norm() < tol) {
      s.y = Quatd{z[0], z[1], z[2], z[3]};
      s.lambda = z[4];
      s.m = so3_exp(Vec3(z[5], z[6], z[7])) * s.m;
      return true;
    }
    Mat8 jac;
    for (int k = 0; k < 8; ++k) {
      Vec8 zp = z, zm = z;
      zp[k] += hs[k];
      zm[k] -= hs[k];
      jac.col(k) = (residual(s, zp, t, p, q) - residual(s, zm, t, p, q)) /
                   (2.0 * hs[k]);
    }
    const Vec8 step = jac.fullPivLu().solve(-r0);
    if (!step.allFinite()) return false;
    double scale = 1.0;
    bool improved = false;
    while (scale > 1e-6) {
      const Vec8 zn = z + scale * step;
      if (zn[4] > 0 && residual(s, zn, t, p, q).norm() < r0.norm()) {
        z = zn;
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) return false;
  }
  const Vec8 rf = residual(s, z, t, p, q);
  if (rf.norm() < tol) {
    s.y = Quatd{z[0], z[1], z[2], z[3]};
    s.lambda = z[4];
    s.m = so3_exp(Vec3(z[5], z[6], z[7])) * s.m;
    return true;
  }
  return false;
}

// Effective rank-1 targets at parameter t: everything in Mat(F_t^-) except
// the instanton term, decomposed, branch chosen by continuity.
Targets effective_targets(const State& s, const GluedConnectionModel& base,
                          double t, const Quatd& p, const Quatd& q,
                          const Mat3& prev_mp, const Mat3& prev_mq) {
  GluedConnectionModel model = base;
  model.bubble = GluingData::from_m(s.y, s.lambda, s.m);
  model.t = t;
  Targets out;
  const Quatd pts[2] = {p, q};
  for (int i = 0; i < 2; ++i) {
    const GluedCurvature f = interpolated_curvature(pts[i], model, t);
    const Mat3 p_eff = f.asd - fstd_radial_gauge(pts[i], model.bubble);
    const auto dec = decompose_rank1(p_eff);
    const Mat3& prev = (i == 0) ? prev_mp : prev_mq;
    const double d0 = so3_log(dec[0].m.transpose() * prev).norm();
    const double d1 = so3_log(dec[1].m.transpose() * prev).norm();
    const ReducibleDecomposition& pick = (d0 <= d1) ? dec[0] : dec[1];
    if (i == 0) {
      out.s_p = pick.s;
      out.m_p = pick.m;
    } else {
      out.s_q = pick.s;
      out.m_q = pick.m;
    }
  }
  return out;
}

// corrector at fixed t; returns the realized targets
bool correct(State& s, Targets& targets, const GluedConnectionModel& base,
             double t, const Quatd& p, const Quatd& q,
             const ContinuationOptions& opts, double L) {
  for (int outer = 0; outer < opts.max_outer_iters; ++outer) {
    const Targets next =
        effective_targets(s, base, t, p, q, targets.m_p, targets.m_q);
    const double drift =
        std::abs(next.s_p - targets.s_p) / targets.s_p +
        std::abs(next.s_q - targets.s_q) / targets.s_q +
        so3_log(next.m_p.transpose() * targets.m_p).norm() +
        so3_log(next.m_q.transpose() * targets.m_q).norm();
    targets = next;
    if (!newton8(s, targets, p, q, L, opts.solve.max_newton_iters,
                 opts.solve.newton_tol))
      return false;
    if (drift < 1e-13) return true;
  }
  return false;
}

double certificate_at(const State& s, const GluedConnectionModel& base,
                      double t, const Quatd& pt) {
  GluedConnectionModel model = base;
  model.bubble = GluingData::from_m(s.y, s.lambda, s.m);
  const Vec3 sv = singular_values(interpolated_curvature(pt, model, t).asd);
  return std::max(sv[1], sv[2]) / (1.0 + sv[0]);
}

}  // namespace

GluedConnectionModel make_glued_model(const BackgroundModel& background,
                                      double L) {
  GluedConnectionModel model;
  model.background = background;
  const double s0 = background.s0();
  const double lambda_star = L * L * std::sqrt(s0);  // expected bubble size
  model.scales = default_scales(lambda_star, background.r3(), s0);
  model.bubble =
      GluingData::from_m(Quatd{0, 0, 0, 0}, lambda_star, Mat3::Identity());
  model.t = 0.0;
  return model;
}

ContinuationReport continuation_count(const ProblemConfig& cfg,
                                      const GluedConnectionModel& model_template,
                                      std::vector<double> t_grid,
                                      const ContinuationOptions& opts) {
  std::sort(t_grid.begin(), t_grid.end(), std::greater<double>());
  if (t_grid.empty() || t_grid.front() != 1.0 || t_grid.back() != 0.0)
    throw std::invalid_argument("continuation_count: t_grid must span 1..0");

  const CountReport start = count_model_intersections(cfg, opts.solve);
  if (start.solutions.size() != 6)
    throw ContinuationFailureError(
        "continuation_count: t = 1 slice does not have 6 solutions");

  std::vector<State> states;
  std::vector<Targets> targets;
  for (const auto& sol : start.solutions) {
    states.push_back(
        {sol.gluing.y, sol.gluing.lambda, sol.gluing.m, sol.pair});
    targets.push_back(
        {sol.s_p, sol.s_q, sol.m_p_target, sol.m_q_target});
  }

  ContinuationReport out;
  const Quatd p = cfg.p(), q = cfg.q();

  auto snapshot = [&](double t) {
    ContinuationSlice slice;
    slice.t = t;
    CountReport rep;
    rep.scales = start.scales;
    rep.classification = start.classification;
    for (std::size_t i = 0; i < states.size(); ++i) {
      IntersectionSolution sol;
      sol.gluing = GluingData::from_m(states[i].y, states[i].lambda,
                                      states[i].m);
      sol.pair = states[i].pair;
      sol.y_imag = states[i].y.imag();
      sol.y0 = states[i].y.w;
      sol.lambda = states[i].lambda;
      sol.s_p = targets[i].s_p;
      sol.s_q = targets[i].s_q;
      sol.m_p_target = targets[i].m_p;
      sol.m_q_target = targets[i].m_q;
      sol.admissible = sol.lambda < cfg.lambda_max();
      Vec8 z;
      z << states[i].y.w, states[i].y.x, states[i].y.y, states[i].y.z,
          states[i].lambda, 0, 0, 0;
      sol.residual =
          residual(states[i], z, targets[i], p, q).lpNorm<Eigen::Infinity>();
      sol.sign = solution_sign(sol, cfg);
      rep.solutions.push_back(std::move(sol));

      slice.zone_iii_at_p = slice.zone_iii_at_p &&
                            zone_classify(p, states[i].y,
                                          model_template.scales) ==
                                Zone::III_plateau;
      slice.zone_iii_at_q = slice.zone_iii_at_q &&
                            zone_classify(q, states[i].y,
                                          model_template.scales) ==
                                Zone::III_plateau;
      slice.max_certificate =
          std::max(slice.max_certificate,
                   std::max(certificate_at(states[i], model_template, t, p),
                            certificate_at(states[i], model_template, t, q)));
    }
    for (const auto& s : rep.solutions) rep.total_signed_count += s.sign;
    rep.ratio_num = rep.total_signed_count;
    slice.report = std::move(rep);

    // path-crossing detection: solutions must stay pairwise separated
    for (std::size_t i = 0; i < states.size(); ++i)
      for (std::size_t j = i + 1; j < states.size(); ++j) {
        const double d = (states[i].y - states[j].y).norm() / cfg.L +
                         so3_log(states[i].m.transpose() * states[j].m).norm();
        if (d < 1e-6)
          throw ContinuationFailureError(
              "continuation_count: two tracked solutions collided");
      }
    if (!slice.zone_iii_at_p || !slice.zone_iii_at_q)
      throw ContinuationFailureError(
          "continuation_count: solution left the plateau zone");
    out.slices.push_back(std::move(slice));
  };

  snapshot(1.0);
  for (std::size_t g = 1; g < t_grid.size(); ++g) {
    double t_cur = t_grid[g - 1];
    const double t_goal = t_grid[g];
    double dt = t_cur - t_goal;
    while (t_cur > t_goal) {
      const double t_next = std::max(t_goal, t_cur - dt);
      std::vector<State> trial = states;
      std::vector<Targets> trial_targets = targets;
      bool ok = true;
      for (std::size_t i = 0; i < trial.size() && ok; ++i)
        ok = correct(trial[i], trial_targets[i], model_template, t_next, p, q,
                     opts, cfg.L);
      if (ok) {
        states = std::move(trial);
        targets = std::move(trial_targets);
        t_cur = t_next;
        ++out.steps_taken;
      } else {
        dt *= 0.5;
        if (dt < opts.dt_min)
          throw ContinuationFailureError(
              "continuation_count: corrector failed at the minimum step");
      }
    }
    snapshot(t_goal);
  }
  return out;
}

}  // namespace asdm
