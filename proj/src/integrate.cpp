#include "asdm/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "asdm/rng.hpp"

namespace asdm {

// ---------------------------------------------------------------------------
// Toy integral
// ---------------------------------------------------------------------------

QuadratureResult toy_wedge_integral(const ToyConfig& cfg) {
  QuadratureResult res;
  res.method = QuadMethod::adaptive_nested;
  if (cfg.x_max <= 0 || cfg.lambda_max <= 0)
    throw std::invalid_argument("toy_wedge_integral: truncation must be positive");
  if (cfg.L == 0.0) return res;  // dtheta_0 ^ dtheta_0 vanishes identically

  const double L = cfg.L;
  const double aL = std::abs(L);
  QuadOptions inner_opt{1e-13, 1e-10, 4000};
  QuadOptions outer_opt{1e-12, 5e-9, 20000};

  std::int64_t inner_evals = 0;
  auto inner = [&](double x) {
    auto f = [&](double lam) {
      return lam * L /
             ((x * x + lam * lam) * ((x - L) * (x - L) + lam * lam));
    };
    // integrand peaks near lam ~ sqrt(|x| |x-L|); split geometrically
    std::vector<double> breaks{0.0};
    const double peak = std::max(1e-8 * aL, std::sqrt(std::abs(x * (x - L))));
    for (double s : {1e-3, 1e-1, 1.0, 10.0, 1e3})
      if (peak * s < cfg.lambda_max) breaks.push_back(peak * s);
    breaks.push_back(cfg.lambda_max);
    std::sort(breaks.begin(), breaks.end());
    QuadratureResult r = integrate_adaptive_segments(f, breaks, inner_opt);
    inner_evals += r.n_evals;
    return r.value;
  };

  std::vector<double> xb{-cfg.x_max};
  for (double s : {-1e4, -1e2, -10.0, -1.0, 0.0, 0.5, 1.0, 2.0, 10.0, 1e2, 1e4})
    if (s * aL > -cfg.x_max && s * aL < cfg.x_max) xb.push_back(s * aL);
  xb.push_back(cfg.x_max);
  std::sort(xb.begin(), xb.end());
  xb.erase(std::unique(xb.begin(), xb.end()), xb.end());

  QuadratureResult outer = integrate_adaptive_segments(inner, xb, outer_opt);
  res.value = outer.value;
  res.n_evals = inner_evals;
  // analytic tail bound for the untruncated remainder: ~ 2.5 |L| / R on the
  // exterior of the half-disk of radius R = min(x_max, lambda_max)
  const double r_eff = std::min(cfg.x_max, cfg.lambda_max);
  const double tail = (r_eff > 10.0 * aL) ? 2.5 * aL / r_eff : 10.0;
  res.err_estimate = outer.err_estimate + tail;
  return res;
}

// ---------------------------------------------------------------------------
// Fiber integrand
// ---------------------------------------------------------------------------

double mu_loc_fiber_integrand(const FiberPoint& fp, const Quatd& p,
                              const Quatd& q) {
  const double a4 = fp.a.squared_norm() * fp.a.squared_norm();
  const double fp2 = fiber_curvature_norm_sq(p, fp.a, fp.b);
  const double fq2 = fiber_curvature_norm_sq(q, fp.a, fp.b);
  constexpr double kNorm = 16.0 / (64.0 * M_PI * M_PI * M_PI * M_PI);
  return kNorm * fp2 * fq2 / a4;
}

namespace {

// reduced 3D integrand lambda^7 r^2 / ((lambda^2+r^2+z^2)^4
// (lambda^2+r^2+(z-2)^2)^4) carries the sphere factors 2 pi^2 and 4 pi and
// the prefactor 36 pi^-4 2^4 into
constexpr double kReducedPrefactor = 4608.0 / M_PI;  // 36 pi^-4 2^4 8 pi^3

double reduced_kernel(double lam2_plus_r2, double z) {
  const double d1 = lam2_plus_r2 + z * z;
  const double d2 = lam2_plus_r2 + (z - 2.0) * (z - 2.0);
  return 1.0 / (std::pow(d1, 4) * std::pow(d2, 4));
}

}  // namespace

QuadratureResult integrate_Ip_reduced(double rel_tol) {
  QuadratureResult res;
  res.method = QuadMethod::adaptive_nested;

  // polar substitution (lambda, r) = rho (cos phi, sin phi) separates the
  // angular factor: integral of cos^7 sin^2 (exact value 16/315)
  QuadOptions phi_opt{1e-14, 1e-12, 2000};
  const QuadratureResult q_phi = integrate_adaptive(
      [](double phi) {
        const double c = std::cos(phi), s = std::sin(phi);
        return std::pow(c, 7) * s * s;
      },
      0.0, 0.5 * M_PI, phi_opt);

  const double rho_max = 80.0, z_lo = -80.0, z_hi = 82.0;
  QuadOptions rho_opt{1e-16, rel_tol * 0.1, 4000};
  QuadOptions z_opt{1e-15, rel_tol * 0.5, 8000};
  std::int64_t evals = 0;
  auto z_integrand = [&](double z) {
    auto f = [&](double rho) {
      return std::pow(rho, 10) * reduced_kernel(rho * rho, z);
    };
    const std::vector<double> breaks{0.0, 0.5, 1.0, 2.0, 4.0, 10.0, 30.0,
                                     rho_max};
    QuadratureResult r = integrate_adaptive_segments(f, breaks, rho_opt);
    evals += r.n_evals;
    return r.value;
  };
  const std::vector<double> zb{z_lo, -10.0, -2.0, 0.0, 1.0, 2.0, 4.0, 12.0,
                               z_hi};
  const QuadratureResult q_rz =
      integrate_adaptive_segments(z_integrand, zb, z_opt);

  res.value = kReducedPrefactor * q_phi.value * q_rz.value;
  // rho-tail: the z-integrated kernel decays like 0.66 rho^-5 beyond the
  // cutoff; the z-tail is comparable and both sit far below the tolerance
  const double tail = kReducedPrefactor * q_phi.value * 2.0 * 0.66 /
                      (4.0 * std::pow(rho_max, 4));
  res.err_estimate = kReducedPrefactor *
                         (q_phi.err_estimate * q_rz.value +
                          q_phi.value * q_rz.err_estimate) +
                     tail;
  res.n_evals = evals + q_phi.n_evals + q_rz.n_evals;
  return res;
}

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

namespace {

constexpr double kMcScaleA = 1.0;
constexpr double kMcScaleB = 1.0;

double half_cauchy_pdf(double r, double s) {
  return (2.0 / (M_PI * s)) / (1.0 + (r / s) * (r / s));
}

double half_cauchy_icdf(double u, double s) {
  return s * std::tan(0.5 * M_PI * u);
}

// R^4 proposal density of "radius ~ half-Cauchy, direction uniform on S^3"
double radial_density4(double r, double s) {
  return half_cauchy_pdf(r, s) / (2.0 * M_PI * M_PI * r * r * r);
}

struct McSample {
  FiberPoint fp;
  double weight;  // integrand / proposal
};

McSample draw_sample(const CounterRng& rng, std::uint64_t i, const Quatd& p,
                     const Quatd& q) {
  // a: half-Cauchy radius, uniform direction
  const double ra = half_cauchy_icdf(rng.u01(i, 0), kMcScaleA);
  auto gauss_pair = [&](std::uint32_t slot, double* g1, double* g2) {
    const double u1 = rng.u01(i, slot), u2 = rng.u01(i, slot + 1);
    const double m = std::sqrt(-2.0 * std::log(u1));
    *g1 = m * std::cos(2.0 * M_PI * u2);
    *g2 = m * std::sin(2.0 * M_PI * u2);
  };
  double g[4];
  gauss_pair(1, &g[0], &g[1]);
  gauss_pair(3, &g[2], &g[3]);
  Vec4 da(g[0], g[1], g[2], g[3]);
  if (da.norm() < 1e-12) da = Vec4(1, 0, 0, 0);
  da.normalize();
  const Quatd a = Quatd::from_vec4(ra * da);

  // b: mixture of half-Cauchy shells around p and q
  const bool at_q = rng.u01(i, 5) < 0.5;
  const double rb = half_cauchy_icdf(rng.u01(i, 6), kMcScaleB);
  gauss_pair(7, &g[0], &g[1]);
  gauss_pair(9, &g[2], &g[3]);
  Vec4 db(g[0], g[1], g[2], g[3]);
  if (db.norm() < 1e-12) db = Vec4(1, 0, 0, 0);
  db.normalize();
  const Quatd center = at_q ? q : p;
  const Quatd b = center + Quatd::from_vec4(rb * db);

  const double qa = radial_density4(ra, kMcScaleA);
  const double qb = 0.5 * (radial_density4((b - p).norm(), kMcScaleB) +
                           radial_density4((b - q).norm(), kMcScaleB));
  McSample s;
  s.fp = {a, b};
  s.weight = mu_loc_fiber_integrand(s.fp, p, q) / (qa * qb);
  return s;
}

}  // namespace

QuadratureResult integrate_Ip_mc(std::uint64_t seed, std::int64_t n_samples,
                                 int threads) {
  if (n_samples < 1)
    throw std::invalid_argument("integrate_Ip_mc: n_samples < 1");
  const Quatd p{0, 0, 0, 0}, q{2, 0, 0, 0};
  const CounterRng rng{seed};

  constexpr std::int64_t kBlock = 1 << 16;
  const std::int64_t n_blocks = (n_samples + kBlock - 1) / kBlock;
  std::vector<double> block_sum(n_blocks, 0.0), block_sum2(n_blocks, 0.0);

  int n_threads = threads;
  if (n_threads <= 0) {
    if (const char* env = std::getenv("THREADS")) n_threads = std::atoi(env);
    if (n_threads <= 0)
      n_threads = static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads <= 0) n_threads = 1;
  }

  auto worker = [&](int w) {
    for (std::int64_t blk = w; blk < n_blocks; blk += n_threads) {
      const std::int64_t lo = blk * kBlock;
      const std::int64_t hi = std::min(n_samples, lo + kBlock);
      double s = 0, s2 = 0;
      for (std::int64_t i = lo; i < hi; ++i) {
        const McSample smp =
            draw_sample(rng, static_cast<std::uint64_t>(i), p, q);
        s += smp.weight;
        s2 += smp.weight * smp.weight;
      }
      block_sum[blk] = s;
      block_sum2[blk] = s2;
    }
  };
  if (n_threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_threads; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }

  // fixed block-order reduction keeps the result independent of threading
  double sum = 0, sum2 = 0;
  for (std::int64_t blk = 0; blk < n_blocks; ++blk) {
    sum += block_sum[blk];
    sum2 += block_sum2[blk];
  }
  const double n = static_cast<double>(n_samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0));

  QuadratureResult res;
  res.method = QuadMethod::monte_carlo;
  res.seed = seed;
  res.value = mean;
  res.err_estimate = std::sqrt(var / n);  // one standard error
  res.n_evals = n_samples;
  return res;
}

// ---------------------------------------------------------------------------
// Truncated fiber integrals
// ---------------------------------------------------------------------------

namespace {

// 3D reduced integral of the fiber integrand over lambda in [l0, l1],
// (r, z) in the disk r^2 + z^2 <= R(lambda)^2 around p = 0, with q at 2.
QuadratureResult reduced_region_integral(double l0, double l1,
                                         const std::function<double(double)>& b_radius,
                                         double rel_tol, int lambda_segments) {
  QuadratureResult res;
  res.method = QuadMethod::adaptive_nested;
  if (l1 <= l0) return res;
  std::int64_t evals = 0;
  QuadOptions r_opt{1e-18, rel_tol * 0.2, 2000};
  QuadOptions z_opt{1e-17, rel_tol * 0.5, 4000};
  QuadOptions l_opt{1e-16, rel_tol, 8000};

  auto lambda_integrand = [&](double lam) {
    const double rad = b_radius(lam);
    if (rad <= 0) return 0.0;
    const double lam2 = lam * lam;
    auto z_integrand = [&](double z) {
      const double rmax2 = rad * rad - z * z;
      if (rmax2 <= 0) return 0.0;
      const double rmax = std::sqrt(rmax2);
      auto f = [&](double r) {
        return r * r * reduced_kernel(lam2 + r * r, z);
      };
      QuadratureResult rr = integrate_adaptive(f, 0.0, rmax, r_opt);
      evals += rr.n_evals;
      return rr.value;
    };
    std::vector<double> zb{-rad};
    for (double s : {-2.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 4.0})
      if (s > -rad && s < rad) zb.push_back(s);
    zb.push_back(rad);
    QuadratureResult rz = integrate_adaptive_segments(z_integrand, zb, z_opt);
    evals += rz.n_evals;
    return std::pow(lam, 7) * rz.value;
  };

  // geometric lambda segments: the integrand spans many scales
  std::vector<double> lb;
  const double ratio = std::pow(l1 / l0, 1.0 / lambda_segments);
  for (int i = 0; i <= lambda_segments; ++i)
    lb.push_back(l0 * std::pow(ratio, i));
  QuadratureResult rl = integrate_adaptive_segments(lambda_integrand, lb, l_opt);

  res.value = kReducedPrefactor * rl.value;
  res.err_estimate = kReducedPrefactor * rl.err_estimate;
  res.n_evals = evals + rl.n_evals;
  return res;
}

}  // namespace

QuadratureResult truncated_fiber_integral(double L, const FiberRegion& region,
                                          double rel_tol) {
  if (L <= 0) throw std::invalid_argument("truncated_fiber_integral: L <= 0");
  QuadratureResult res;
  res.method = QuadMethod::adaptive_nested;
  if (region.empty()) return res;
  return reduced_region_integral(
      region.lambda_min, region.lambda_max,
      [&](double lam) { return region.b_radius(lam); }, rel_tol, 24);
}

// ---------------------------------------------------------------------------
// Concentration profile
// ---------------------------------------------------------------------------

ConcentrationProfile concentration_profile(double L, int n_bins,
                                           double rel_tol) {
  if (L <= 0) throw std::invalid_argument("concentration_profile: L <= 0");
  if (n_bins < 4) throw std::invalid_argument("concentration_profile: n_bins");
  const FiberRegion region = FiberRegion::standard(L);

  ConcentrationProfile prof;
  prof.L = L;
  const double ratio =
      std::pow(region.lambda_max / region.lambda_min, 1.0 / n_bins);
  double edge = region.lambda_min;
  for (int i = 0; i < n_bins; ++i) {
    const double next = edge * ratio;
    QuadratureResult bin = reduced_region_integral(
        edge, next, [&](double lam) { return region.b_radius(lam); },
        rel_tol, 2);
    prof.bin_lo.push_back(edge * L);  // rescale to physical units
    prof.bin_hi.push_back(next * L);
    prof.mass.push_back(bin.value);
    prof.total_mass += bin.value;
    prof.n_evals += bin.n_evals;
    edge = next;
  }
  // median by cumulative interpolation in log(lambda)
  double acc = 0;
  const double half = 0.5 * prof.total_mass;
  for (int i = 0; i < n_bins; ++i) {
    if (acc + prof.mass[i] >= half) {
      const double frac = (half - acc) / prof.mass[i];
      prof.median_lambda = prof.bin_lo[i] *
                           std::pow(prof.bin_hi[i] / prof.bin_lo[i], frac);
      break;
    }
    acc += prof.mass[i];
  }
  return prof;
}

DeRhamBoundaryReport de_rham_boundary_report(const QuadratureResult& ip) {
  DeRhamBoundaryReport r;
  r.ip_value = ip.value;
  r.ip_error = ip.err_estimate;
  r.fiber_limit = 0.5 * ip.value;  // two-to-one covering of the gluing angles
  r.coincident_value = 0.0;        // dvol_p ^ dvol_p = 0, structurally exact
  r.naive_requirement = 4.0;
  r.ratio = r.fiber_limit / r.naive_requirement;
  return r;
}

}  // namespace asdm
