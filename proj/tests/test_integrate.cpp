#include <doctest.h>

#include <complex>

#include "asdm/integrate.hpp"
#include "asdm/rng.hpp"

using namespace asdm;

namespace {

// Degree-3 truncated Taylor arithmetic over complex coefficients, for
// closed-form residues of the order-4 poles in the z-integral.
struct Taylor4 {
  std::array<std::complex<double>, 4> c{};

  static Taylor4 constant(std::complex<double> v) {
    Taylor4 t;
    t.c[0] = v;
    return t;
  }
  static Taylor4 variable(std::complex<double> v) {
    Taylor4 t;
    t.c[0] = v;
    t.c[1] = 1.0;
    return t;
  }
  Taylor4 operator+(const Taylor4& o) const {
    Taylor4 r;
    for (int i = 0; i < 4; ++i) r.c[i] = c[i] + o.c[i];
    return r;
  }
  Taylor4 operator*(const Taylor4& o) const {
    Taylor4 r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; i + j < 4; ++j) r.c[i + j] += c[i] * o.c[j];
    return r;
  }
  Taylor4 inverse() const {
    // 1/(c0 (1 + u)) with u = (series - c0)/c0, truncated geometric series
    Taylor4 u;
    for (int i = 1; i < 4; ++i) u.c[i] = c[i] / c[0];
    Taylor4 r = constant(1.0);
    Taylor4 up = constant(1.0);
    double sign = -1.0;
    for (int k = 1; k < 4; ++k) {
      up = up * u;
      for (int i = 0; i < 4; ++i) r.c[i] += sign * up.c[i];
      sign = -sign;
    }
    for (int i = 0; i < 4; ++i) r.c[i] /= c[0];
    return r;
  }
  Taylor4 pow4() const {
    const Taylor4 sq = (*this) * (*this);
    return sq * sq;
  }
};

// closed-form integral of dz / ((z^2+c)^4 ((z-2)^2+c)^4) by residues at the
// two order-4 poles in the upper half plane
double z_integral_residue(double c) {
  const std::complex<double> ia(0.0, std::sqrt(c));
  auto residue_at = [&](std::complex<double> z0, bool first_pole) {
    // f = 1/((z - z0)^4 (z + z0 - shift...)^4 ...) -- build the regular part
    // g(z) = (z - z0)^4 f(z) as a Taylor series at z0 and take coeff of eps^3.
    const Taylor4 z = Taylor4::variable(z0);
    Taylor4 reg;
    if (first_pole) {
      // poles of (z^2 + c): z0 = ia and -ia; regular factor (z + ia)^4
      const Taylor4 zpia = Taylor4::variable(z0 + ia);
      const Taylor4 zm2 = Taylor4::variable(z0 - 2.0);
      const Taylor4 q = zm2 * zm2 + Taylor4::constant(c);
      reg = (zpia.pow4() * q.pow4()).inverse();
    } else {
      // pole of ((z-2)^2 + c) at z0 = 2 + ia; regular factor (z - 2 + ia)^4
      const Taylor4 zm2pia = Taylor4::variable(z0 - 2.0 + ia);
      const Taylor4 q = z * z + Taylor4::constant(c);
      reg = (zm2pia.pow4() * q.pow4()).inverse();
    }
    return reg.c[3];
  };
  const std::complex<double> r1 = residue_at(ia, true);
  const std::complex<double> r2 = residue_at(2.0 + ia, false);
  const std::complex<double> total =
      std::complex<double>(0.0, 2.0 * M_PI) * (r1 + r2);
  return total.real();
}

}  // namespace

TEST_CASE("toy integral: pi^2/2, zero at L = 0, reflection symmetry") {
  ToyConfig cfg;
  cfg.L = 1.0;
  cfg.x_max = 2e7;
  cfg.lambda_max = 2e7;
  const QuadratureResult r = toy_wedge_integral(cfg);
  CHECK(std::abs(r.value - M_PI * M_PI / 2.0) < 1e-6);
  CHECK(r.err_estimate < 5e-6);
  CHECK(r.n_evals > 0);

  ToyConfig zero;
  zero.L = 0.0;
  const QuadratureResult rz = toy_wedge_integral(zero);
  CHECK(rz.value == 0.0);
  CHECK(rz.n_evals == 0);

  ToyConfig bad;
  bad.x_max = -1.0;
  CHECK_THROWS_AS(toy_wedge_integral(bad), std::invalid_argument);

  // x -> -x change of variables sends L to -L with the same magnitude
  ToyConfig neg = cfg;
  neg.L = -1.0;
  const QuadratureResult rn = toy_wedge_integral(neg);
  CHECK(std::abs(std::abs(rn.value) - std::abs(r.value)) < 2e-6);
  CHECK(rn.value == doctest::Approx(-r.value).epsilon(1e-6));
}

TEST_CASE("mu_loc fiber integrand: frozen value, positivity, invariance") {
  // a = 1, b = 0, p = 0, q = 2: 2^4 (8 pi^2)^-2 * 48 * (48/625)
  const FiberPoint fp{{1, 0, 0, 0}, {0, 0, 0, 0}};
  const double expect =
      16.0 / (64.0 * std::pow(M_PI, 4)) * 48.0 * (48.0 / 625.0);
  CHECK(mu_loc_fiber_integrand(fp, {0, 0, 0, 0}, {2, 0, 0, 0}) ==
        doctest::Approx(expect).epsilon(1e-14));

  // p = q stays positive at the integrand level
  CHECK(mu_loc_fiber_integrand(fp, {1, 0, 0, 0}, {1, 0, 0, 0}) > 0.0);

  // simultaneous translation of b, p, q
  RngStream rng(3);
  for (int i = 0; i < 20; ++i) {
    const Quatd shift{rng.normal(), rng.normal(), rng.normal(), rng.normal()};
    const Quatd a{rng.uniform(0.2, 2.0), rng.normal(), 0, 0};
    const Quatd b{rng.normal(), rng.normal(), 0, 0};
    const Quatd p{0, 0, 0, 0}, q{2, 0, 0, 0};
    const double v0 = mu_loc_fiber_integrand({a, b}, p, q);
    const double v1 =
        mu_loc_fiber_integrand({a, b + shift}, p + shift, q + shift);
    CHECK(v0 == doctest::Approx(v1).epsilon(1e-12));
  }
  CHECK_THROWS_AS(
      mu_loc_fiber_integrand({{0, 0, 0, 0}, {0, 0, 0, 0}}, {0, 0, 0, 0},
                             {2, 0, 0, 0}),
      std::invalid_argument);
}

TEST_CASE("I_p reduced: equals 1 to 1e-4; integrand sanity") {
  const QuadratureResult r = integrate_Ip_reduced();
  CHECK(std::abs(r.value - 1.0) <= 1e-4);
  CHECK(r.err_estimate < 1e-4);

  // inner z-integral at (lambda, r) = (1, 1): adaptive quadrature vs the
  // partial-fraction (residue) evaluation
  const double c = 2.0;  // lambda^2 + r^2
  const QuadratureResult zq = integrate_adaptive(
      [&](double z) {
        return 1.0 / (std::pow(c + z * z, 4) *
                      std::pow(c + (z - 2) * (z - 2), 4));
      },
      -60.0, 62.0, QuadOptions{1e-16, 1e-12, 20000});
  const double closed = z_integral_residue(c);
  CHECK(zq.value == doctest::Approx(closed).epsilon(1e-9));
  CHECK(closed > 0.0);
  CHECK(std::isfinite(closed));
}

TEST_CASE("I_p Monte Carlo: reproducible, right value, sane error bars") {
  const QuadratureResult a = integrate_Ip_mc(7, 400000, 2);
  const QuadratureResult b = integrate_Ip_mc(7, 400000, 5);
  CHECK(a.value == b.value);  // thread-count independence, bit-exact
  CHECK(a.err_estimate == b.err_estimate);

  CHECK(std::abs(a.value - 1.0) < std::max(0.02, 4.0 * a.err_estimate));

  // quadrupling the sample count halves the standard error (variance ~ 1/n)
  const QuadratureResult c = integrate_Ip_mc(7, 1600000, 4);
  const double ratio = c.err_estimate / a.err_estimate;
  CHECK(ratio > 0.4);
  CHECK(ratio < 0.6);

  // agreement with the reduced quadrature within combined error bars
  const QuadratureResult reduced = integrate_Ip_reduced();
  CHECK(std::abs(c.value - reduced.value) <
        3.0 * (c.err_estimate + reduced.err_estimate) + 1e-4);
}

TEST_CASE("sphere-factor audit: |S^3| = 2 pi^2 and |S^2| = 4 pi by MC") {
  CounterRng rng{99};
  const std::int64_t n = 4000000;
  std::int64_t in4 = 0, in3 = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    double x[4];
    for (int k = 0; k < 4; ++k) x[k] = 2.0 * rng.u01(i, k) - 1.0;
    const double r4 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
    if (r4 <= 1.0) ++in4;
    const double r3 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    if (r3 <= 1.0) ++in3;
  }
  // |B^4| = |S^3|/4, |B^3| = |S^2|/3
  const double s3 = 4.0 * 16.0 * double(in4) / double(n);
  const double s2 = 3.0 * 8.0 * double(in3) / double(n);
  CHECK(std::abs(s3 - 2.0 * M_PI * M_PI) / (2.0 * M_PI * M_PI) < 1e-3);
  CHECK(std::abs(s2 - 4.0 * M_PI) / (4.0 * M_PI) < 1e-3);
}

TEST_CASE("truncated fiber integrals: monotone exhaustion toward 1") {
  std::vector<double> values;
  for (double L : {0.1, 0.03, 0.01}) {
    const QuadratureResult r =
        truncated_fiber_integral(L, FiberRegion::standard(L));
    values.push_back(r.value);
    CHECK(r.value > 0.0);
    CHECK(r.value < 1.001);
  }
  CHECK(values[0] <= values[1]);
  CHECK(values[1] <= values[2]);
  CHECK(values[2] >= 0.95);

  // complement mass tends to zero
  const double ip = integrate_Ip_reduced().value;
  CHECK(ip - values[2] < 0.05);
  CHECK(ip - values[2] >= -1e-3);

  // degenerate truncation
  const QuadratureResult empty =
      truncated_fiber_integral(0.1, FiberRegion{1.0, 0.5, 1.0});
  CHECK(empty.value == 0.0);
  CHECK_THROWS_AS(truncated_fiber_integral(-1.0, FiberRegion::standard(0.1)),
                  std::invalid_argument);
}

TEST_CASE("limit order: fixed points with shrinking lambda cutoff lose mass") {
  // holding p, q fixed (separation 2) and sending the upper lambda cutoff to
  // zero drives the integral to zero...
  std::vector<double> shrinking;
  for (double lam0 : {1.0, 0.3, 0.1}) {
    const QuadratureResult r =
        truncated_fiber_integral(0.01, FiberRegion{1e-4, lam0, 1e3});
    shrinking.push_back(r.value);
  }
  CHECK(shrinking[0] > shrinking[1]);
  CHECK(shrinking[1] > shrinking[2]);
  CHECK(shrinking[2] < 0.2);

  // ...while the coupled schedule dist ~ lambda0^{1+alpha'} keeps it near 1:
  // in rescaled units the cutoff lambda0/L ~ L^{-alpha'/(1+alpha')} grows
  for (double L : {0.05, 0.01}) {
    const double lam0_rescaled = std::pow(L, -0.5);
    const QuadratureResult r =
        truncated_fiber_integral(L, FiberRegion{L, lam0_rescaled, 1e3});
    CHECK(r.value > 0.8);
  }
}

TEST_CASE("concentration profile: median scale O(L), totals consistent") {
  const ConcentrationProfile p1 = concentration_profile(1e-1, 24, 1e-5);
  const ConcentrationProfile p2 = concentration_profile(1e-2, 24, 1e-5);
  const ConcentrationProfile p3 = concentration_profile(1e-3, 24, 1e-5);
  const double r1 = p1.median_lambda / p1.L;
  const double r2 = p2.median_lambda / p2.L;
  const double r3 = p3.median_lambda / p3.L;
  const double mean = (r1 + r2 + r3) / 3.0;
  for (double r : {r1, r2, r3}) {
    CHECK(r >= 0.5 * mean);
    CHECK(r <= 2.0 * mean);
  }
  // halving L halves the median scale (within the same factor window)
  CHECK(p2.median_lambda / p1.median_lambda ==
        doctest::Approx(0.1).epsilon(0.5));

  // total mass matches the truncated integral over the same region
  const QuadratureResult whole =
      truncated_fiber_integral(1e-2, FiberRegion::standard(1e-2));
  CHECK(p2.total_mass == doctest::Approx(whole.value).epsilon(1e-3));
}

TEST_CASE("de Rham boundary report: 1/2 and 1/8") {
  QuadratureResult ip;
  ip.value = 1.0;
  ip.err_estimate = 1e-5;
  const DeRhamBoundaryReport r = de_rham_boundary_report(ip);
  CHECK(r.fiber_limit == doctest::Approx(0.5));
  CHECK(r.coincident_value == 0.0);
  CHECK(r.ratio == doctest::Approx(0.125));
}

TEST_CASE("positivity of the fiber integrand on random evaluations") {
  RngStream rng(17);
  for (int i = 0; i < 1000; ++i) {
    const FiberPoint fp{
        Quatd{rng.normal(), rng.normal(), rng.normal(), rng.normal()},
        Quatd{rng.normal(), rng.normal(), rng.normal(), rng.normal()}};
    if (fp.a.norm() < 1e-6) continue;
    CHECK(mu_loc_fiber_integrand(fp, {0, 0, 0, 0}, {2, 0, 0, 0}) >= 0.0);
  }
}
