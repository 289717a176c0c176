#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <vector>

namespace asdm {

enum class QuadMethod { adaptive_nested, monte_carlo, radial_1d };

inline const char* to_string(QuadMethod m) {
  switch (m) {
    case QuadMethod::adaptive_nested: return "adaptive_nested";
    case QuadMethod::monte_carlo: return "monte_carlo";
    case QuadMethod::radial_1d: return "radial_1d";
  }
  return "?";
}

struct QuadratureResult {
  double value = 0.0;
  double err_estimate = 0.0;
  std::int64_t n_evals = 0;
  QuadMethod method = QuadMethod::adaptive_nested;
  std::uint64_t seed = 0;  // Monte Carlo only
};

namespace quad_detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1].
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {0.129484966168870, 0.279705391489277,
                                  0.381830050505119, 0.417959183673469};

struct Interval {
  double a, b, value, error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

template <typename F>
Interval gk15(const F& f, double a, double b, std::int64_t& evals) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double resk = 0, resg = 0;
  for (int j = 0; j < 8; ++j) {
    const double fp = f(c + h * kXgk[j]);
    const double fm = (j == 7) ? fp : f(c - h * kXgk[j]);
    evals += (j == 7) ? 1 : 2;
    const double sum = (j == 7) ? fp : fp + fm;
    resk += kWgk[j] * sum;
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  const double value = resk * h;
  const double error = std::abs((resk - resg) * h);
  return {a, b, value, error};
}

}  // namespace quad_detail

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_intervals = 20000;
};

/// Adaptive 1D Gauss-Kronrod integration over [a, b], greedy bisection of the
/// worst interval.
template <typename F>
QuadratureResult integrate_adaptive(const F& f, double a, double b,
                                    const QuadOptions& opt = {}) {
  QuadratureResult res;
  res.method = QuadMethod::adaptive_nested;
  if (a == b) return res;
  std::priority_queue<quad_detail::Interval> heap;
  heap.push(quad_detail::gk15(f, a, b, res.n_evals));
  double total = heap.top().value, err = heap.top().error;
  int n = 1;
  while (n < opt.max_intervals &&
         err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
    quad_detail::Interval w = heap.top();
    heap.pop();
    const double mid = 0.5 * (w.a + w.b);
    if (mid == w.a || mid == w.b) {  // cannot refine further
      heap.push(w);
      break;
    }
    const auto left = quad_detail::gk15(f, w.a, mid, res.n_evals);
    const auto right = quad_detail::gk15(f, mid, w.b, res.n_evals);
    total += left.value + right.value - w.value;
    err += left.error + right.error - w.error;
    heap.push(left);
    heap.push(right);
    ++n;
  }
  res.value = total;
  res.err_estimate = std::max(err, 0.0);
  return res;
}

/// Same, with user-supplied initial break points (sorted, spanning [a, b]).
template <typename F>
QuadratureResult integrate_adaptive_segments(const F& f,
                                             const std::vector<double>& breaks,
                                             const QuadOptions& opt = {}) {
  QuadratureResult res;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    QuadratureResult piece =
        integrate_adaptive(f, breaks[i], breaks[i + 1], opt);
    res.value += piece.value;
    res.err_estimate += piece.err_estimate;
    res.n_evals += piece.n_evals;
  }
  return res;
}

}  // namespace asdm
