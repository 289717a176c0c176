#pragma once

#include <cmath>
#include <cstdint>

#include "asdm/quaternion.hpp"
#include "asdm/rotation.hpp"

namespace asdm {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}
}  // namespace detail

/// Counter-based uniform stream: the value at (index, slot) depends only on
/// (seed, index, slot), so sample ranges can be partitioned across workers in
/// any way without changing the result.
struct CounterRng {
  std::uint64_t seed = 0;

  double u01(std::uint64_t index, std::uint32_t slot) const {
    const std::uint64_t h = detail::splitmix64(
        detail::splitmix64(seed ^ 0x6A09E667F3BCC909ull) ^
        detail::splitmix64(index * 0x9E3779B97F4A7C15ull + slot));
    // 53-bit mantissa in (0, 1)
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
  }
};

/// Stateful convenience stream built on the counter generator.
struct RngStream {
  CounterRng rng;
  std::uint64_t index = 0;

  explicit RngStream(std::uint64_t seed) : rng{seed} {}

  double u01() { return rng.u01(index++, 0); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  double normal() {
    const double u1 = u01(), u2 = u01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double half_cauchy(double scale) {
    return scale * std::tan(0.5 * M_PI * u01());
  }

  Vec3 normal3() { return Vec3(normal(), normal(), normal()); }

  Quatd unit_quaternion() {
    Vec4 v(normal(), normal(), normal(), normal());
    while (v.norm() < 1e-6) v = Vec4(normal(), normal(), normal(), normal());
    return Quatd::from_vec4(v.normalized());
  }

  Vec3 unit_vec3() {
    Vec3 v = normal3();
    while (v.norm() < 1e-6) v = normal3();
    return v.normalized();
  }

  Mat3 rotation() { return rho(unit_quaternion()); }

  Mat3 matrix3(double lo, double hi) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = uniform(lo, hi);
    return m;
  }
};

}  // namespace asdm
