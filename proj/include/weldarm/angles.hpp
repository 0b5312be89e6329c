#pragma once

#include <cmath>

namespace weldarm {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Normalize to (-pi, pi].
inline double norm_angle(double a) {
  double r = std::remainder(a, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

// Shift `a` by a multiple of 2*pi so it lands within pi of `reference`.
inline double unwrap_near(double a, double reference) {
  return a + kTwoPi * std::round((reference - a) / kTwoPi);
}

inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

}  // namespace weldarm
