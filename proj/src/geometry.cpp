#include "rasim/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace rasim {

double wrap_angle(double a) {
  if (!std::isfinite(a)) {
    throw std::invalid_argument("wrap_angle: angle must be finite");
  }
  double r = std::remainder(a, kTwoPi);  // in [-pi, pi]
  if (r >= kPi) {
    r -= kTwoPi;
  }
  return r;
}

Direction::Direction(double az, double el) : azimuth(wrap_angle(az)), elevation(el) {
  if (!std::isfinite(el) || el < -kHalfPi || el > kHalfPi) {
    throw std::invalid_argument("Direction: elevation must lie in [-pi/2, pi/2]");
  }
}

Position3 direction_to_unit(const Direction& d) {
  const double ce = std::cos(d.elevation);
  return {ce * std::cos(d.azimuth), ce * std::sin(d.azimuth), std::sin(d.elevation)};
}

Bearing position_to_direction(const Position3& p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
    throw std::invalid_argument("position_to_direction: coordinates must be finite");
  }
  const double range = norm(p);
  if (range <= 0.0) {
    throw std::invalid_argument("position_to_direction: bearing of the zero vector is undefined");
  }
  const double elevation = std::asin(std::clamp(p.z / range, -1.0, 1.0));
  const double horizontal = std::hypot(p.x, p.y);
  // Azimuth is non-identifiable at the poles; report 0 by convention.
  const double azimuth = horizontal > 0.0 ? wrap_angle(std::atan2(p.y, p.x)) : 0.0;
  return {Direction(azimuth, elevation), range};
}

double angular_separation(const Direction& d1, const Direction& d2) {
  const Position3 u1 = direction_to_unit(d1);
  const Position3 u2 = direction_to_unit(d2);
  const double dot = u1.x * u2.x + u1.y * u2.y + u1.z * u2.z;
  // Clamp absorbs rounding so coincident directions do not produce NaN.
  return std::acos(std::clamp(dot, -1.0, 1.0));
}

}  // namespace rasim
