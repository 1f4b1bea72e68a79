#ifndef RASIM_GEOMETRY_HPP
#define RASIM_GEOMETRY_HPP

#include <cmath>

// Angle and direction conventions used throughout the simulator:
//   - World frame is right-handed with the transmitter at the origin,
//     x along the reference boresight axis, z up.
//   - Azimuth is measured in the horizontal plane, 0 on the x axis,
//     positive counter-clockwise seen from above, wrapped to [-pi, pi).
//   - Elevation is measured from the horizontal plane, in [-pi/2, pi/2].
//     A user "in the horizontal plane" has elevation 0.
namespace rasim {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kHalfPi = 0.5 * kPi;

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

// Wraps an angle into [-pi, pi). Throws std::invalid_argument on
// non-finite input.
double wrap_angle(double a);

struct Position3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline double norm(const Position3& p) {
  return std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
}

// Azimuth/elevation pair identifying a boresight or user bearing.
// The constructor wraps azimuth and rejects elevation outside
// [-pi/2, pi/2].
struct Direction {
  Direction() = default;
  Direction(double az, double el);

  double azimuth = 0.0;
  double elevation = 0.0;
};

// Unit vector (cos e cos a, cos e sin a, sin e) for a bearing.
Position3 direction_to_unit(const Direction& d);

struct Bearing {
  Direction direction;
  double range_m = 0.0;
};

// Inverse of direction_to_unit scaled by range. Rejects the zero vector
// (bearing undefined). At the elevation poles azimuth is reported as 0.
Bearing position_to_direction(const Position3& p);

// Angle in [0, pi] between two bearings (the off-boresight angle fed to
// the gain pattern). Symmetric in its arguments.
double angular_separation(const Direction& d1, const Direction& d2);

}  // namespace rasim

#endif  // RASIM_GEOMETRY_HPP
