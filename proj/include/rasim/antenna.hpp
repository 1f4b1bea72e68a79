#ifndef RASIM_ANTENNA_HPP
#define RASIM_ANTENNA_HPP

#include <string>
#include <vector>

namespace rasim {

// Parametric directional-antenna gain model: parabolic in dB over the main
// lobe with a hard attenuation floor outside it,
//
//   G(psi) = peak_gain_dbi - min(12 * (psi / hpbw)^2, floor_attenuation_db)
//
// The quadratic coefficient is fixed at 12 so the half-power point lands
// exactly at psi = hpbw / 2. The pattern is rotationally symmetric about
// boresight and monotone non-increasing in psi.
struct RadiationPattern {
  double peak_gain_dbi = 10.0;
  double hpbw_rad = 1.0471975511965976;  // 60 degrees
  double floor_attenuation_db = 20.0;
};

// Aggregated invariant check; returns one message per violation, prefixed
// with `path` (e.g. "antenna.hpbw_deg").
std::vector<std::string> validate(const RadiationPattern& p, const std::string& path);

// Gain in dBi at off-boresight angle psi in [0, pi]. Throws
// std::invalid_argument outside that range.
double gain_dbi(const RadiationPattern& p, double psi);

// The receiver's ideal isotropic element: 0 dBi everywhere.
struct IsotropicPattern {};

inline double isotropic_gain_dbi(double /*psi*/) { return 0.0; }

}  // namespace rasim

#endif  // RASIM_ANTENNA_HPP
