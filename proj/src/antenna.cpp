#include "rasim/antenna.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rasim/geometry.hpp"

namespace rasim {

std::vector<std::string> validate(const RadiationPattern& p, const std::string& path) {
  std::vector<std::string> errors;
  if (!std::isfinite(p.peak_gain_dbi)) {
    errors.push_back(path + ".peak_gain_dbi: must be finite");
  }
  if (!(p.hpbw_rad > 0.0) || p.hpbw_rad > kPi || !std::isfinite(p.hpbw_rad)) {
    errors.push_back(path + ".hpbw_deg: half-power beamwidth must lie in (0, 180] degrees");
  }
  if (!(p.floor_attenuation_db > 0.0) || !std::isfinite(p.floor_attenuation_db)) {
    errors.push_back(path + ".floor_attenuation_db: must be > 0");
  }
  return errors;
}

double gain_dbi(const RadiationPattern& p, double psi) {
  if (!std::isfinite(psi) || psi < 0.0 || psi > kPi) {
    throw std::invalid_argument("gain_dbi: off-boresight angle must lie in [0, pi]");
  }
  const double ratio = psi / p.hpbw_rad;
  const double attenuation = std::min(12.0 * ratio * ratio, p.floor_attenuation_db);
  return p.peak_gain_dbi - attenuation;
}

}  // namespace rasim
