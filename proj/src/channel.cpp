#include "rasim/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "rasim/geometry.hpp"

namespace rasim {

std::vector<std::string> validate(const LinkParams& link, const std::string& path) {
  std::vector<std::string> errors;
  if (!(link.carrier_hz > 0.0) || !std::isfinite(link.carrier_hz)) {
    errors.push_back(path + ".carrier_hz: must be > 0");
  }
  if (!(link.bit_rate_bps > 0.0) || !std::isfinite(link.bit_rate_bps)) {
    errors.push_back(path + ".bit_rate_bps: must be > 0");
  }
  if (link.bits_per_symbol < 1) {
    errors.push_back(path + ".bits_per_symbol: must be >= 1");
  }
  if (!std::isfinite(link.tx_power_dbm)) {
    errors.push_back(path + ".tx_power_dbm: must be finite");
  }
  if (!std::isfinite(link.noise_figure_db)) {
    errors.push_back(path + ".noise_figure_db: must be finite");
  }
  if (link.rx_bandwidth_hz != 0.0 &&
      (!(link.rx_bandwidth_hz > 0.0) || !std::isfinite(link.rx_bandwidth_hz))) {
    errors.push_back(path + ".rx_bandwidth_hz: must be > 0 (or omitted for symbol rate)");
  }
  return errors;
}

double fspl_db(double carrier_hz, double distance_m) {
  if (!(distance_m > 0.0) || !std::isfinite(distance_m)) {
    throw std::invalid_argument("fspl_db: distance must be > 0");
  }
  if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz)) {
    throw std::invalid_argument("fspl_db: carrier frequency must be > 0");
  }
  return 20.0 * std::log10(4.0 * kPi * distance_m * carrier_hz / kSpeedOfLight);
}

double received_power_dbm(const LinkParams& link, double tx_gain_dbi, double rx_gain_dbi,
                          double distance_m) {
  return link.tx_power_dbm + tx_gain_dbi + rx_gain_dbi - fspl_db(link.carrier_hz, distance_m);
}

double noise_floor_dbm(const LinkParams& link) {
  return -174.0 + 10.0 * std::log10(resolved_bandwidth_hz(link)) + link.noise_figure_db;
}

double ebn0_db(const LinkParams& link, double snr_db_value) {
  return snr_db_value + 10.0 * std::log10(resolved_bandwidth_hz(link) / link.bit_rate_bps);
}

double ber_16qam(double ebn0_db_value) {
  if (!std::isfinite(ebn0_db_value)) {
    throw std::invalid_argument("ber_16qam: Eb/N0 must be finite");
  }
  const double gamma_b = std::pow(10.0, ebn0_db_value / 10.0);
  return 0.375 * std::erfc(std::sqrt(0.4 * gamma_b));
}

}  // namespace rasim
