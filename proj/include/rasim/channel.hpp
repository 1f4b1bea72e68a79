#ifndef RASIM_CHANNEL_HPP
#define RASIM_CHANNEL_HPP

#include <string>
#include <vector>

namespace rasim {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

// Link-budget parameters for the free-space line-of-sight channel.
// rx_bandwidth_hz <= 0 means "use the symbol rate" (matched-filter
// assumption).
struct LinkParams {
  double carrier_hz = 5.8e9;
  double tx_power_dbm = 10.0;
  double bit_rate_bps = 2.0e6;
  int bits_per_symbol = 4;  // 16-QAM
  double noise_figure_db = 6.0;
  double rx_bandwidth_hz = 0.0;
};

std::vector<std::string> validate(const LinkParams& link, const std::string& path);

inline double symbol_rate_hz(const LinkParams& link) {
  return link.bit_rate_bps / static_cast<double>(link.bits_per_symbol);
}

inline double resolved_bandwidth_hz(const LinkParams& link) {
  return link.rx_bandwidth_hz > 0.0 ? link.rx_bandwidth_hz : symbol_rate_hz(link);
}

// Friis free-space path loss between isotropic endpoints,
// 20*log10(4*pi*d*f/c). Rejects non-positive distance or frequency.
double fspl_db(double carrier_hz, double distance_m);

double received_power_dbm(const LinkParams& link, double tx_gain_dbi, double rx_gain_dbi,
                          double distance_m);

// Thermal noise floor: -174 dBm/Hz + 10*log10(BW) + NF.
double noise_floor_dbm(const LinkParams& link);

inline double snr_db(const LinkParams& link, double prx_dbm) {
  return prx_dbm - noise_floor_dbm(link);
}

double ebn0_db(const LinkParams& link, double snr_db_value);

// Gray-coded square 16-QAM bit error probability,
// Pb = (3/8) * erfc(sqrt(0.4 * gamma_b)) with gamma_b the linear Eb/N0.
// Monotone decreasing, 3/8 in the zero-SNR limit.
double ber_16qam(double ebn0_db_value);

}  // namespace rasim

#endif  // RASIM_CHANNEL_HPP
