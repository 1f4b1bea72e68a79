#include "rasim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rasim {
namespace {

std::string fmt(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

}  // namespace

std::string records_csv_header() {
  return "t,user_x,user_y,user_z,user_az,user_el,mode,locked_track_id,"
         "boresight_az,boresight_el,pointing_error_rad,tx_gain_dbi,fspl_db,prx_dbm,snr_db,ber,"
         "cmd_pulse_az_us,cmd_pulse_el_us,sensed_az_rad,sensed_el_rad,"
         "steer_error_az_rad,steer_error_el_rad";
}

void write_records_csv(std::ostream& out, std::span<const StepRecord> records) {
  out << records_csv_header() << "\n";
  for (const StepRecord& r : records) {
    out << fmt(r.t) << ',' << fmt(r.user_pos.x) << ',' << fmt(r.user_pos.y) << ','
        << fmt(r.user_pos.z) << ',' << fmt(r.user_dir.azimuth) << ',' << fmt(r.user_dir.elevation)
        << ',' << to_string(r.mode) << ',' << r.locked_track_id << ','
        << fmt(r.boresight.azimuth) << ',' << fmt(r.boresight.elevation) << ','
        << fmt(r.pointing_error_rad) << ',' << fmt(r.tx_gain_dbi) << ',' << fmt(r.fspl_db) << ','
        << fmt(r.prx_dbm) << ',' << fmt(r.snr_db) << ',' << fmt(r.ber) << ','
        << fmt(r.cmd_pulse_az_us) << ',' << fmt(r.cmd_pulse_el_us) << ',' << fmt(r.sensed_az_rad)
        << ',' << fmt(r.sensed_el_rad) << ',' << fmt(r.steer_error_az_rad) << ','
        << fmt(r.steer_error_el_rad) << "\n";
  }
}

std::string compare_csv_header() {
  return "t,user_az_rad,user_az_deg,prx_rotatable_dbm,prx_fixed_dbm,gain_db,"
         "pointing_rotatable_rad,pointing_fixed_rad";
}

void write_compare_csv(std::ostream& out, const CompareResult& result) {
  out << compare_csv_header() << "\n";
  for (const CompareRow& r : result.rows) {
    out << fmt(r.t) << ',' << fmt(r.user_az_rad) << ',' << fmt(rad2deg(r.user_az_rad)) << ','
        << fmt(r.prx_ra_dbm) << ',' << fmt(r.prx_fixed_dbm) << ','
        << fmt(r.prx_ra_dbm - r.prx_fixed_dbm) << ',' << fmt(r.pointing_ra_rad) << ','
        << fmt(r.pointing_fixed_rad) << "\n";
  }
}

void write_detections_csv(std::ostream& out, const std::vector<DetectionRecord>& log) {
  out << "frame,t,center_u,center_v,box_w,box_h,confidence\n";
  for (const DetectionRecord& d : log) {
    out << d.frame << ',' << fmt(d.t) << ',' << fmt(d.detection.center_u) << ','
        << fmt(d.detection.center_v) << ',' << fmt(d.detection.box_w) << ','
        << fmt(d.detection.box_h) << ',' << fmt(d.detection.confidence) << "\n";
  }
}

void write_tracks_csv(std::ostream& out, const std::vector<TrackRecord>& log) {
  out << "frame,t,track_id,status,u,v,du,dv,gate_distance\n";
  for (const TrackRecord& r : log) {
    out << r.frame << ',' << fmt(r.t) << ',' << r.track_id << ',' << to_string(r.status) << ','
        << fmt(r.u) << ',' << fmt(r.v) << ',' << fmt(r.du) << ',' << fmt(r.dv) << ','
        << fmt(r.gate_distance) << "\n";
  }
}

std::string summary_text(const Summary& s) {
  std::ostringstream out;
  out << "ticks: " << s.ticks << "\n";
  out << "prx_mean_dbm: " << fmt(s.prx_mean_dbm) << "\n";
  out << "prx_mean_mw_domain_dbm: " << fmt(s.prx_mean_mw_domain_dbm) << "\n";
  out << "prx_min_dbm: " << fmt(s.prx_min_dbm) << "\n";
  out << "prx_max_dbm: " << fmt(s.prx_max_dbm) << "\n";
  out << "prx_stddev_db: " << fmt(s.prx_stddev_db) << "\n";
  out << "pointing_p50_deg: " << fmt(rad2deg(s.pointing_p50_rad)) << "\n";
  out << "pointing_p95_deg: " << fmt(rad2deg(s.pointing_p95_rad)) << "\n";
  out << "pointing_max_deg: " << fmt(rad2deg(s.pointing_max_rad)) << "\n";
  out << "tracking_fraction: " << fmt(s.tracking_fraction) << "\n";
  if (s.lock_time_s.has_value()) {
    out << "lock_time_s: " << fmt(*s.lock_time_s) << "\n";
  } else {
    out << "lock_time_s: never\n";
  }
  return out.str();
}

std::string compare_summary_text(const CompareResult& result) {
  std::ostringstream out;
  out << "mean_power_gain_db: " << fmt(result.mean_gain_db) << "\n\n";
  out << "[rotatable]\n" << summary_text(result.rotatable) << "\n";
  out << "[fixed]\n" << summary_text(result.fixed);
  return out.str();
}

void write_compare_svg(std::ostream& out, const CompareResult& result) {
  const int width = 800;
  const int height = 480;
  const int margin_left = 70;
  const int margin_right = 20;
  const int margin_top = 30;
  const int margin_bottom = 55;
  const double plot_w = width - margin_left - margin_right;
  const double plot_h = height - margin_top - margin_bottom;

  double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
  for (const CompareRow& r : result.rows) {
    const double az = rad2deg(r.user_az_rad);
    x_min = std::min(x_min, az);
    x_max = std::max(x_max, az);
    y_min = std::min({y_min, r.prx_ra_dbm, r.prx_fixed_dbm});
    y_max = std::max({y_max, r.prx_ra_dbm, r.prx_fixed_dbm});
  }
  if (result.rows.empty() || x_max <= x_min) {
    x_min = -90.0;
    x_max = 90.0;
  }
  if (y_max <= y_min) {
    y_min -= 1.0;
    y_max += 1.0;
  }
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  const auto sx = [&](double az) { return margin_left + (az - x_min) / (x_max - x_min) * plot_w; };
  const auto sy = [&](double p) { return margin_top + (y_max - p) / (y_max - y_min) * plot_h; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Axes and grid
  out << "<g stroke=\"#888\" stroke-width=\"1\" font-family=\"sans-serif\" font-size=\"12\">\n";
  const int n_xticks = 7;
  for (int i = 0; i < n_xticks; ++i) {
    const double az = x_min + (x_max - x_min) * i / (n_xticks - 1);
    const double x = sx(az);
    out << "<line x1=\"" << x << "\" y1=\"" << margin_top << "\" x2=\"" << x << "\" y2=\""
        << margin_top + plot_h << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << margin_top + plot_h + 18
        << "\" text-anchor=\"middle\" stroke=\"none\" fill=\"black\">" << fmt(az) << "</text>\n";
  }
  const int n_yticks = 6;
  for (int i = 0; i < n_yticks; ++i) {
    const double p = y_min + (y_max - y_min) * i / (n_yticks - 1);
    const double y = sy(p);
    out << "<line x1=\"" << margin_left << "\" y1=\"" << y << "\" x2=\"" << margin_left + plot_w
        << "\" y2=\"" << y << "\" stroke=\"#ddd\"/>\n";
    char label[32];
    std::snprintf(label, sizeof(label), "%.1f", p);
    out << "<text x=\"" << margin_left - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" stroke=\"none\" fill=\"black\">" << label << "</text>\n";
  }
  out << "<rect x=\"" << margin_left << "\" y=\"" << margin_top << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "</g>\n";

  const auto polyline = [&](const char* color, auto value) {
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
    for (const CompareRow& r : result.rows) {
      out << sx(rad2deg(r.user_az_rad)) << ',' << sy(value(r)) << ' ';
    }
    out << "\"/>\n";
  };
  polyline("#d62728", [](const CompareRow& r) { return r.prx_fixed_dbm; });
  polyline("#1f77b4", [](const CompareRow& r) { return r.prx_ra_dbm; });

  out << "<g font-family=\"sans-serif\" font-size=\"13\">\n";
  out << "<text x=\"" << margin_left + plot_w / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\">User azimuth (deg)</text>\n";
  out << "<text x=\"18\" y=\"" << margin_top + plot_h / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << margin_top + plot_h / 2
      << ")\">Received power (dBm)</text>\n";
  out << "<rect x=\"" << margin_left + 12 << "\" y=\"" << margin_top + 10
      << "\" width=\"14\" height=\"3\" fill=\"#1f77b4\"/>\n";
  out << "<text x=\"" << margin_left + 32 << "\" y=\"" << margin_top + 15
      << "\">rotatable antenna</text>\n";
  out << "<rect x=\"" << margin_left + 12 << "\" y=\"" << margin_top + 28
      << "\" width=\"14\" height=\"3\" fill=\"#d62728\"/>\n";
  out << "<text x=\"" << margin_left + 32 << "\" y=\"" << margin_top + 33
      << "\">fixed antenna</text>\n";
  out << "</g>\n";
  out << "</svg>\n";
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open file for checksum: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return fnv1a64(buffer.str());
}

void write_manifest(const std::filesystem::path& out_dir, const std::string& config_path,
                    std::uint64_t seed, const std::string& started_at,
                    const std::vector<std::string>& files) {
  nlohmann::json manifest;
  manifest["tool"] = "ra-sim";
  manifest["version"] = kToolVersion;
  manifest["config"] = config_path;
  manifest["seed"] = seed;
  manifest["started_at"] = started_at;
  manifest["output_dir"] = out_dir.string();
  manifest["checksum_algorithm"] = "fnv1a64";
  nlohmann::json entries = nlohmann::json::array();
  for (const std::string& name : files) {
    char hex[24];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64_file(out_dir / name)));
    entries.push_back({{"name", name}, {"fnv1a64", hex}});
  }
  manifest["files"] = entries;
  std::ofstream out(out_dir / "manifest.json", std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write manifest.json");
  }
  out << manifest.dump(2) << "\n";
}

std::string current_timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace rasim
