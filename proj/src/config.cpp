#include "rasim/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace rasim {
namespace {

bool is_bare_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ConfigTable parse() {
    ConfigTable table;
    while (!at_end()) {
      skip_ws_and_comments(false);
      if (at_end()) {
        break;
      }
      if (peek() == '[') {
        parse_section_header();
      } else {
        parse_key_value(table);
      }
      skip_ws(false);
      if (!at_end() && peek() == '#') {
        skip_comment();
      }
      if (!at_end() && peek() != '\n') {
        fail("expected end of line");
      }
    }
    return table;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("config parse error at line " + std::to_string(line_) + ": " + what);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
    }
    return c;
  }

  void skip_ws(bool cross_lines) {
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || (cross_lines && c == '\n')) {
        advance();
      } else {
        break;
      }
    }
  }

  void skip_comment() {
    while (!at_end() && peek() != '\n') {
      advance();
    }
  }

  void skip_ws_and_comments(bool /*unused*/) {
    for (;;) {
      skip_ws(true);
      if (!at_end() && peek() == '#') {
        skip_comment();
      } else {
        return;
      }
    }
  }

  void parse_section_header() {
    advance();  // '['
    std::string name;
    while (!at_end() && peek() != ']') {
      const char c = advance();
      if (!is_bare_key_char(c)) {
        fail("invalid character in section name");
      }
      name += c;
    }
    if (at_end()) {
      fail("unterminated section header");
    }
    advance();  // ']'
    if (name.empty()) {
      fail("empty section name");
    }
    section_ = name;
  }

  void parse_key_value(ConfigTable& table) {
    std::string key;
    while (!at_end() && is_bare_key_char(peek())) {
      key += advance();
    }
    if (key.empty()) {
      fail("expected a key");
    }
    skip_ws(false);
    if (at_end() || peek() != '=') {
      fail("expected '=' after key '" + key + "'");
    }
    advance();
    skip_ws(false);
    const std::string full_key = section_.empty() ? key : section_ + "." + key;
    if (table.count(full_key) != 0) {
      fail("duplicate key '" + full_key + "'");
    }
    table[full_key] = parse_value();
  }

  ConfigValue parse_value() {
    if (at_end()) {
      fail("expected a value");
    }
    const char c = peek();
    if (c == '"') {
      return parse_string();
    }
    if (c == '[') {
      return parse_array();
    }
    return parse_scalar();
  }

  ConfigValue parse_string() {
    advance();  // '"'
    ConfigValue v;
    v.kind = ConfigValue::Kind::String;
    while (!at_end() && peek() != '"') {
      if (peek() == '\n') {
        fail("unterminated string");
      }
      v.text += advance();
    }
    if (at_end()) {
      fail("unterminated string");
    }
    advance();  // '"'
    return v;
  }

  ConfigValue parse_array() {
    advance();  // '['
    ConfigValue v;
    v.kind = ConfigValue::Kind::Array;
    for (;;) {
      skip_ws_and_comments(true);
      if (at_end()) {
        fail("unterminated array");
      }
      if (peek() == ']') {
        advance();
        return v;
      }
      v.items.push_back(parse_value());
      skip_ws_and_comments(true);
      if (at_end()) {
        fail("unterminated array");
      }
      if (peek() == ',') {
        advance();
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
  }

  ConfigValue parse_scalar() {
    std::string token;
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == ',' || c == ']' || c == '#') {
        break;
      }
      token += advance();
    }
    if (token == "true" || token == "false") {
      ConfigValue v;
      v.kind = ConfigValue::Kind::Boolean;
      v.boolean = token == "true";
      return v;
    }
    ConfigValue v;
    v.kind = ConfigValue::Kind::Number;
    try {
      std::size_t consumed = 0;
      v.number = std::stod(token, &consumed);
      if (consumed != token.size()) {
        fail("malformed number '" + token + "'");
      }
    } catch (const std::logic_error&) {
      fail("malformed value '" + token + "'");
    }
    return v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::string section_;
};

const char* kind_name(ConfigValue::Kind kind) {
  switch (kind) {
    case ConfigValue::Kind::Number:
      return "number";
    case ConfigValue::Kind::String:
      return "string";
    case ConfigValue::Kind::Boolean:
      return "boolean";
    case ConfigValue::Kind::Array:
      return "array";
  }
  return "?";
}

// Pulls typed values out of the table, recording every problem instead of
// stopping at the first one.
class Decoder {
 public:
  Decoder(const ConfigTable& table, std::vector<std::string>& errors)
      : table_(table), errors_(errors) {}

  double number(const std::string& key, double fallback) {
    const ConfigValue* v = consume(key);
    if (v == nullptr) {
      return fallback;
    }
    if (v->kind != ConfigValue::Kind::Number) {
      type_error(key, *v, "number");
      return fallback;
    }
    return v->number;
  }

  long integer(const std::string& key, long fallback) {
    const ConfigValue* v = consume(key);
    if (v == nullptr) {
      return fallback;
    }
    if (v->kind != ConfigValue::Kind::Number || v->number != std::floor(v->number) ||
        std::abs(v->number) > 9.0e15) {
      type_error(key, *v, "integer");
      return fallback;
    }
    return static_cast<long>(v->number);
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const ConfigValue* v = consume(key);
    if (v == nullptr) {
      return fallback;
    }
    if (v->kind != ConfigValue::Kind::String) {
      type_error(key, *v, "string");
      return fallback;
    }
    return v->text;
  }

  const ConfigValue* array(const std::string& key) {
    const ConfigValue* v = consume(key);
    if (v == nullptr) {
      return nullptr;
    }
    if (v->kind != ConfigValue::Kind::Array) {
      type_error(key, *v, "array");
      return nullptr;
    }
    return v;
  }

  bool has(const std::string& key) const { return table_.count(key) != 0; }

  void error(const std::string& message) { errors_.push_back(message); }

  // Every key that was never consumed is unknown: report so typos do not
  // silently fall back to defaults.
  void report_unknown() {
    for (const auto& [key, value] : table_) {
      if (consumed_.count(key) == 0) {
        errors_.push_back(key + ": unknown key");
      }
    }
  }

 private:
  const ConfigValue* consume(const std::string& key) {
    consumed_.insert(key);
    const auto it = table_.find(key);
    return it == table_.end() ? nullptr : &it->second;
  }

  void type_error(const std::string& key, const ConfigValue& v, const char* expected) {
    errors_.push_back(key + ": expected " + expected + ", got " + kind_name(v.kind));
  }

  const ConfigTable& table_;
  std::vector<std::string>& errors_;
  std::set<std::string> consumed_;
};

// Angles feeding Direction construction must be decoded defensively:
// Direction rejects bad values by throwing, and decode must aggregate
// instead of throw.
double checked_elevation_deg(Decoder& dec, const std::string& key, double fallback_deg) {
  const double deg = dec.number(key, fallback_deg);
  if (!(deg >= -90.0 && deg <= 90.0)) {
    dec.error(key + ": must lie in [-90, 90] degrees");
    return fallback_deg;
  }
  return deg;
}

double checked_azimuth_deg(Decoder& dec, const std::string& key, double fallback_deg) {
  const double deg = dec.number(key, fallback_deg);
  if (!std::isfinite(deg)) {
    dec.error(key + ": must be finite");
    return fallback_deg;
  }
  return deg;
}

bool decode_position(const ConfigValue& v, Position3* out) {
  if (v.items.size() != 3) {
    return false;
  }
  double c[3];
  for (int i = 0; i < 3; ++i) {
    if (v.items[i].kind != ConfigValue::Kind::Number) {
      return false;
    }
    c[i] = v.items[i].number;
  }
  *out = {c[0], c[1], c[2]};
  return true;
}

TrajectorySpec decode_trajectory(Decoder& dec) {
  const std::string type = dec.text("trajectory.type", "arc");
  if (type == "arc") {
    ArcSweep arc;
    arc.radius_m = dec.number("trajectory.radius_m", arc.radius_m);
    arc.elevation_rad = deg2rad(checked_elevation_deg(dec, "trajectory.elevation_deg", 0.0));
    arc.az_start_rad = deg2rad(dec.number("trajectory.az_start_deg", -90.0));
    arc.az_end_rad = deg2rad(dec.number("trajectory.az_end_deg", 90.0));
    arc.angular_rate_rad_s = deg2rad(dec.number("trajectory.rate_deg_per_s", 9.0));
    return arc;
  }
  if (type == "walk") {
    LinearWalk walk{{0.0, 0.0, 0.0}, {10.0, 0.0, 0.0}, 1.0};
    if (const ConfigValue* v = dec.array("trajectory.start")) {
      if (!decode_position(*v, &walk.start)) {
        dec.error("trajectory.start: expected [x, y, z]");
      }
    }
    if (const ConfigValue* v = dec.array("trajectory.end")) {
      if (!decode_position(*v, &walk.end)) {
        dec.error("trajectory.end: expected [x, y, z]");
      }
    }
    walk.speed_m_s = dec.number("trajectory.speed_m_s", walk.speed_m_s);
    return walk;
  }
  if (type == "waypoints") {
    Waypoints wp;
    if (const ConfigValue* v = dec.array("trajectory.points")) {
      for (const ConfigValue& item : v->items) {
        if (item.kind != ConfigValue::Kind::Array || item.items.size() != 4 ||
            item.items[0].kind != ConfigValue::Kind::Number) {
          dec.error("trajectory.points: expected entries of the form [t, x, y, z]");
          break;
        }
        Position3 p;
        const ConfigValue xyz{ConfigValue::Kind::Array,
                              0.0,
                              {},
                              false,
                              {item.items[1], item.items[2], item.items[3]}};
        if (!decode_position(xyz, &p)) {
          dec.error("trajectory.points: expected entries of the form [t, x, y, z]");
          break;
        }
        wp.points.push_back({item.items[0].number, p});
      }
    } else {
      dec.error("trajectory.points: required for waypoint trajectories");
    }
    return wp;
  }
  dec.error("trajectory.type: must be one of \"arc\", \"walk\", \"waypoints\"");
  return ArcSweep{};
}

ServoAxisConfig decode_servo(Decoder& dec, const std::string& section,
                             const ServoAxisConfig& defaults) {
  ServoAxisConfig cfg = defaults;
  cfg.pulse_min_us = dec.number(section + ".pulse_min_us", cfg.pulse_min_us);
  cfg.pulse_max_us = dec.number(section + ".pulse_max_us", cfg.pulse_max_us);
  cfg.angle_min_rad = deg2rad(dec.number(section + ".angle_min_deg", rad2deg(cfg.angle_min_rad)));
  cfg.angle_max_rad = deg2rad(dec.number(section + ".angle_max_deg", rad2deg(cfg.angle_max_rad)));
  cfg.max_speed_rad_s =
      deg2rad(dec.number(section + ".max_speed_deg_per_s", rad2deg(cfg.max_speed_rad_s)));
  cfg.sensor_noise_sigma_rad = deg2rad(
      dec.number(section + ".sensor_noise_sigma_deg", rad2deg(cfg.sensor_noise_sigma_rad)));
  return cfg;
}

}  // namespace

ConfigTable parse_config_text(std::string_view text) { return Parser(text).parse(); }

ConfigTable load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

void apply_override(ConfigTable& table, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must have the form key=value: " + assignment);
  }
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  const ConfigTable parsed = parse_config_text("x = " + value);
  table[key] = parsed.at("x");
}

ScenarioConfig decode_scenario(const ConfigTable& table, std::vector<std::string>& errors) {
  Decoder dec(table, errors);
  ScenarioConfig cfg;

  cfg.duration_s = dec.number("duration", cfg.duration_s);
  cfg.control_rate_hz = dec.number("control_rate_hz", cfg.control_rate_hz);
  const long seed = dec.integer("seed", 1);
  cfg.seed = static_cast<std::uint64_t>(seed);

  cfg.camera.width_px = static_cast<int>(dec.integer("camera.width_px", cfg.camera.width_px));
  cfg.camera.height_px = static_cast<int>(dec.integer("camera.height_px", cfg.camera.height_px));
  cfg.camera.hfov_rad = deg2rad(dec.number("camera.hfov_deg", rad2deg(cfg.camera.hfov_rad)));
  cfg.camera.frame_rate_hz = dec.number("camera.frame_rate_hz", cfg.camera.frame_rate_hz);
  cfg.camera.mount = Direction(deg2rad(checked_azimuth_deg(dec, "camera.mount_az_deg", 0.0)),
                               deg2rad(checked_elevation_deg(dec, "camera.mount_el_deg", 0.0)));

  cfg.detector.detection_prob = dec.number("detector.detection_prob", cfg.detector.detection_prob);
  cfg.detector.pixel_noise_sigma =
      dec.number("detector.pixel_noise_sigma", cfg.detector.pixel_noise_sigma);
  cfg.detector.false_alarm_rate =
      dec.number("detector.false_alarm_rate", cfg.detector.false_alarm_rate);
  cfg.detector.target_height_m =
      dec.number("detector.target_height_m", cfg.detector.target_height_m);
  cfg.detector.target_width_m = dec.number("detector.target_width_m", cfg.detector.target_width_m);

  cfg.tracker.process_noise_accel =
      dec.number("tracker.process_noise_accel", cfg.tracker.process_noise_accel);
  cfg.tracker.measurement_noise =
      dec.number("tracker.measurement_noise_px", cfg.tracker.measurement_noise);
  cfg.tracker.gate_threshold = dec.number("tracker.gate_threshold", cfg.tracker.gate_threshold);
  cfg.tracker.n_init = static_cast<int>(dec.integer("tracker.n_init", cfg.tracker.n_init));
  cfg.tracker.max_age = static_cast<int>(dec.integer("tracker.max_age", cfg.tracker.max_age));

  cfg.servo_az = decode_servo(dec, "servo.azimuth", cfg.servo_az);
  cfg.servo_el = decode_servo(dec, "servo.elevation", cfg.servo_el);

  cfg.pid.kp = dec.number("pid.kp", cfg.pid.kp);
  cfg.pid.ki = dec.number("pid.ki", cfg.pid.ki);
  cfg.pid.kd = dec.number("pid.kd", cfg.pid.kd);
  cfg.pid.output_limit =
      deg2rad(dec.number("pid.output_limit_deg_per_s", rad2deg(cfg.pid.output_limit)));
  cfg.pid.integral_limit = dec.number("pid.integral_limit", cfg.pid.integral_limit);

  cfg.supervisor.scan_period_s =
      dec.number("supervisor.scan_period_s", cfg.supervisor.scan_period_s);

  cfg.pattern.peak_gain_dbi = dec.number("antenna.peak_gain_dbi", cfg.pattern.peak_gain_dbi);
  cfg.pattern.hpbw_rad = deg2rad(dec.number("antenna.hpbw_deg", rad2deg(cfg.pattern.hpbw_rad)));
  cfg.pattern.floor_attenuation_db =
      dec.number("antenna.floor_attenuation_db", cfg.pattern.floor_attenuation_db);

  cfg.link.carrier_hz = dec.number("link.carrier_hz", cfg.link.carrier_hz);
  cfg.link.tx_power_dbm = dec.number("link.tx_power_dbm", cfg.link.tx_power_dbm);
  cfg.link.bit_rate_bps = dec.number("link.bit_rate_bps", cfg.link.bit_rate_bps);
  cfg.link.bits_per_symbol =
      static_cast<int>(dec.integer("link.bits_per_symbol", cfg.link.bits_per_symbol));
  cfg.link.noise_figure_db = dec.number("link.noise_figure_db", cfg.link.noise_figure_db);
  cfg.link.rx_bandwidth_hz = dec.number("link.rx_bandwidth_hz", cfg.link.rx_bandwidth_hz);

  cfg.trajectory = decode_trajectory(dec);

  const std::string mode = dec.text("run.mode", "rotatable");
  if (mode == "rotatable") {
    cfg.antenna_mode = AntennaMode::Rotatable;
  } else if (mode == "fixed") {
    cfg.antenna_mode = AntennaMode::FixedOrientation;
  } else {
    dec.error("run.mode: must be \"rotatable\" or \"fixed\"");
  }
  cfg.fixed_orientation = Direction(deg2rad(checked_azimuth_deg(dec, "run.fixed_az_deg", 0.0)),
                                    deg2rad(checked_elevation_deg(dec, "run.fixed_el_deg", 0.0)));
  cfg.initial_boresight = Direction(deg2rad(checked_azimuth_deg(dec, "run.initial_az_deg", 0.0)),
                                    deg2rad(checked_elevation_deg(dec, "run.initial_el_deg", 0.0)));

  dec.report_unknown();

  const std::vector<std::string> semantic = validate(cfg);
  errors.insert(errors.end(), semantic.begin(), semantic.end());
  return cfg;
}

std::string render_effective_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out.precision(12);
  out << "duration = " << cfg.duration_s << "\n";
  out << "control_rate_hz = " << cfg.control_rate_hz << "\n";
  out << "seed = " << cfg.seed << "\n";

  out << "\n[trajectory]\n";
  if (const auto* arc = std::get_if<ArcSweep>(&cfg.trajectory)) {
    out << "type = \"arc\"\n";
    out << "radius_m = " << arc->radius_m << "\n";
    out << "elevation_deg = " << rad2deg(arc->elevation_rad) << "\n";
    out << "az_start_deg = " << rad2deg(arc->az_start_rad) << "\n";
    out << "az_end_deg = " << rad2deg(arc->az_end_rad) << "\n";
    out << "rate_deg_per_s = " << rad2deg(arc->angular_rate_rad_s) << "\n";
  } else if (const auto* walk = std::get_if<LinearWalk>(&cfg.trajectory)) {
    out << "type = \"walk\"\n";
    out << "start = [" << walk->start.x << ", " << walk->start.y << ", " << walk->start.z << "]\n";
    out << "end = [" << walk->end.x << ", " << walk->end.y << ", " << walk->end.z << "]\n";
    out << "speed_m_s = " << walk->speed_m_s << "\n";
  } else {
    const auto& wp = std::get<Waypoints>(cfg.trajectory);
    out << "type = \"waypoints\"\n";
    out << "points = [";
    for (std::size_t i = 0; i < wp.points.size(); ++i) {
      const TimedWaypoint& p = wp.points[i];
      out << (i == 0 ? "" : ", ") << "[" << p.t << ", " << p.position.x << ", " << p.position.y
          << ", " << p.position.z << "]";
    }
    out << "]\n";
  }

  out << "\n[camera]\n";
  out << "width_px = " << cfg.camera.width_px << "\n";
  out << "height_px = " << cfg.camera.height_px << "\n";
  out << "hfov_deg = " << rad2deg(cfg.camera.hfov_rad) << "\n";
  out << "frame_rate_hz = " << cfg.camera.frame_rate_hz << "\n";
  out << "mount_az_deg = " << rad2deg(cfg.camera.mount.azimuth) << "\n";
  out << "mount_el_deg = " << rad2deg(cfg.camera.mount.elevation) << "\n";

  out << "\n[detector]\n";
  out << "detection_prob = " << cfg.detector.detection_prob << "\n";
  out << "pixel_noise_sigma = " << cfg.detector.pixel_noise_sigma << "\n";
  out << "false_alarm_rate = " << cfg.detector.false_alarm_rate << "\n";
  out << "target_height_m = " << cfg.detector.target_height_m << "\n";
  out << "target_width_m = " << cfg.detector.target_width_m << "\n";

  out << "\n[tracker]\n";
  out << "process_noise_accel = " << cfg.tracker.process_noise_accel << "\n";
  out << "measurement_noise_px = " << cfg.tracker.measurement_noise << "\n";
  out << "gate_threshold = " << cfg.tracker.gate_threshold << "\n";
  out << "n_init = " << cfg.tracker.n_init << "\n";
  out << "max_age = " << cfg.tracker.max_age << "\n";

  const auto servo = [&out](const char* name, const ServoAxisConfig& s) {
    out << "\n[servo." << name << "]\n";
    out << "pulse_min_us = " << s.pulse_min_us << "\n";
    out << "pulse_max_us = " << s.pulse_max_us << "\n";
    out << "angle_min_deg = " << rad2deg(s.angle_min_rad) << "\n";
    out << "angle_max_deg = " << rad2deg(s.angle_max_rad) << "\n";
    out << "max_speed_deg_per_s = " << rad2deg(s.max_speed_rad_s) << "\n";
    out << "sensor_noise_sigma_deg = " << rad2deg(s.sensor_noise_sigma_rad) << "\n";
  };
  servo("azimuth", cfg.servo_az);
  servo("elevation", cfg.servo_el);

  out << "\n[pid]\n";
  out << "kp = " << cfg.pid.kp << "\n";
  out << "ki = " << cfg.pid.ki << "\n";
  out << "kd = " << cfg.pid.kd << "\n";
  out << "output_limit_deg_per_s = " << rad2deg(cfg.pid.output_limit) << "\n";
  out << "integral_limit = " << cfg.pid.integral_limit << "\n";

  out << "\n[supervisor]\n";
  out << "scan_period_s = " << cfg.supervisor.scan_period_s << "\n";

  out << "\n[antenna]\n";
  out << "peak_gain_dbi = " << cfg.pattern.peak_gain_dbi << "\n";
  out << "hpbw_deg = " << rad2deg(cfg.pattern.hpbw_rad) << "\n";
  out << "floor_attenuation_db = " << cfg.pattern.floor_attenuation_db << "\n";

  out << "\n[link]\n";
  out << "carrier_hz = " << cfg.link.carrier_hz << "\n";
  out << "tx_power_dbm = " << cfg.link.tx_power_dbm << "\n";
  out << "bit_rate_bps = " << cfg.link.bit_rate_bps << "\n";
  out << "bits_per_symbol = " << cfg.link.bits_per_symbol << "\n";
  out << "noise_figure_db = " << cfg.link.noise_figure_db << "\n";
  out << "rx_bandwidth_hz = " << resolved_bandwidth_hz(cfg.link) << "\n";

  out << "\n[run]\n";
  out << "mode = \"" << (cfg.antenna_mode == AntennaMode::Rotatable ? "rotatable" : "fixed")
      << "\"\n";
  out << "fixed_az_deg = " << rad2deg(cfg.fixed_orientation.azimuth) << "\n";
  out << "fixed_el_deg = " << rad2deg(cfg.fixed_orientation.elevation) << "\n";
  out << "initial_az_deg = " << rad2deg(cfg.initial_boresight.azimuth) << "\n";
  out << "initial_el_deg = " << rad2deg(cfg.initial_boresight.elevation) << "\n";
  return out.str();
}

}  // namespace rasim
