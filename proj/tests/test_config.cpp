#include <doctest.h>

#include <string>

#include "rasim/config.hpp"

using namespace rasim;

TEST_CASE("empty config decodes to pure defaults") {
  std::vector<std::string> errors;
  const ScenarioConfig cfg = decode_scenario(parse_config_text(""), errors);
  CHECK(errors.empty());
  CHECK(cfg.duration_s == doctest::Approx(20.0));
  CHECK(cfg.control_rate_hz == doctest::Approx(50.0));
  CHECK(cfg.camera.width_px == 640);
  CHECK(cfg.camera.height_px == 480);
  CHECK(rad2deg(cfg.camera.hfov_rad) == doctest::Approx(60.0));
  CHECK(cfg.camera.frame_rate_hz == doctest::Approx(30.0));
  CHECK(cfg.tracker.n_init == 3);
  CHECK(cfg.tracker.max_age == 30);
  CHECK(cfg.tracker.gate_threshold == doctest::Approx(5.991));
  CHECK(cfg.pid.kp == doctest::Approx(8.0));
  CHECK(cfg.pid.ki == doctest::Approx(0.5));
  CHECK(cfg.pid.kd == doctest::Approx(0.1));
  CHECK(cfg.supervisor.scan_period_s == doctest::Approx(0.5));
  CHECK(cfg.pattern.peak_gain_dbi == doctest::Approx(10.0));
  CHECK(rad2deg(cfg.pattern.hpbw_rad) == doctest::Approx(60.0));
  CHECK(cfg.link.carrier_hz == doctest::Approx(5.8e9));
  CHECK(cfg.link.tx_power_dbm == doctest::Approx(10.0));
  CHECK(cfg.link.bit_rate_bps == doctest::Approx(2.0e6));
  CHECK(cfg.link.bits_per_symbol == 4);
  CHECK(std::holds_alternative<ArcSweep>(cfg.trajectory));
  CHECK(cfg.antenna_mode == AntennaMode::Rotatable);
}

TEST_CASE("sections, comments, numbers and strings parse") {
  const std::string text = R"(
# top-level comment
duration = 6.5
seed = 42

[camera]
hfov_deg = 90.0   # inline comment
width_px = 320

[trajectory]
type = "walk"
start = [1.0, 2.0, 0.5]
end = [3.0, 2.0, 0.5]
speed_m_s = 0.25
)";
  std::vector<std::string> errors;
  const ScenarioConfig cfg = decode_scenario(parse_config_text(text), errors);
  CHECK(errors.empty());
  CHECK(cfg.duration_s == doctest::Approx(6.5));
  CHECK(cfg.seed == 42);
  CHECK(cfg.camera.width_px == 320);
  CHECK(rad2deg(cfg.camera.hfov_rad) == doctest::Approx(90.0));
  const auto* walk = std::get_if<LinearWalk>(&cfg.trajectory);
  REQUIRE(walk != nullptr);
  CHECK(walk->start.y == doctest::Approx(2.0));
  CHECK(walk->end.x == doctest::Approx(3.0));
  CHECK(walk->speed_m_s == doctest::Approx(0.25));
}

TEST_CASE("waypoint arrays parse across lines") {
  const std::string text = R"(
[trajectory]
type = "waypoints"
points = [
  [0.0, 10.0, 0.0, 0.0],
  [5.0, 10.0, 5.0, 0.0],
  [9.0, 10.0, 5.0, 1.0],
]
)";
  std::vector<std::string> errors;
  const ScenarioConfig cfg = decode_scenario(parse_config_text(text), errors);
  CHECK(errors.empty());
  const auto* wp = std::get_if<Waypoints>(&cfg.trajectory);
  REQUIRE(wp != nullptr);
  REQUIRE(wp->points.size() == 3);
  CHECK(wp->points[1].t == doctest::Approx(5.0));
  CHECK(wp->points[1].position.y == doctest::Approx(5.0));
}

TEST_CASE("parser rejects malformed input with line numbers") {
  CHECK_THROWS_AS(parse_config_text("duration 5.0"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("x = \"unterminated"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("x = [1, 2"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("x = 1\nx = 2"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("x = 12abc"), ConfigError);
  try {
    parse_config_text("ok = 1\nbad line here\n");
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("decode aggregates violations with key paths") {
  const std::string text = R"(
duration = -1.0

[camera]
hfov_deg = 200.0

[servo.azimuth]
pulse_min_us = 2000.0
pulse_max_us = 1000.0

[made_up]
key = 1.0
)";
  std::vector<std::string> errors;
  decode_scenario(parse_config_text(text), errors);
  REQUIRE(errors.size() >= 4);
  const std::string joined = [&] {
    std::string all;
    for (const auto& e : errors) {
      all += e + "\n";
    }
    return all;
  }();
  CHECK(joined.find("duration") != std::string::npos);
  CHECK(joined.find("camera.hfov_deg") != std::string::npos);
  CHECK(joined.find("pulse_min_us") != std::string::npos);
  CHECK(joined.find("pulse_max_us") != std::string::npos);
  CHECK(joined.find("made_up.key: unknown key") != std::string::npos);
}

TEST_CASE("type mismatches are reported, not fatal") {
  std::vector<std::string> errors;
  decode_scenario(parse_config_text("duration = \"long\""), errors);
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].find("duration") != std::string::npos);
  CHECK(errors[0].find("number") != std::string::npos);
}

TEST_CASE("overrides replace values and reject garbage") {
  ConfigTable table = parse_config_text("duration = 5.0");
  apply_override(table, "duration=9.5");
  apply_override(table, "camera.hfov_deg=120");
  std::vector<std::string> errors;
  const ScenarioConfig cfg = decode_scenario(table, errors);
  CHECK(errors.empty());
  CHECK(cfg.duration_s == doctest::Approx(9.5));
  CHECK(rad2deg(cfg.camera.hfov_rad) == doctest::Approx(120.0));
  CHECK_THROWS_AS(apply_override(table, "no_equals_sign"), ConfigError);
}

TEST_CASE("effective config renders and round-trips") {
  std::vector<std::string> errors;
  ScenarioConfig cfg = decode_scenario(parse_config_text("duration = 7.25"), errors);
  REQUIRE(errors.empty());
  const std::string rendered = render_effective_config(cfg);
  CHECK(rendered.find("duration = 7.25") != std::string::npos);
  CHECK(rendered.find("[camera]") != std::string::npos);

  std::vector<std::string> errors2;
  const ScenarioConfig back = decode_scenario(parse_config_text(rendered), errors2);
  CHECK(errors2.empty());
  CHECK(back.duration_s == doctest::Approx(cfg.duration_s));
  CHECK(back.camera.hfov_rad == doctest::Approx(cfg.camera.hfov_rad));
  CHECK(back.pid.ki == doctest::Approx(cfg.pid.ki));
  CHECK(back.link.carrier_hz == doctest::Approx(cfg.link.carrier_hz));
}

TEST_CASE("mode strings decode") {
  std::vector<std::string> errors;
  const ScenarioConfig fixed =
      decode_scenario(parse_config_text("[run]\nmode = \"fixed\"\nfixed_az_deg = 15.0"), errors);
  CHECK(errors.empty());
  CHECK(fixed.antenna_mode == AntennaMode::FixedOrientation);
  CHECK(rad2deg(fixed.fixed_orientation.azimuth) == doctest::Approx(15.0));

  std::vector<std::string> errors2;
  decode_scenario(parse_config_text("[run]\nmode = \"sideways\""), errors2);
  CHECK(!errors2.empty());
}
