#include "rasim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rasim/rng.hpp"

namespace rasim {
namespace {

constexpr std::uint64_t kServoAzStreamId = 0x736572766f2d617aULL;
constexpr std::uint64_t kServoElStreamId = 0x736572766f2d656cULL;

Position3 arc_position(const ArcSweep& arc, double t) {
  double az = arc.az_start_rad + arc.angular_rate_rad_s * t;
  if (arc.angular_rate_rad_s >= 0.0) {
    az = std::min(az, arc.az_end_rad);
  } else {
    az = std::max(az, arc.az_end_rad);
  }
  const Position3 unit = direction_to_unit(Direction(az, arc.elevation_rad));
  return {arc.radius_m * unit.x, arc.radius_m * unit.y, arc.radius_m * unit.z};
}

Position3 walk_position(const LinearWalk& walk, double t) {
  const Position3 d{walk.end.x - walk.start.x, walk.end.y - walk.start.y,
                    walk.end.z - walk.start.z};
  const double len = norm(d);
  if (len <= 0.0 || walk.speed_m_s <= 0.0) {
    return walk.start;
  }
  const double s = std::min(walk.speed_m_s * t, len) / len;
  return {walk.start.x + s * d.x, walk.start.y + s * d.y, walk.start.z + s * d.z};
}

Position3 waypoint_position(const Waypoints& wp, double t) {
  const auto& pts = wp.points;
  if (t <= pts.front().t) {
    return pts.front().position;
  }
  if (t >= pts.back().t) {
    return pts.back().position;
  }
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (t <= pts[i].t) {
      const double span = pts[i].t - pts[i - 1].t;
      const double s = (t - pts[i - 1].t) / span;
      const Position3& a = pts[i - 1].position;
      const Position3& b = pts[i].position;
      return {a.x + s * (b.x - a.x), a.y + s * (b.y - a.y), a.z + s * (b.z - a.z)};
    }
  }
  return pts.back().position;
}

}  // namespace

std::vector<std::string> validate(const TrajectorySpec& spec, const std::string& path) {
  std::vector<std::string> errors;
  if (const auto* arc = std::get_if<ArcSweep>(&spec)) {
    if (!(arc->radius_m > 0.0) || !std::isfinite(arc->radius_m)) {
      errors.push_back(path + ".radius_m: must be > 0 and finite");
    }
    if (!std::isfinite(arc->angular_rate_rad_s)) {
      errors.push_back(path + ".rate_deg_per_s: must be finite");
    }
    if (!std::isfinite(arc->az_start_rad) || !std::isfinite(arc->az_end_rad)) {
      errors.push_back(path + ".az_start_deg/az_end_deg: must be finite");
    }
    if (arc->angular_rate_rad_s >= 0.0 && arc->az_end_rad < arc->az_start_rad) {
      errors.push_back(path + ".az_end_deg: must be >= az_start_deg for a forward sweep");
    }
    if (arc->angular_rate_rad_s < 0.0 && arc->az_end_rad > arc->az_start_rad) {
      errors.push_back(path + ".az_end_deg: must be <= az_start_deg for a reverse sweep");
    }
    if (std::abs(arc->elevation_rad) > kHalfPi) {
      errors.push_back(path + ".elevation_deg: must lie in [-90, 90]");
    }
  } else if (const auto* walk = std::get_if<LinearWalk>(&spec)) {
    if (!(walk->speed_m_s >= 0.0) || !std::isfinite(walk->speed_m_s)) {
      errors.push_back(path + ".speed_m_s: must be >= 0 and finite");
    }
    for (const Position3& p : {walk->start, walk->end}) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
        errors.push_back(path + ".start/end: coordinates must be finite");
        break;
      }
    }
  } else if (const auto* wp = std::get_if<Waypoints>(&spec)) {
    if (wp->points.empty()) {
      errors.push_back(path + ".waypoints: at least one waypoint required");
    }
    for (std::size_t i = 1; i < wp->points.size(); ++i) {
      if (!(wp->points[i].t > wp->points[i - 1].t)) {
        errors.push_back(path + ".waypoints: times must be strictly increasing");
        break;
      }
    }
    for (const TimedWaypoint& w : wp->points) {
      if (!std::isfinite(w.t) || !std::isfinite(w.position.x) || !std::isfinite(w.position.y) ||
          !std::isfinite(w.position.z)) {
        errors.push_back(path + ".points: values must be finite");
        break;
      }
    }
  }
  return errors;
}

Position3 advance_trajectory(const TrajectorySpec& spec, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("advance_trajectory: t must be finite and >= 0");
  }
  if (const auto* arc = std::get_if<ArcSweep>(&spec)) {
    return arc_position(*arc, t);
  }
  if (const auto* walk = std::get_if<LinearWalk>(&spec)) {
    return walk_position(*walk, t);
  }
  return waypoint_position(std::get<Waypoints>(spec), t);
}

std::vector<std::string> validate(const ScenarioConfig& cfg) {
  std::vector<std::string> errors;
  if (!(cfg.duration_s > 0.0) || !std::isfinite(cfg.duration_s)) {
    errors.push_back("duration: must be > 0");
  }
  if (!(cfg.control_rate_hz > 0.0) || !std::isfinite(cfg.control_rate_hz)) {
    errors.push_back("control_rate_hz: must be > 0");
  }
  if (cfg.control_rate_hz < cfg.camera.frame_rate_hz) {
    errors.push_back("control_rate_hz: must be >= camera.frame_rate_hz");
  }
  auto append = [&errors](std::vector<std::string> more) {
    errors.insert(errors.end(), more.begin(), more.end());
  };
  append(validate(cfg.camera, "camera"));
  append(validate(cfg.detector, "detector"));
  append(validate(cfg.tracker, "tracker"));
  append(validate(cfg.servo_az, "servo.azimuth"));
  append(validate(cfg.servo_el, "servo.elevation"));
  append(validate(cfg.pid, "pid"));
  append(validate(cfg.supervisor, "supervisor"));
  append(validate(cfg.pattern, "antenna"));
  append(validate(cfg.link, "link"));
  append(validate(cfg.trajectory, "trajectory"));
  if (cfg.servo_el.angle_min_rad < -kHalfPi || cfg.servo_el.angle_max_rad > kHalfPi) {
    errors.push_back("servo.elevation: angle range must lie within [-90, 90] degrees");
  }
  if (cfg.initial_boresight.azimuth < cfg.servo_az.angle_min_rad ||
      cfg.initial_boresight.azimuth > cfg.servo_az.angle_max_rad) {
    errors.push_back("run.initial_az_deg: outside servo.azimuth range");
  }
  if (cfg.initial_boresight.elevation < cfg.servo_el.angle_min_rad ||
      cfg.initial_boresight.elevation > cfg.servo_el.angle_max_rad) {
    errors.push_back("run.initial_el_deg: outside servo.elevation range");
  }
  return errors;
}

RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& options) {
  {
    const std::vector<std::string> errors = validate(cfg);
    if (!errors.empty()) {
      std::string joined = "invalid scenario config:";
      for (const std::string& e : errors) {
        joined += "\n  " + e;
      }
      throw std::invalid_argument(joined);
    }
  }

  const double dt = 1.0 / cfg.control_rate_hz;
  const long n_ticks = std::llround(cfg.duration_s * cfg.control_rate_hz);
  const bool rotatable = cfg.antenna_mode == AntennaMode::Rotatable;
  const Direction start = rotatable ? cfg.initial_boresight : cfg.fixed_orientation;

  ServoAxis servo_az(cfg.servo_az, start.azimuth,
                     RandomStream::substream(cfg.seed, kServoAzStreamId));
  ServoAxis servo_el(cfg.servo_el, start.elevation,
                     RandomStream::substream(cfg.seed, kServoElStreamId));
  // One scenario seed drives every noise stream.
  DetectorParams detector = cfg.detector;
  detector.rng_seed = cfg.seed;
  PidController pid_az(cfg.pid);
  PidController pid_el(cfg.pid);
  Tracker tracker(cfg.tracker);
  Supervisor supervisor(cfg.supervisor, cfg.camera);

  RunResult result;
  result.records.reserve(static_cast<std::size_t>(n_ticks));

  double next_camera_time = 0.0;
  double last_frame_time = 0.0;
  long frame_index = 0;
  double sensed_az = start.azimuth;
  double sensed_el = start.elevation;

  for (long i = 0; i < n_ticks; ++i) {
    const double t = static_cast<double>(i) * dt;
    const Position3 user_pos = advance_trajectory(cfg.trajectory, std::min(t, cfg.duration_s));
    const Bearing user = position_to_direction(user_pos);

    // Camera/detector/tracker fire on their own cadence, aligned to the
    // nearest control tick; the cadence follows the supervisor mode.
    if (t >= next_camera_time - dt / 2.0) {
      const std::vector<Detection> detections =
          synth_detect(cfg.camera, detector, {user_pos}, frame_index);
      const double frame_dt = frame_index == 0 ? supervisor.camera_period() : t - last_frame_time;
      const Mode mode_before = supervisor.mode();
      const TrackerOutput out = tracker.step(detections, std::max(frame_dt, dt));
      supervisor.on_camera_frame(out, t);
      if (supervisor.mode() == Mode::Tracking && mode_before == Mode::Scanning) {
        pid_az.reset();
        pid_el.reset();
      }
      if (options.log_detections) {
        for (const Detection& det : detections) {
          result.detection_log.push_back({frame_index, t, det});
        }
      }
      if (options.log_tracks) {
        for (const TrackState& tr : tracker.tracks()) {
          result.track_log.push_back({frame_index, t, tr.track_id, tr.status, tr.mean(0),
                                      tr.mean(1), tr.mean(2), tr.mean(3), tr.last_gate_distance});
        }
      }
      last_frame_time = t;
      frame_index += 1;
      result.camera_frames += 1;
      next_camera_time += supervisor.camera_period();
    }

    // The record captures the state at this tick instant: boresight and
    // sensor readings before the servo advances toward the next tick.
    StepRecord rec;
    const Direction boresight(servo_az.angle(), servo_el.angle());
    const double psi = angular_separation(boresight, user.direction);
    rec.t = t;
    rec.user_pos = user_pos;
    rec.user_dir = user.direction;
    rec.mode = supervisor.mode();
    rec.locked_track_id = supervisor.locked_track_id().value_or(-1);
    rec.boresight = boresight;
    rec.pointing_error_rad = psi;
    rec.tx_gain_dbi = gain_dbi(cfg.pattern, psi);
    rec.fspl_db = fspl_db(cfg.link.carrier_hz, user.range_m);
    rec.prx_dbm =
        received_power_dbm(cfg.link, rec.tx_gain_dbi, isotropic_gain_dbi(psi), user.range_m);
    rec.snr_db = snr_db(cfg.link, rec.prx_dbm);
    rec.ber = ber_16qam(ebn0_db(cfg.link, rec.snr_db));
    rec.sensed_az_rad = sensed_az;
    rec.sensed_el_rad = sensed_el;

    // Steering: PID rate commands integrated by the slew-limited servo.
    // While Scanning (or in FixedOrientation mode) the antenna holds.
    const std::optional<Direction> target =
        rotatable ? supervisor.steering_target(t) : std::nullopt;
    if (target.has_value()) {
      const Direction sensed_boresight(std::clamp(sensed_az, cfg.servo_az.angle_min_rad,
                                                  cfg.servo_az.angle_max_rad),
                                       std::clamp(sensed_el, cfg.servo_el.angle_min_rad,
                                                  cfg.servo_el.angle_max_rad));
      const SteerCommand cmd = steer(pid_az, pid_el, sensed_boresight, *target, dt);
      const double az_target = servo_az.angle() + cmd.az_rate * dt;
      const double el_target = servo_el.angle() + cmd.el_rate * dt;
      rec.cmd_pulse_az_us = angle_to_pulse(cfg.servo_az, az_target);
      rec.cmd_pulse_el_us = angle_to_pulse(cfg.servo_el, el_target);
      if (az_target < cfg.servo_az.angle_min_rad || az_target > cfg.servo_az.angle_max_rad ||
          el_target < cfg.servo_el.angle_min_rad || el_target > cfg.servo_el.angle_max_rad) {
        result.pulse_clamp_warnings += 1;
      }
      const ServoAxis::StepResult az_step = servo_az.step(az_target, dt);
      const ServoAxis::StepResult el_step = servo_el.step(el_target, dt);
      sensed_az = az_step.sensed_angle_rad;
      sensed_el = el_step.sensed_angle_rad;
      rec.steer_error_az_rad = cmd.az_error;
      rec.steer_error_el_rad = cmd.el_error;
    } else {
      const ServoAxis::StepResult az_step = servo_az.step(servo_az.angle(), dt);
      const ServoAxis::StepResult el_step = servo_el.step(servo_el.angle(), dt);
      sensed_az = az_step.sensed_angle_rad;
      sensed_el = el_step.sensed_angle_rad;
      rec.cmd_pulse_az_us = angle_to_pulse(cfg.servo_az, servo_az.angle());
      rec.cmd_pulse_el_us = angle_to_pulse(cfg.servo_el, servo_el.angle());
    }
    result.records.push_back(rec);
  }
  return result;
}

Summary summarize(std::span<const StepRecord> records) {
  if (records.empty()) {
    throw std::invalid_argument("summarize: empty record list");
  }
  Summary s;
  s.ticks = static_cast<long>(records.size());
  double sum = 0.0;
  double sum_sq = 0.0;
  double sum_mw = 0.0;
  s.prx_min_dbm = records[0].prx_dbm;
  s.prx_max_dbm = records[0].prx_dbm;
  std::vector<double> pointing;
  pointing.reserve(records.size());
  long tracking_ticks = 0;
  for (const StepRecord& r : records) {
    sum += r.prx_dbm;
    sum_sq += r.prx_dbm * r.prx_dbm;
    sum_mw += std::pow(10.0, r.prx_dbm / 10.0);
    s.prx_min_dbm = std::min(s.prx_min_dbm, r.prx_dbm);
    s.prx_max_dbm = std::max(s.prx_max_dbm, r.prx_dbm);
    pointing.push_back(r.pointing_error_rad);
    if (r.mode == Mode::Tracking) {
      tracking_ticks += 1;
      if (!s.lock_time_s.has_value()) {
        s.lock_time_s = r.t;
      }
    }
  }
  const double n = static_cast<double>(records.size());
  s.prx_mean_dbm = sum / n;
  s.prx_mean_mw_domain_dbm = 10.0 * std::log10(sum_mw / n);
  s.prx_stddev_db = std::sqrt(std::max(0.0, sum_sq / n - s.prx_mean_dbm * s.prx_mean_dbm));
  std::sort(pointing.begin(), pointing.end());
  auto nearest_rank = [&pointing](double q) {
    const std::size_t rank =
        static_cast<std::size_t>(std::ceil(q * static_cast<double>(pointing.size())));
    return pointing[std::clamp<std::size_t>(rank, 1, pointing.size()) - 1];
  };
  s.pointing_p50_rad = nearest_rank(0.50);
  s.pointing_p95_rad = nearest_rank(0.95);
  s.pointing_max_rad = pointing.back();
  s.tracking_fraction = static_cast<double>(tracking_ticks) / n;
  return s;
}

CompareResult compare_modes(const ScenarioConfig& cfg) {
  ScenarioConfig ra_cfg = cfg;
  ra_cfg.antenna_mode = AntennaMode::Rotatable;
  ScenarioConfig fixed_cfg = cfg;
  fixed_cfg.antenna_mode = AntennaMode::FixedOrientation;

  const RunResult ra = run_scenario(ra_cfg);
  const RunResult fixed = run_scenario(fixed_cfg);
  if (ra.records.size() != fixed.records.size()) {
    throw std::runtime_error("compare_modes: tick counts diverged between modes");
  }

  CompareResult result;
  result.rows.reserve(ra.records.size());
  for (std::size_t i = 0; i < ra.records.size(); ++i) {
    const StepRecord& a = ra.records[i];
    const StepRecord& b = fixed.records[i];
    result.rows.push_back({a.t, a.user_dir.azimuth, a.prx_dbm, b.prx_dbm, a.pointing_error_rad,
                           b.pointing_error_rad});
  }
  result.rotatable = summarize(ra.records);
  result.fixed = summarize(fixed.records);
  result.mean_gain_db = result.rotatable.prx_mean_dbm - result.fixed.prx_mean_dbm;
  return result;
}

}  // namespace rasim
