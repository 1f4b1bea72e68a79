#include "rasim/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rasim {

std::vector<std::string> validate(const ServoAxisConfig& cfg, const std::string& path) {
  std::vector<std::string> errors;
  if (!(cfg.pulse_min_us < cfg.pulse_max_us)) {
    errors.push_back(path + ".pulse_min_us/" + path + ".pulse_max_us: require pulse_min < pulse_max");
  }
  if (!(cfg.angle_min_rad < cfg.angle_max_rad)) {
    errors.push_back(path + ".angle_min_deg/" + path + ".angle_max_deg: require angle_min < angle_max");
  }
  if (!(cfg.max_speed_rad_s > 0.0)) {
    errors.push_back(path + ".max_speed_deg_per_s: must be > 0");
  }
  if (!(cfg.sensor_noise_sigma_rad >= 0.0)) {
    errors.push_back(path + ".sensor_noise_sigma_deg: must be >= 0");
  }
  return errors;
}

double pulse_to_angle(const ServoAxisConfig& cfg, double pulse_us, bool* clamped) {
  const double p = std::clamp(pulse_us, cfg.pulse_min_us, cfg.pulse_max_us);
  if (clamped != nullptr) {
    *clamped = p != pulse_us;
  }
  const double frac = (p - cfg.pulse_min_us) / (cfg.pulse_max_us - cfg.pulse_min_us);
  return cfg.angle_min_rad + frac * (cfg.angle_max_rad - cfg.angle_min_rad);
}

double angle_to_pulse(const ServoAxisConfig& cfg, double angle_rad) {
  const double a = std::clamp(angle_rad, cfg.angle_min_rad, cfg.angle_max_rad);
  const double frac = (a - cfg.angle_min_rad) / (cfg.angle_max_rad - cfg.angle_min_rad);
  return cfg.pulse_min_us + frac * (cfg.pulse_max_us - cfg.pulse_min_us);
}

ServoAxis::ServoAxis(const ServoAxisConfig& cfg, double initial_angle_rad, RandomStream sensor_rng)
    : cfg_(cfg),
      angle_(std::clamp(initial_angle_rad, cfg.angle_min_rad, cfg.angle_max_rad)),
      rng_(sensor_rng) {}

ServoAxis::StepResult ServoAxis::step(double target_angle_rad, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("ServoAxis::step: dt must be > 0");
  }
  const double target = std::clamp(target_angle_rad, cfg_.angle_min_rad, cfg_.angle_max_rad);
  const double max_step = cfg_.max_speed_rad_s * dt;
  const double delta = target - angle_;
  if (std::abs(delta) <= max_step) {
    angle_ = target;
  } else {
    angle_ += std::copysign(max_step, delta);
  }
  const double sensed = cfg_.sensor_noise_sigma_rad > 0.0
                            ? angle_ + rng_.normal(0.0, cfg_.sensor_noise_sigma_rad)
                            : angle_;
  return {angle_, sensed};
}

std::vector<std::string> validate(const PidConfig& cfg, const std::string& path) {
  std::vector<std::string> errors;
  if (!(cfg.output_limit > 0.0)) {
    errors.push_back(path + ".output_limit_deg_per_s: must be > 0");
  }
  if (!(cfg.integral_limit > 0.0)) {
    errors.push_back(path + ".integral_limit: must be > 0");
  }
  for (double g : {cfg.kp, cfg.ki, cfg.kd}) {
    if (!std::isfinite(g) || g < 0.0) {
      errors.push_back(path + ".kp/ki/kd: gains must be finite and >= 0");
      break;
    }
  }
  return errors;
}

double PidController::step(double error_rad, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("PidController::step: dt must be > 0");
  }
  const double candidate_integral =
      std::clamp(integral_ + error_rad * dt, -cfg_.integral_limit, cfg_.integral_limit);
  const double derivative = (error_rad - prev_error_) / dt;
  const double raw =
      cfg_.kp * error_rad + cfg_.ki * candidate_integral + cfg_.kd * derivative;
  prev_error_ = error_rad;
  if (std::abs(raw) > cfg_.output_limit) {
    // Saturated: hold the integral where it was.
    return std::copysign(cfg_.output_limit, raw);
  }
  integral_ = candidate_integral;
  return raw;
}

void PidController::reset() {
  integral_ = 0.0;
  prev_error_ = 0.0;
}

SteerCommand steer(PidController& az_pid, PidController& el_pid, const Direction& current,
                   const Direction& target, double dt) {
  SteerCommand cmd;
  cmd.az_error = wrap_angle(target.azimuth - current.azimuth);
  cmd.el_error = wrap_angle(target.elevation - current.elevation);
  cmd.az_rate = az_pid.step(cmd.az_error, dt);
  cmd.el_rate = el_pid.step(cmd.el_error, dt);
  return cmd;
}

const char* to_string(Mode mode) {
  return mode == Mode::Scanning ? "scanning" : "tracking";
}

std::vector<std::string> validate(const SupervisorConfig& cfg, const std::string& path) {
  std::vector<std::string> errors;
  if (!(cfg.scan_period_s > 0.0)) {
    errors.push_back(path + ".scan_period_s: must be > 0");
  }
  return errors;
}

void Supervisor::on_camera_frame(const TrackerOutput& out, double now) {
  if (mode_ == Mode::Tracking) {
    for (const TrackEvent& ev : out.events) {
      if (ev.kind == TrackEvent::Kind::Deleted && ev.track_id == *locked_track_id_) {
        mode_ = Mode::Scanning;
        locked_track_id_.reset();
        frames_since_seen_ = 0;
        return;
      }
    }
    for (const TrackState& t : out.confirmed) {
      if (t.track_id == *locked_track_id_) {
        locked_state_ = t.mean;
        locked_state_time_ = now;
        frames_since_seen_ = t.time_since_update;
        return;
      }
    }
    // Locked track absent but not deleted cannot happen (confirmed tracks
    // stay in the output while coasting); treat it as a lost lock anyway.
    mode_ = Mode::Scanning;
    locked_track_id_.reset();
    frames_since_seen_ = 0;
    return;
  }

  // Scanning: lock onto the oldest (lowest-id) confirmed track.
  const TrackState* best = nullptr;
  for (const TrackState& t : out.confirmed) {
    if (best == nullptr || t.track_id < best->track_id) {
      best = &t;
    }
  }
  if (best != nullptr) {
    mode_ = Mode::Tracking;
    locked_track_id_ = best->track_id;
    locked_state_ = best->mean;
    locked_state_time_ = now;
    frames_since_seen_ = best->time_since_update;
  }
}

std::optional<Direction> Supervisor::steering_target(double now) const {
  if (mode_ != Mode::Tracking) {
    return std::nullopt;
  }
  const double dt = now - locked_state_time_;
  const double u = std::clamp(locked_state_(0) + locked_state_(2) * dt, 0.0,
                              static_cast<double>(cam_.width_px));
  const double v = std::clamp(locked_state_(1) + locked_state_(3) * dt, 0.0,
                              static_cast<double>(cam_.height_px));
  return pixel_to_direction(cam_, u, v);
}

}  // namespace rasim
