#ifndef RASIM_CONTROL_HPP
#define RASIM_CONTROL_HPP

#include <optional>
#include <string>
#include <vector>

#include "rasim/geometry.hpp"
#include "rasim/rng.hpp"
#include "rasim/tracking.hpp"
#include "rasim/vision.hpp"

namespace rasim {

// One gimbal axis: pulse-width command interface (linear pulse <-> angle
// map), slew-rate limit, and a noisy angle sensor. The servo's internal
// closed loop is abstracted as rate-limited convergence to the commanded
// angle.
struct ServoAxisConfig {
  double pulse_min_us = 1000.0;
  double pulse_max_us = 2000.0;
  double angle_min_rad = -kHalfPi;
  double angle_max_rad = kHalfPi;
  double max_speed_rad_s = kPi;
  double sensor_noise_sigma_rad = 0.0;
};

std::vector<std::string> validate(const ServoAxisConfig& cfg, const std::string& path);

// Linear pulse-to-angle map. Out-of-range pulses clamp (real servos clamp);
// `clamped`, when non-null, reports that a clamp happened.
double pulse_to_angle(const ServoAxisConfig& cfg, double pulse_us, bool* clamped = nullptr);
double angle_to_pulse(const ServoAxisConfig& cfg, double angle_rad);

class ServoAxis {
 public:
  ServoAxis(const ServoAxisConfig& cfg, double initial_angle_rad, RandomStream sensor_rng);

  struct StepResult {
    double angle_rad;         // true axis angle after the step
    double sensed_angle_rad;  // angle sensor reading (noisy)
  };

  // Moves toward the commanded angle by at most max_speed * dt; reaches it
  // exactly once within one slew step. The target is clamped to the axis
  // range first.
  StepResult step(double target_angle_rad, double dt);

  double angle() const { return angle_; }
  const ServoAxisConfig& config() const { return cfg_; }

 private:
  ServoAxisConfig cfg_;
  double angle_;
  RandomStream rng_;
};

struct PidConfig {
  double kp = 8.0;
  double ki = 0.5;
  double kd = 0.1;
  double output_limit = kPi;   // rad/s
  double integral_limit = 1.0; // rad*s
};

std::vector<std::string> validate(const PidConfig& cfg, const std::string& path);

// Discrete PID producing an angular-rate command. Integration is skipped
// while the output is saturated (conditional anti-windup) and the
// accumulated integral is clamped to +/- integral_limit.
class PidController {
 public:
  explicit PidController(const PidConfig& cfg) : cfg_(cfg) {}

  double step(double error_rad, double dt);
  void reset();

  double integral() const { return integral_; }

 private:
  PidConfig cfg_;
  double integral_ = 0.0;
  double prev_error_ = 0.0;
};

struct SteerCommand {
  double az_rate = 0.0;
  double el_rate = 0.0;
  double az_error = 0.0;
  double el_error = 0.0;
};

// Per-axis wrapped pointing error fed to per-axis PIDs; the rate commands
// are integrated by the slew-limited servo axes.
SteerCommand steer(PidController& az_pid, PidController& el_pid, const Direction& current,
                   const Direction& target, double dt);

enum class Mode { Scanning, Tracking };

const char* to_string(Mode mode);

struct SupervisorConfig {
  double scan_period_s = 0.5;
};

std::vector<std::string> validate(const SupervisorConfig& cfg, const std::string& path);

// SCAN/TRACK state machine. While Scanning the camera is sampled every
// scan_period and the antenna holds its orientation; a confirmed track
// locks the supervisor into Tracking, where the steering target follows
// the locked track until that track is deleted.
class Supervisor {
 public:
  Supervisor(const SupervisorConfig& cfg, const CameraModel& cam) : cfg_(cfg), cam_(cam) {}

  // Consumes one processed camera frame. `now` is the frame timestamp.
  void on_camera_frame(const TrackerOutput& out, double now);

  // Steering target at an arbitrary control instant: the locked track's
  // filtered state extrapolated from its last camera frame to `now`
  // (clamped to the image), converted to a world bearing. Empty while
  // Scanning.
  std::optional<Direction> steering_target(double now) const;

  // Camera cadence under the current mode.
  double camera_period() const {
    return mode_ == Mode::Scanning ? cfg_.scan_period_s : 1.0 / cam_.frame_rate_hz;
  }

  Mode mode() const { return mode_; }
  std::optional<int> locked_track_id() const { return locked_track_id_; }
  int frames_since_seen() const { return frames_since_seen_; }

 private:
  SupervisorConfig cfg_;
  CameraModel cam_;
  Mode mode_ = Mode::Scanning;
  std::optional<int> locked_track_id_;
  int frames_since_seen_ = 0;
  Eigen::Vector4d locked_state_ = Eigen::Vector4d::Zero();
  double locked_state_time_ = 0.0;
};

}  // namespace rasim

#endif  // RASIM_CONTROL_HPP
