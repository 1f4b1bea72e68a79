#ifndef RASIM_ENGINE_HPP
#define RASIM_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rasim/antenna.hpp"
#include "rasim/channel.hpp"
#include "rasim/control.hpp"
#include "rasim/geometry.hpp"
#include "rasim/tracking.hpp"
#include "rasim/vision.hpp"

namespace rasim {

// ---------------------------------------------------------------------------
// Trajectories

// Constant-radius horizontal sweep: azimuth runs from az_start toward
// az_end at angular_rate and clamps there. Range is constant, so received
// power varies only through antenna orientation.
struct ArcSweep {
  double radius_m = 10.0;
  double elevation_rad = 0.0;
  double az_start_rad = -kHalfPi;
  double az_end_rad = kHalfPi;
  double angular_rate_rad_s = deg2rad(9.0);
};

struct LinearWalk {
  Position3 start;
  Position3 end;
  double speed_m_s = 1.0;
};

struct TimedWaypoint {
  double t = 0.0;
  Position3 position;
};

struct Waypoints {
  std::vector<TimedWaypoint> points;
};

using TrajectorySpec = std::variant<ArcSweep, LinearWalk, Waypoints>;

std::vector<std::string> validate(const TrajectorySpec& spec, const std::string& path);

// Ground-truth user position at time t >= 0 (negative t rejected).
Position3 advance_trajectory(const TrajectorySpec& spec, double t);

// ---------------------------------------------------------------------------
// Scenario configuration

enum class AntennaMode { Rotatable, FixedOrientation };

struct ScenarioConfig {
  double duration_s = 20.0;
  double control_rate_hz = 50.0;
  std::uint64_t seed = 1;

  CameraModel camera;
  DetectorParams detector;
  TrackerParams tracker;
  ServoAxisConfig servo_az;
  ServoAxisConfig servo_el{.angle_min_rad = -kPi / 4.0, .angle_max_rad = kPi / 4.0};
  PidConfig pid;
  SupervisorConfig supervisor;
  RadiationPattern pattern;
  LinkParams link;
  TrajectorySpec trajectory = ArcSweep{};

  AntennaMode antenna_mode = AntennaMode::Rotatable;
  Direction fixed_orientation;   // boresight used in FixedOrientation mode
  Direction initial_boresight;   // starting orientation in Rotatable mode
};

// Aggregates every violated invariant (empty means valid).
std::vector<std::string> validate(const ScenarioConfig& cfg);

// ---------------------------------------------------------------------------
// Outputs

// One row per control tick. Angles in radians, powers in dBm/dB.
struct StepRecord {
  double t = 0.0;
  Position3 user_pos;
  Direction user_dir;
  Mode mode = Mode::Scanning;
  int locked_track_id = -1;  // -1 when no lock
  Direction boresight;
  double pointing_error_rad = 0.0;
  double tx_gain_dbi = 0.0;
  double fspl_db = 0.0;
  double prx_dbm = 0.0;
  double snr_db = 0.0;
  double ber = 0.0;
  // Control telemetry
  double cmd_pulse_az_us = 0.0;
  double cmd_pulse_el_us = 0.0;
  double sensed_az_rad = 0.0;
  double sensed_el_rad = 0.0;
  double steer_error_az_rad = 0.0;
  double steer_error_el_rad = 0.0;
};

struct DetectionRecord {
  long frame = 0;
  double t = 0.0;
  Detection detection;
};

struct TrackRecord {
  long frame = 0;
  double t = 0.0;
  int track_id = 0;
  TrackStatus status = TrackStatus::Tentative;
  double u = 0.0, v = 0.0, du = 0.0, dv = 0.0;
  double gate_distance = 0.0;  // NaN when the track was not matched this frame
};

struct RunOptions {
  bool log_detections = false;
  bool log_tracks = false;
};

struct RunResult {
  std::vector<StepRecord> records;
  long camera_frames = 0;
  long pulse_clamp_warnings = 0;
  std::vector<DetectionRecord> detection_log;
  std::vector<TrackRecord> track_log;
};

// Deterministic fixed-step pipeline: trajectory -> camera/detector ->
// tracker -> supervisor/PID -> servo -> antenna gain -> link budget.
// Throws std::invalid_argument listing all config violations.
RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& options = {});

struct Summary {
  long ticks = 0;
  double prx_mean_dbm = 0.0;
  double prx_mean_mw_domain_dbm = 0.0;  // mean taken in milliwatts, reported in dBm
  double prx_min_dbm = 0.0;
  double prx_max_dbm = 0.0;
  double prx_stddev_db = 0.0;
  double pointing_p50_rad = 0.0;
  double pointing_p95_rad = 0.0;
  double pointing_max_rad = 0.0;
  double tracking_fraction = 0.0;
  std::optional<double> lock_time_s;
};

// dBm statistics are computed arithmetically in the dB domain; percentiles
// use the nearest-rank definition. Rejects an empty record list.
Summary summarize(std::span<const StepRecord> records);

struct CompareRow {
  double t = 0.0;
  double user_az_rad = 0.0;
  double prx_ra_dbm = 0.0;
  double prx_fixed_dbm = 0.0;
  double pointing_ra_rad = 0.0;
  double pointing_fixed_rad = 0.0;
};

struct CompareResult {
  std::vector<CompareRow> rows;
  Summary rotatable;
  Summary fixed;
  double mean_gain_db = 0.0;  // mean(prx_ra) - mean(prx_fixed)
};

// Runs the identical trajectory and seed in Rotatable and FixedOrientation
// modes and joins the records by tick.
CompareResult compare_modes(const ScenarioConfig& cfg);

}  // namespace rasim

#endif  // RASIM_ENGINE_HPP
