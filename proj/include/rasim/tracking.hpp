#ifndef RASIM_TRACKING_HPP
#define RASIM_TRACKING_HPP

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rasim/vision.hpp"

namespace rasim {

enum class TrackStatus { Tentative, Confirmed, Deleted };

const char* to_string(TrackStatus status);

// Image-plane track: constant-velocity Kalman state (u, v, u_dot, v_dot)
// in px and px/s. Box size is carried through unfiltered; association and
// steering only need the center.
struct TrackState {
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  Eigen::Matrix4d covariance = Eigen::Matrix4d::Identity();
  int track_id = 0;
  int hits = 0;
  int time_since_update = 0;
  TrackStatus status = TrackStatus::Tentative;
  double box_w = 0.0;
  double box_h = 0.0;
  double last_gate_distance = std::numeric_limits<double>::quiet_NaN();
};

struct TrackerParams {
  double process_noise_accel = 200.0;  // px/s^2 std of the white-accel model
  double measurement_noise = 1.0;      // px std
  double gate_threshold = 5.991;       // chi-square 95% quantile, 2 DoF
  int n_init = 3;
  int max_age = 30;
};

std::vector<std::string> validate(const TrackerParams& params, const std::string& path);

// Freshly spawned tracks get an exact-measurement position prior and this
// velocity std, wide enough that the first re-observation gates in even
// for fast image motion.
inline constexpr double kInitialVelocityStd = 1000.0;  // px/s

TrackState new_track(const Detection& det, int track_id, const TrackerParams& params);

// Constant-velocity predict: mean <- F mean, P <- F P F' + Q(dt), and the
// missed-frame counter advances. Rejects dt <= 0.
TrackState kf_predict(TrackState t, double dt, const TrackerParams& params);

// Standard Kalman correction with H selecting (u, v); Joseph form keeps
// the posterior covariance symmetric PSD.
TrackState kf_update(TrackState t, const Detection& det, const TrackerParams& params);

// Squared Mahalanobis distance of the detection from the track's predicted
// measurement distribution.
double gating_distance(const TrackState& t, const Detection& det, const TrackerParams& params);

struct Association {
  std::vector<std::pair<int, int>> matches;  // (track index, detection index)
  std::vector<int> unmatched_tracks;
  std::vector<int> unmatched_detections;
};

// Gated min-cost assignment on Mahalanobis distance: every match is inside
// the gate, cardinality is maximal among in-gate matchings, and total cost
// is minimal at that cardinality.
Association associate(const std::vector<TrackState>& tracks,
                      const std::vector<Detection>& detections, const TrackerParams& params);

struct TrackEvent {
  enum class Kind { Confirmed, Deleted };
  Kind kind;
  int track_id;
  long frame;
};

struct TrackerOutput {
  std::vector<TrackState> confirmed;
  std::vector<TrackEvent> events;
};

// Tracking-by-detection lifecycle: tracks spawn Tentative, confirm after
// n_init consecutive hits, and die immediately on a tentative miss or
// after max_age missed frames once confirmed. Single-owner state machine:
// one scenario drives it sequentially.
class Tracker {
 public:
  explicit Tracker(TrackerParams params) : params_(params) {}

  TrackerOutput step(const std::vector<Detection>& detections, double dt);

  const std::vector<TrackState>& tracks() const { return tracks_; }
  long frame() const { return frame_; }

 private:
  TrackerParams params_;
  std::vector<TrackState> tracks_;
  int next_id_ = 1;
  long frame_ = 0;
};

}  // namespace rasim

#endif  // RASIM_TRACKING_HPP
