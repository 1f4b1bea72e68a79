#include "rasim/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rasim/assignment.hpp"

namespace rasim {
namespace {

// Out-of-gate sentinel. Large enough that the solver prefers any set of
// in-gate matches over a gated one, which yields maximum cardinality.
constexpr double kGatedCost = 1.0e12;

Eigen::Matrix4d transition(double dt) {
  Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
  f(0, 2) = dt;
  f(1, 3) = dt;
  return f;
}

Eigen::Matrix4d process_noise(double dt, double accel_std) {
  const double q = accel_std * accel_std;
  const double dt2 = dt * dt;
  const double dt3 = dt2 * dt;
  const double dt4 = dt3 * dt;
  Eigen::Matrix4d qm = Eigen::Matrix4d::Zero();
  qm(0, 0) = qm(1, 1) = q * dt4 / 4.0;
  qm(2, 2) = qm(3, 3) = q * dt2;
  qm(0, 2) = qm(2, 0) = q * dt3 / 2.0;
  qm(1, 3) = qm(3, 1) = q * dt3 / 2.0;
  return qm;
}

// Innovation covariance of the position measurement.
Eigen::Matrix2d innovation_covariance(const TrackState& t, const TrackerParams& params) {
  const double r = params.measurement_noise * params.measurement_noise;
  return t.covariance.topLeftCorner<2, 2>() + r * Eigen::Matrix2d::Identity();
}

}  // namespace

const char* to_string(TrackStatus status) {
  switch (status) {
    case TrackStatus::Tentative:
      return "tentative";
    case TrackStatus::Confirmed:
      return "confirmed";
    case TrackStatus::Deleted:
      return "deleted";
  }
  return "?";
}

std::vector<std::string> validate(const TrackerParams& params, const std::string& path) {
  std::vector<std::string> errors;
  if (!(params.process_noise_accel > 0.0)) {
    errors.push_back(path + ".process_noise_accel: must be > 0");
  }
  if (!(params.measurement_noise > 0.0)) {
    errors.push_back(path + ".measurement_noise_px: must be > 0");
  }
  if (!(params.gate_threshold > 0.0)) {
    errors.push_back(path + ".gate_threshold: must be > 0");
  }
  if (params.n_init < 1) {
    errors.push_back(path + ".n_init: must be >= 1");
  }
  if (params.max_age < 1) {
    errors.push_back(path + ".max_age: must be >= 1");
  }
  return errors;
}

TrackState new_track(const Detection& det, int track_id, const TrackerParams& params) {
  TrackState t;
  t.mean << det.center_u, det.center_v, 0.0, 0.0;
  const double r = params.measurement_noise * params.measurement_noise;
  t.covariance = Eigen::Matrix4d::Zero();
  t.covariance(0, 0) = t.covariance(1, 1) = r;
  t.covariance(2, 2) = t.covariance(3, 3) = kInitialVelocityStd * kInitialVelocityStd;
  t.track_id = track_id;
  t.hits = 1;
  t.time_since_update = 0;
  t.status = TrackStatus::Tentative;
  t.box_w = det.box_w;
  t.box_h = det.box_h;
  return t;
}

TrackState kf_predict(TrackState t, double dt, const TrackerParams& params) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("kf_predict: dt must be > 0");
  }
  const Eigen::Matrix4d f = transition(dt);
  t.mean = f * t.mean;
  t.covariance = f * t.covariance * f.transpose() + process_noise(dt, params.process_noise_accel);
  t.time_since_update += 1;
  return t;
}

TrackState kf_update(TrackState t, const Detection& det, const TrackerParams& params) {
  const Eigen::Vector2d z(det.center_u, det.center_v);
  const Eigen::Matrix2d s = innovation_covariance(t, params);
  Eigen::Matrix<double, 4, 2> h_t = Eigen::Matrix<double, 4, 2>::Zero();
  h_t(0, 0) = 1.0;
  h_t(1, 1) = 1.0;
  const Eigen::Matrix<double, 4, 2> gain = t.covariance * h_t * s.inverse();
  const Eigen::Vector2d innovation = z - t.mean.head<2>();
  t.mean += gain * innovation;
  // Joseph form: P = (I - KH) P (I - KH)' + K R K'
  const double r = params.measurement_noise * params.measurement_noise;
  const Eigen::Matrix4d ikh = Eigen::Matrix4d::Identity() - gain * h_t.transpose();
  t.covariance = ikh * t.covariance * ikh.transpose() +
                 gain * (r * Eigen::Matrix2d::Identity()) * gain.transpose();
  t.hits += 1;
  t.time_since_update = 0;
  t.box_w = det.box_w;
  t.box_h = det.box_h;
  return t;
}

double gating_distance(const TrackState& t, const Detection& det, const TrackerParams& params) {
  const Eigen::Matrix2d s = innovation_covariance(t, params);
  const Eigen::LLT<Eigen::Matrix2d> llt(s);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("gating_distance: singular innovation covariance");
  }
  const Eigen::Vector2d innovation(det.center_u - t.mean(0), det.center_v - t.mean(1));
  const Eigen::Vector2d y = llt.matrixL().solve(innovation);
  return y.squaredNorm();
}

Association associate(const std::vector<TrackState>& tracks,
                      const std::vector<Detection>& detections, const TrackerParams& params) {
  Association result;
  const int n = static_cast<int>(tracks.size());
  const int m = static_cast<int>(detections.size());
  if (n == 0 || m == 0) {
    for (int i = 0; i < n; ++i) result.unmatched_tracks.push_back(i);
    for (int j = 0; j < m; ++j) result.unmatched_detections.push_back(j);
    return result;
  }

  std::vector<std::vector<double>> cost(n, std::vector<double>(m));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const double d2 = gating_distance(tracks[i], detections[j], params);
      cost[i][j] = d2 < params.gate_threshold ? d2 : kGatedCost;
    }
  }

  const std::vector<int> row_to_col = solve_assignment(cost);
  std::vector<char> det_matched(m, 0);
  for (int i = 0; i < n; ++i) {
    const int j = row_to_col[i];
    if (j >= 0 && cost[i][j] < kGatedCost) {
      result.matches.emplace_back(i, j);
      det_matched[j] = 1;
    } else {
      result.unmatched_tracks.push_back(i);
    }
  }
  for (int j = 0; j < m; ++j) {
    if (!det_matched[j]) {
      result.unmatched_detections.push_back(j);
    }
  }
  return result;
}

TrackerOutput Tracker::step(const std::vector<Detection>& detections, double dt) {
  frame_ += 1;
  for (TrackState& t : tracks_) {
    t = kf_predict(t, dt, params_);
    t.last_gate_distance = std::numeric_limits<double>::quiet_NaN();
  }

  const Association assoc = associate(tracks_, detections, params_);
  TrackerOutput out;

  for (const auto& [ti, di] : assoc.matches) {
    TrackState& t = tracks_[ti];
    const double gate = gating_distance(t, detections[di], params_);
    t = kf_update(t, detections[di], params_);
    t.last_gate_distance = gate;
    if (t.status == TrackStatus::Tentative && t.hits >= params_.n_init) {
      t.status = TrackStatus::Confirmed;
      out.events.push_back({TrackEvent::Kind::Confirmed, t.track_id, frame_});
    }
  }

  for (const int ti : assoc.unmatched_tracks) {
    TrackState& t = tracks_[ti];
    // A tentative track dies on its first miss (hits must be consecutive);
    // a confirmed track survives max_age missed frames.
    if (t.status == TrackStatus::Tentative || t.time_since_update >= params_.max_age) {
      t.status = TrackStatus::Deleted;
      out.events.push_back({TrackEvent::Kind::Deleted, t.track_id, frame_});
    }
  }

  for (const int di : assoc.unmatched_detections) {
    TrackState t = new_track(detections[di], next_id_++, params_);
    if (t.hits >= params_.n_init) {
      t.status = TrackStatus::Confirmed;
      out.events.push_back({TrackEvent::Kind::Confirmed, t.track_id, frame_});
    }
    tracks_.push_back(std::move(t));
  }

  std::erase_if(tracks_, [](const TrackState& t) { return t.status == TrackStatus::Deleted; });

  for (const TrackState& t : tracks_) {
    if (t.status == TrackStatus::Confirmed) {
      out.confirmed.push_back(t);
    }
  }
  return out;
}

}  // namespace rasim
