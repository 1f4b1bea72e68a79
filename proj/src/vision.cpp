#include "rasim/vision.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rasim/rng.hpp"

namespace rasim {
namespace {

constexpr std::uint64_t kDetectorStreamId = 0x64657465637402ULL;

struct Mat3 {
  double m[3][3];
};

// Column vectors of the camera-to-world rotation are the camera axes in
// world coordinates: Rz(az) * Ry(-el), zero roll.
Mat3 camera_to_world(const Direction& mount) {
  const double ca = std::cos(mount.azimuth);
  const double sa = std::sin(mount.azimuth);
  const double ce = std::cos(mount.elevation);
  const double se = std::sin(mount.elevation);
  return Mat3{{{ca * ce, -sa, -ca * se},  //
               {sa * ce, ca, -sa * se},
               {se, 0.0, ce}}};
}

Position3 apply(const Mat3& r, const Position3& p) {
  return {r.m[0][0] * p.x + r.m[0][1] * p.y + r.m[0][2] * p.z,
          r.m[1][0] * p.x + r.m[1][1] * p.y + r.m[1][2] * p.z,
          r.m[2][0] * p.x + r.m[2][1] * p.y + r.m[2][2] * p.z};
}

Position3 apply_transposed(const Mat3& r, const Position3& p) {
  return {r.m[0][0] * p.x + r.m[1][0] * p.y + r.m[2][0] * p.z,
          r.m[0][1] * p.x + r.m[1][1] * p.y + r.m[2][1] * p.z,
          r.m[0][2] * p.x + r.m[1][2] * p.y + r.m[2][2] * p.z};
}

}  // namespace

std::vector<std::string> validate(const CameraModel& cam, const std::string& path) {
  std::vector<std::string> errors;
  if (cam.width_px < 1) {
    errors.push_back(path + ".width_px: must be >= 1");
  }
  if (cam.height_px < 1) {
    errors.push_back(path + ".height_px: must be >= 1");
  }
  if (!(cam.hfov_rad > 0.0) || !(cam.hfov_rad < kPi) || !std::isfinite(cam.hfov_rad)) {
    errors.push_back(path + ".hfov_deg: must lie in (0, 180) degrees");
  }
  if (!(cam.frame_rate_hz > 0.0) || !std::isfinite(cam.frame_rate_hz)) {
    errors.push_back(path + ".frame_rate_hz: must be > 0");
  }
  return errors;
}

std::vector<std::string> validate(const DetectorParams& params, const std::string& path) {
  std::vector<std::string> errors;
  if (!(params.detection_prob >= 0.0 && params.detection_prob <= 1.0)) {
    errors.push_back(path + ".detection_prob: must lie in [0, 1]");
  }
  if (!(params.pixel_noise_sigma >= 0.0) || !std::isfinite(params.pixel_noise_sigma)) {
    errors.push_back(path + ".pixel_noise_sigma: must be >= 0");
  }
  if (!(params.false_alarm_rate >= 0.0) || !std::isfinite(params.false_alarm_rate)) {
    errors.push_back(path + ".false_alarm_rate: must be >= 0");
  }
  if (!(params.target_height_m > 0.0) || !(params.target_width_m > 0.0)) {
    errors.push_back(path + ".target size: must be > 0");
  }
  return errors;
}

std::optional<PixelPoint> project(const CameraModel& cam, const Position3& p) {
  if (norm(p) <= 0.0) {
    throw std::invalid_argument("project: target at the camera origin");
  }
  const Mat3 r = camera_to_world(cam.mount);
  const Position3 pc = apply_transposed(r, p);
  if (pc.x <= 0.0) {
    return std::nullopt;  // behind the camera
  }
  const double az_rel = std::atan2(pc.y, pc.x);
  const double el_rel = std::atan2(pc.z, std::hypot(pc.x, pc.y));
  const double f = cam.focal_px();
  const double cx = cam.width_px / 2.0;
  const double cy = cam.height_px / 2.0;
  const double u = cx + f * std::tan(az_rel);
  const double v = cy - f * std::tan(el_rel) / std::cos(az_rel);
  if (u < 0.0 || u > cam.width_px || v < 0.0 || v > cam.height_px) {
    return std::nullopt;
  }
  return PixelPoint{u, v};
}

Direction pixel_to_direction(const CameraModel& cam, double u, double v) {
  if (!(u >= 0.0 && u <= cam.width_px && v >= 0.0 && v <= cam.height_px)) {
    throw std::invalid_argument("pixel_to_direction: pixel outside image bounds");
  }
  const double f = cam.focal_px();
  const double cx = cam.width_px / 2.0;
  const double cy = cam.height_px / 2.0;
  const double az_rel = std::atan((u - cx) / f);
  const double el_rel = std::atan((cy - v) * std::cos(az_rel) / f);
  const Direction rel(az_rel, el_rel);
  const Mat3 r = camera_to_world(cam.mount);
  const Position3 world = apply(r, direction_to_unit(rel));
  return position_to_direction(world).direction;
}

std::vector<Detection> synth_detect(const CameraModel& cam, const DetectorParams& params,
                                    const std::vector<Position3>& truth, long frame_index) {
  RandomStream rng = RandomStream::substream(params.rng_seed, kDetectorStreamId,
                                             static_cast<std::uint64_t>(frame_index));
  std::vector<Detection> detections;
  const double f = cam.focal_px();
  for (const Position3& target : truth) {
    const auto pixel = project(cam, target);
    if (!pixel.has_value()) {
      continue;
    }
    if (rng.uniform01() >= params.detection_prob) {
      continue;  // missed detection
    }
    Detection det;
    det.frame_index = frame_index;
    det.center_u = std::clamp(pixel->u + rng.normal(0.0, params.pixel_noise_sigma), 0.0,
                              static_cast<double>(cam.width_px));
    det.center_v = std::clamp(pixel->v + rng.normal(0.0, params.pixel_noise_sigma), 0.0,
                              static_cast<double>(cam.height_px));
    const double range = norm(target);
    det.box_w = std::max(1.0, f * params.target_width_m / range);
    det.box_h = std::max(1.0, f * params.target_height_m / range);
    det.confidence = rng.uniform(0.55, 0.95);
    detections.push_back(det);
  }
  const int false_alarms = rng.poisson(params.false_alarm_rate);
  for (int i = 0; i < false_alarms; ++i) {
    Detection det;
    det.frame_index = frame_index;
    det.center_u = rng.uniform(0.0, cam.width_px);
    det.center_v = rng.uniform(0.0, cam.height_px);
    det.box_h = rng.uniform(8.0, 60.0);
    det.box_w = det.box_h * params.target_width_m / params.target_height_m;
    det.confidence = rng.uniform(0.05, 0.55);
    detections.push_back(det);
  }
  return detections;
}

}  // namespace rasim
