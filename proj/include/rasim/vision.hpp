#ifndef RASIM_VISION_HPP
#define RASIM_VISION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rasim/geometry.hpp"

namespace rasim {

// Pinhole camera collocated with the antenna at the world origin, fixed
// mount (the optical axis does not move with the antenna). Square pixels,
// no lens distortion. Image coordinates: u grows with relative azimuth,
// v grows downward; (0,0) is the top-left corner, the principal point is
// the image center.
struct CameraModel {
  int width_px = 640;
  int height_px = 480;
  double hfov_rad = 1.0471975511965976;  // 60 degrees
  Direction mount;                       // optical axis in the world frame
  double frame_rate_hz = 30.0;

  double focal_px() const { return (width_px / 2.0) / std::tan(hfov_rad / 2.0); }
};

std::vector<std::string> validate(const CameraModel& cam, const std::string& path);

struct PixelPoint {
  double u = 0.0;
  double v = 0.0;
};

// Projects a world point into the image. Returns nullopt when the point is
// behind the camera or falls outside the image rectangle. Throws on a
// point at the camera origin.
std::optional<PixelPoint> project(const CameraModel& cam, const Position3& p);

// Inverse of project composed with the camera mounting: the world-frame
// bearing seen at pixel (u, v). Rejects out-of-bounds pixels.
Direction pixel_to_direction(const CameraModel& cam, double u, double v);

// What the object detector hands downstream; synthesized here instead of
// running a neural network.
struct Detection {
  double center_u = 0.0;
  double center_v = 0.0;
  double box_w = 0.0;
  double box_h = 0.0;
  double confidence = 0.0;
  long frame_index = 0;
};

// Noise model replacing the real detector. Detections are synthesized from
// ground truth: each in-view target independently fires with
// detection_prob, the reported center gets Gaussian pixel noise, and a
// Poisson number of false alarms lands uniformly on the image. Box size
// comes from a fixed physical target extent projected by range.
struct DetectorParams {
  double detection_prob = 0.95;
  double pixel_noise_sigma = 1.0;
  double false_alarm_rate = 0.0;  // expected false detections per frame
  std::uint64_t rng_seed = 1;
  double target_height_m = 1.7;
  double target_width_m = 0.5;
};

std::vector<std::string> validate(const DetectorParams& params, const std::string& path);

// Deterministic given (rng_seed, frame_index): each frame draws from a
// fresh substream, so two runs over the same frames agree regardless of
// call history.
std::vector<Detection> synth_detect(const CameraModel& cam, const DetectorParams& params,
                                    const std::vector<Position3>& truth, long frame_index);

}  // namespace rasim

#endif  // RASIM_VISION_HPP
