#include "vipdist/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vipdist/error.hpp"
#include "vipdist/stats.hpp"

namespace vipdist::geometry {

void CameraIntrinsics::validate() const {
  if (!(focal_length_px > 0.0) || !std::isfinite(focal_length_px))
    fail(ErrorCode::domain, "focal length must be positive");
  if (image_width_px <= 0 || image_height_px <= 0)
    fail(ErrorCode::domain, "image dimensions must be positive");
}

BoundingBox BoundingBox::make(double x_min, double y_min, double x_max, double y_max,
                              int resolution_w, int resolution_h) {
  if (resolution_w <= 0 || resolution_h <= 0)
    fail(ErrorCode::domain, "bounding box resolution must be positive");
  const bool finite = std::isfinite(x_min) && std::isfinite(y_min) &&
                      std::isfinite(x_max) && std::isfinite(y_max);
  if (!finite || !(0.0 <= x_min && x_min < x_max && x_max <= resolution_w) ||
      !(0.0 <= y_min && y_min < y_max && y_max <= resolution_h)) {
    std::ostringstream msg;
    msg << "invalid bounding box (" << x_min << ',' << y_min << ',' << x_max << ','
        << y_max << ") in " << resolution_w << 'x' << resolution_h;
    fail(ErrorCode::domain, msg.str());
  }
  return BoundingBox(x_min, y_min, x_max, y_max, resolution_w, resolution_h);
}

void Detection::validate() const {
  if (!(confidence >= 0.0 && confidence <= 1.0))
    fail(ErrorCode::domain, "detection confidence outside [0,1]");
}

void DronePose::validate() const {
  if (!(height_m > 0.0)) fail(ErrorCode::domain, "drone height must be positive");
}

void HeightTable::set(const std::string& class_label, Entry entry) {
  if (!(entry.expected_m > 0.0))
    fail(ErrorCode::domain, "expected height for '" + class_label + "' must be positive");
  for (double h : entry.actual_m)
    if (!(h > 0.0))
      fail(ErrorCode::domain, "actual height for '" + class_label + "' must be positive");
  entries_[class_label] = std::move(entry);
}

bool HeightTable::contains(const std::string& class_label) const {
  return entries_.contains(class_label);
}

double HeightTable::expected(const std::string& class_label) const {
  auto it = entries_.find(class_label);
  if (it == entries_.end())
    fail(ErrorCode::missing_data, "no height entry for class '" + class_label + "'");
  return it->second.expected_m;
}

double HeightTable::actual(const std::string& class_label, std::size_t instance) const {
  auto it = entries_.find(class_label);
  if (it == entries_.end() || instance >= it->second.actual_m.size())
    fail(ErrorCode::missing_data, "no actual height for '" + class_label + "' instance " +
                                      std::to_string(instance));
  return it->second.actual_m[instance];
}

HeightTable HeightTable::defaults() {
  HeightTable table;
  table.set("bystander", {1.65, {1.75, 1.76}});
  table.set("scooter", {1.12, {1.14, 1.25}});
  table.set("bicycle", {0.97, {0.95, 1.18}});
  table.set("car", {1.70, {1.56, 1.38}});
  table.set("vest", {0.63, {}});
  return table;
}

void RiskPolicy::validate() const {
  if (!(imminent_band_m > 0.0 && imminent_band_m < low_risk_band_m))
    fail(ErrorCode::domain, "risk bands must satisfy 0 < imminent < low-risk");
  if (!(d_min_m < d_max_m)) fail(ErrorCode::domain, "d_min must be below d_max");
  if (!(near_threshold_m < far_limit_m))
    fail(ErrorCode::domain, "near threshold must be below far limit");
  if (!(visible_fraction > 0.0 && visible_fraction <= 1.0))
    fail(ErrorCode::domain, "visible fraction must be in (0,1]");
}

PixelPoint frame_to_camera_coords(PixelPoint p, const CameraIntrinsics& intrinsics) {
  const double w = intrinsics.image_width_px;
  const double h = intrinsics.image_height_px;
  if (!(p.x >= 0.0 && p.x <= w && p.y >= 0.0 && p.y <= h))
    fail(ErrorCode::domain, "pixel outside the frame");
  return {p.x - w / 2.0, -(p.y - h / 2.0)};
}

PixelPoint camera_to_frame_coords(PixelPoint p, const CameraIntrinsics& intrinsics) {
  const double w = intrinsics.image_width_px;
  const double h = intrinsics.image_height_px;
  return {p.x + w / 2.0, h / 2.0 - p.y};
}

PixelPoint project_world_point(const WorldPoint& p, const DronePose& pose,
                               const CameraIntrinsics& intrinsics) {
  if (!(p.z_w > 0.0)) fail(ErrorCode::behind_camera, "point is not in front of the camera");
  const double f = intrinsics.focal_length_px;
  return {f * p.x_w / p.z_w, f * (p.y_w + pose.height_m) / p.z_w};
}

double distance_from_pixel_height(double pixel_height, double object_height_m,
                                  double focal_length_px) {
  if (!(pixel_height > 0.0)) fail(ErrorCode::degenerate, "zero-height bounding box");
  if (!(object_height_m > 0.0)) fail(ErrorCode::domain, "object height must be positive");
  return focal_length_px * object_height_m / pixel_height;
}

double estimate_distance_geometric(const BoundingBox& bbox, double object_height_m,
                                   const CameraIntrinsics& intrinsics) {
  if (bbox.resolution_w() != intrinsics.image_width_px ||
      bbox.resolution_h() != intrinsics.image_height_px)
    fail(ErrorCode::domain, "bounding box resolution differs from the camera resolution");
  return distance_from_pixel_height(bbox.height(), object_height_m,
                                    intrinsics.focal_length_px);
}

FocalEstimate estimate_focal_length(std::span<const FocalSample> samples) {
  if (samples.empty()) fail(ErrorCode::empty_input, "no focal-length samples");
  std::vector<double> focal;
  focal.reserve(samples.size());
  for (const auto& s : samples) {
    if (!(s.bbox.height() > 0.0)) fail(ErrorCode::degenerate, "zero-height bounding box");
    if (!(s.object_height_m > 0.0) || !(s.true_distance_m > 0.0))
      fail(ErrorCode::domain, "focal sample needs positive height and distance");
    focal.push_back(s.true_distance_m * s.bbox.height() / s.object_height_m);
  }
  const auto q = stats::quartiles(focal);
  return {q.q1, q.median, q.q3, samples.size()};
}

PositioningEnvelope::Point PositioningEnvelope::at(double distance_m) const noexcept {
  const double d = std::clamp(distance_m, d_near_, d_far_);
  return {tan_half_fov_ * d, d};
}

PositioningEnvelope positioning_envelope(double fov_deg, double vip_height_m,
                                         const RiskPolicy& policy) {
  if (!(fov_deg > 0.0 && fov_deg < 180.0)) fail(ErrorCode::domain, "fov must be in (0,180)");
  if (!(vip_height_m > 0.0)) fail(ErrorCode::domain, "VIP height must be positive");
  policy.validate();

  PositioningEnvelope env;
  env.tan_half_fov_ = std::tan(fov_deg * std::numbers::pi / 360.0);
  // Vertical extent covered by the full field of view at distance d is 2*t*d.
  const double fit_distance = policy.visible_fraction * vip_height_m / (2.0 * env.tan_half_fov_);
  env.d_far_ = policy.d_max_m;
  env.d_near_ = std::min(std::max(policy.d_min_m, fit_distance), env.d_far_);
  return env;
}

BoundingBox scale_bbox(const BoundingBox& bbox, int target_w, int target_h) {
  if (target_w <= 0 || target_h <= 0) fail(ErrorCode::domain, "target resolution must be positive");
  if (target_w == bbox.resolution_w() && target_h == bbox.resolution_h()) return bbox;
  const double sx = static_cast<double>(target_w) / bbox.resolution_w();
  const double sy = static_cast<double>(target_h) / bbox.resolution_h();
  // Full-width/height corners must land exactly on the target border.
  auto sx_of = [&](double x) {
    return x == bbox.resolution_w() ? double(target_w) : std::min(x * sx, double(target_w));
  };
  auto sy_of = [&](double y) {
    return y == bbox.resolution_h() ? double(target_h) : std::min(y * sy, double(target_h));
  };
  return BoundingBox::make(sx_of(bbox.x_min()), sy_of(bbox.y_min()), sx_of(bbox.x_max()),
                           sy_of(bbox.y_max()), target_w, target_h);
}

}  // namespace vipdist::geometry
