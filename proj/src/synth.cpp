#include "vipdist/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "vipdist/error.hpp"

namespace vipdist::synth {

using geometry::BoundingBox;

void SceneObject::validate() const {
  if (!(height_m > 0.0)) fail(ErrorCode::domain, "scene object height must be positive");
  if (!(distance_m > 0.0)) fail(ErrorCode::domain, "scene object distance must be positive");
  if (width_m < 0.0) fail(ErrorCode::domain, "scene object width must be non-negative");
  if (!(shape.near_fraction > 0.0 && shape.near_fraction <= 1.0))
    fail(ErrorCode::domain, "near fraction must be in (0,1]");
}

void DepthLawSpec::validate() const {
  if (!std::isfinite(m_true) || m_true == 0.0) fail(ErrorCode::domain, "depth law m must be nonzero");
  if (!(noise_sigma >= 0.0)) fail(ErrorCode::domain, "noise sigma must be non-negative");
  const bool low_near = m_true > 0.0;
  if (low_near != (orientation == ScoreOrientation::low_near))
    fail(ErrorCode::domain, "score orientation disagrees with the sign of m");
}

BoundingBox project_object(const SceneObject& object, const geometry::CameraIntrinsics& intrinsics,
                           const geometry::DronePose& pose, OutOfFrame policy) {
  object.validate();
  const double width = object.width_m > 0.0 ? object.width_m : 0.4 * object.height_m;
  // project_world_point maps world y to camera height y + h_d; the ground is
  // h_d below the camera, i.e. at world y = -2 h_d.
  const double ground_y = -2.0 * pose.height_m;
  const double bottom_y = ground_y + object.elevation_m;
  const double top_y = bottom_y + object.height_m;
  const double z = object.distance_m;
  const auto top_left = geometry::camera_to_frame_coords(
      geometry::project_world_point({object.lateral_offset_m - width / 2, top_y, z}, pose, intrinsics),
      intrinsics);
  const auto bottom_right = geometry::camera_to_frame_coords(
      geometry::project_world_point({object.lateral_offset_m + width / 2, bottom_y, z}, pose,
                                    intrinsics),
      intrinsics);

  const double w = intrinsics.image_width_px, h = intrinsics.image_height_px;
  double x0 = top_left.x, y0 = top_left.y, x1 = bottom_right.x, y1 = bottom_right.y;
  const bool inside = x0 >= 0 && y0 >= 0 && x1 <= w && y1 <= h;
  if (!inside) {
    if (policy == OutOfFrame::reject)
      fail(ErrorCode::domain, "object '" + object.class_label + "' projects outside the frame");
    x0 = std::clamp(x0, 0.0, w);
    x1 = std::clamp(x1, 0.0, w);
    y0 = std::clamp(y0, 0.0, h);
    y1 = std::clamp(y1, 0.0, h);
  }
  return BoundingBox::make(x0, y0, x1, y1, intrinsics.image_width_px, intrinsics.image_height_px);
}

SynthFrame synth_frame(const std::vector<SceneObject>& objects,
                       const geometry::CameraIntrinsics& intrinsics,
                       const geometry::DronePose& pose, const DepthLawSpec& law,
                       std::uint64_t seed, const SynthOptions& options) {
  intrinsics.validate();
  pose.validate();
  law.validate();

  SynthFrame out;
  out.depth_map = depth::DepthMap(options.depth_width, options.depth_height,
                                  static_cast<float>(law.score_for(options.background_distance_m)));

  std::vector<BoundingBox> boxes;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const auto& obj = objects[i];
    boxes.push_back(project_object(obj, intrinsics, pose, options.out_of_frame));
    geometry::Detection det{boxes.back(), obj.class_label, 1.0, obj.is_vip,
                            obj.object_id.empty() ? obj.class_label + "#" + std::to_string(i)
                                                  : obj.object_id};
    out.truth_m[det.object_id] = obj.distance_m;
    out.detections.push_back(std::move(det));
  }

  // Paint far to near so nearer objects occlude farther ones.
  std::vector<std::size_t> order(objects.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return objects[a].distance_m > objects[b].distance_m;
  });

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  auto& map = out.depth_map;
  for (std::size_t idx : order) {
    const auto& obj = objects[idx];
    const auto box = geometry::scale_bbox(boxes[idx], map.width(), map.height());
    const int x0 = std::clamp(static_cast<int>(std::floor(box.x_min())), 0, map.width());
    const int x1 = std::clamp(static_cast<int>(std::ceil(box.x_max())), 0, map.width());
    const int y0 = std::clamp(static_cast<int>(std::floor(box.y_min())), 0, map.height());
    const int y1 = std::clamp(static_cast<int>(std::ceil(box.y_max())), 0, map.height());
    const double split_y = box.y_max() - obj.shape.near_fraction * box.height();
    const double near_score = law.score_for(obj.distance_m);
    const double far_score = law.score_for(obj.distance_m + obj.shape.far_extra_m);
    for (int j = y0; j < y1; ++j) {
      const double base = (j + 0.5) >= split_y ? near_score : far_score;
      for (int i = x0; i < x1; ++i) {
        const double n = law.noise_sigma > 0.0 ? law.noise_sigma * noise(rng) : 0.0;
        map.at(i, j) = static_cast<float>(base + n);
      }
    }
  }
  return out;
}

std::uint64_t frame_seed(std::uint64_t stream_seed, std::size_t frame_index) noexcept {
  return stream_seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(frame_index) + 1);
}

DriftSequence::DriftSequence(std::vector<SceneObject> objects, geometry::CameraIntrinsics intrinsics,
                             geometry::DronePose pose, DepthLawSpec pre_law, DepthLawSpec post_law,
                             double switch_time_s, double duration_s, double fps,
                             std::uint64_t seed, SynthOptions options)
    : objects_(std::move(objects)),
      intrinsics_(intrinsics),
      pose_(pose),
      pre_(pre_law),
      post_(post_law),
      switch_time_s_(switch_time_s),
      duration_s_(duration_s),
      fps_(fps),
      seed_(seed),
      options_(options) {
  if (!(fps > 0.0)) fail(ErrorCode::domain, "fps must be positive");
  if (!(switch_time_s >= 5.0 && duration_s > switch_time_s))
    fail(ErrorCode::domain, "drift sequence needs duration > switch time >= warm-up (5 s)");
  pre_.validate();
  post_.validate();
  frames_ = static_cast<std::size_t>(std::llround(duration_s_ * fps_));
}

SynthFrame DriftSequence::frame(std::size_t index) const {
  const double t = timestamp(index);
  auto f = synth_frame(objects_, intrinsics_, pose_, law_at(t), frame_seed(seed_, index), options_);
  f.timestamp_s = t;
  f.frame_id = std::to_string(index);
  return f;
}

}  // namespace vipdist::synth
