#pragma once

// Forward generator for detections and depth maps from known scene geometry.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vipdist/depth_map.hpp"
#include "vipdist/geometry.hpp"

namespace vipdist::synth {

/// Depth layout inside an object's box: the lowest `near_fraction` of the box
/// rows sit at the object's distance, the rows above at distance + far_extra_m.
/// The default is a flat object.
struct DepthShape {
  double near_fraction = 1.0;
  double far_extra_m = 0.0;
};

struct SceneObject {
  std::string class_label;
  std::string object_id;
  double height_m = 1.0;
  double width_m = 0.0;  // 0 selects 0.4 * height_m
  double distance_m = 3.0;
  double lateral_offset_m = 0.0;
  double elevation_m = 0.0;  // bottom edge above the ground
  bool is_vip = false;
  DepthShape shape;

  void validate() const;
};

enum class ScoreOrientation { low_near, high_near };

/// Generating line: distance = m_true * score + s_true, so
/// score = (distance - s_true) / m_true, plus Gaussian score noise.
struct DepthLawSpec {
  double m_true = 1.0;
  double s_true = 0.0;
  double noise_sigma = 0.0;
  ScoreOrientation orientation = ScoreOrientation::low_near;

  void validate() const;
  double score_for(double distance_m) const noexcept { return (distance_m - s_true) / m_true; }
};

enum class OutOfFrame { reject, clip };

struct SynthOptions {
  int depth_width = 1024;
  int depth_height = 320;
  /// Distance whose score fills pixels outside every object.
  double background_distance_m = 50.0;
  OutOfFrame out_of_frame = OutOfFrame::reject;
};

struct SynthFrame {
  std::string frame_id;
  double timestamp_s = 0.0;
  std::vector<geometry::Detection> detections;  // detector resolution
  depth::DepthMap depth_map;                    // depth resolution
  std::map<std::string, double> truth_m;        // object id -> distance
};

/// Detector-resolution box of an object. The ground lies pose.height_m below
/// the camera.
geometry::BoundingBox project_object(const SceneObject& object,
                                     const geometry::CameraIntrinsics& intrinsics,
                                     const geometry::DronePose& pose, OutOfFrame policy);

SynthFrame synth_frame(const std::vector<SceneObject>& objects,
                       const geometry::CameraIntrinsics& intrinsics,
                       const geometry::DronePose& pose, const DepthLawSpec& law,
                       std::uint64_t seed, const SynthOptions& options = {});

/// Per-frame seed derived from a stream seed; streams generated from the same
/// seed reproduce byte-identical depth maps.
std::uint64_t frame_seed(std::uint64_t stream_seed, std::size_t frame_index) noexcept;

/// Replayable stream whose depth law switches at `switch_time_s`.
class DriftSequence {
 public:
  DriftSequence(std::vector<SceneObject> objects, geometry::CameraIntrinsics intrinsics,
                geometry::DronePose pose, DepthLawSpec pre_law, DepthLawSpec post_law,
                double switch_time_s, double duration_s, double fps, std::uint64_t seed,
                SynthOptions options = {});

  std::size_t size() const noexcept { return frames_; }
  double timestamp(std::size_t index) const noexcept { return static_cast<double>(index) / fps_; }
  const DepthLawSpec& law_at(double t) const noexcept { return t < switch_time_s_ ? pre_ : post_; }
  /// Frame `index`; identical for identical constructor arguments.
  SynthFrame frame(std::size_t index) const;

 private:
  std::vector<SceneObject> objects_;
  geometry::CameraIntrinsics intrinsics_;
  geometry::DronePose pose_;
  DepthLawSpec pre_, post_;
  double switch_time_s_, duration_s_, fps_;
  std::uint64_t seed_;
  SynthOptions options_;
  std::size_t frames_;
};

}  // namespace vipdist::synth
