#pragma once

// Pinhole-camera geometry for a drone-mounted monocular camera.
//
// Conventions: distances and heights are meters, image quantities are pixels.
// Detector frames have their origin at the top-left corner with y pointing
// down; the camera-centered image frame has its origin at the principal point
// with y pointing up.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vipdist::geometry {

struct CameraIntrinsics {
  double focal_length_px = 1592.0;
  int image_width_px = 1280;
  int image_height_px = 720;
  std::optional<double> fov_deg;  // informational only

  void validate() const;
};

struct PixelPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned box in the pixel frame it was produced in. Construct through
/// make() so the corner/resolution invariants always hold.
class BoundingBox {
 public:
  static BoundingBox make(double x_min, double y_min, double x_max, double y_max,
                          int resolution_w, int resolution_h);

  double x_min() const noexcept { return x_min_; }
  double y_min() const noexcept { return y_min_; }
  double x_max() const noexcept { return x_max_; }
  double y_max() const noexcept { return y_max_; }
  int resolution_w() const noexcept { return res_w_; }
  int resolution_h() const noexcept { return res_h_; }

  double width() const noexcept { return x_max_ - x_min_; }
  double height() const noexcept { return y_max_ - y_min_; }
  PixelPoint center() const noexcept {
    return {(x_min_ + x_max_) / 2.0, (y_min_ + y_max_) / 2.0};
  }

  bool operator==(const BoundingBox&) const = default;

 private:
  BoundingBox(double x0, double y0, double x1, double y1, int w, int h)
      : x_min_(x0), y_min_(y0), x_max_(x1), y_max_(y1), res_w_(w), res_h_(h) {}

  double x_min_, y_min_, x_max_, y_max_;
  int res_w_, res_h_;
};

struct Detection {
  BoundingBox bbox;
  std::string class_label;
  double confidence = 1.0;
  bool is_vip = false;
  std::string object_id;  // stable identity across frames; may be empty

  void validate() const;
};

/// Homogeneous world point (x, y, z, 1). The scale component is fixed.
struct WorldPoint {
  double x_w = 0.0;
  double y_w = 0.0;
  double z_w = 0.0;
  static constexpr double scale = 1.0;
};

struct DronePose {
  double height_m = 1.5;

  void validate() const;
};

/// Class heights used by the geometric estimator: the class-average height
/// (Geometric) and, optionally, measured heights of specific instances
/// (Geometric*).
class HeightTable {
 public:
  struct Entry {
    double expected_m = 0.0;
    std::vector<double> actual_m;
  };

  void set(const std::string& class_label, Entry entry);
  bool contains(const std::string& class_label) const;
  double expected(const std::string& class_label) const;
  double actual(const std::string& class_label, std::size_t instance) const;
  const std::map<std::string, Entry>& entries() const noexcept { return entries_; }

  /// bystander 1.65, scooter 1.12, bicycle 0.97, car 1.70 with the measured
  /// instance heights of the reference dataset, plus the 0.63 m VIP hazard
  /// vest.
  static HeightTable defaults();

 private:
  std::map<std::string, Entry> entries_;
};

/// Distance bands that drive obstacle risk and the drone's follow distance.
/// The lateral free-space width and the VIP walking speed that motivate
/// these bands do not enter any computation and are not represented here.
struct RiskPolicy {
  double imminent_band_m = 1.5;
  double low_risk_band_m = 5.5;
  double near_threshold_m = 4.0;
  double far_limit_m = 8.0;
  double d_min_m = 2.0;
  double d_max_m = 4.0;
  /// Fraction of the VIP (from the head down) that must stay in view at the
  /// closest follow distance.
  double visible_fraction = 2.0 / 3.0;

  void validate() const;
};

/// Detector frame -> camera-centered frame.
PixelPoint frame_to_camera_coords(PixelPoint p, const CameraIntrinsics& intrinsics);
/// Camera-centered frame -> detector frame.
PixelPoint camera_to_frame_coords(PixelPoint p, const CameraIntrinsics& intrinsics);

/// Projects a world point into the camera-centered frame. The camera sits
/// `pose.height_m` along +Y from the world origin, so the camera-frame height
/// of a point is y_w + h_d.
PixelPoint project_world_point(const WorldPoint& p, const DronePose& pose,
                               const CameraIntrinsics& intrinsics);

/// z = f * h_o / h_i for a pixel height h_i.
double distance_from_pixel_height(double pixel_height, double object_height_m,
                                  double focal_length_px);

/// Geometric distance estimate from a detector-resolution box. The box must
/// be expressed in the intrinsics' image resolution.
double estimate_distance_geometric(const BoundingBox& bbox, double object_height_m,
                                   const CameraIntrinsics& intrinsics);

struct FocalSample {
  BoundingBox bbox;
  double object_height_m = 0.0;
  double true_distance_m = 0.0;
};

struct FocalEstimate {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  std::size_t samples = 0;
};

/// Per sample f = d * h_i / h_o; returns the quartiles of that distribution.
/// The median is the calibration value.
FocalEstimate estimate_focal_length(std::span<const FocalSample> samples);

/// Follow-distance envelope: offsets h' and distances d related by
/// tan(fov/2) = h'/d, with d restricted to [d_near, d_far].
class PositioningEnvelope {
 public:
  struct Point {
    double offset_m = 0.0;    // h'
    double distance_m = 0.0;  // d
  };

  double tan_half_fov() const noexcept { return tan_half_fov_; }
  double d_near() const noexcept { return d_near_; }
  double d_far() const noexcept { return d_far_; }

  /// Clamps `distance_m` into the envelope and returns the matching offset.
  Point at(double distance_m) const noexcept;
  Point near_end() const noexcept { return at(d_near_); }
  Point far_end() const noexcept { return at(d_far_); }

 private:
  friend PositioningEnvelope positioning_envelope(double, double, const RiskPolicy&);
  double tan_half_fov_ = 1.0;
  double d_near_ = 0.0;
  double d_far_ = 0.0;
};

/// The near end is the larger of policy.d_min_m and the distance at which
/// visible_fraction of the VIP fits inside the vertical field of view; the
/// far end is policy.d_max_m.
PositioningEnvelope positioning_envelope(double fov_deg, double vip_height_m,
                                         const RiskPolicy& policy);

/// Rescales a box into another resolution (e.g. detector 1280x720 to depth
/// network 1024x320).
BoundingBox scale_bbox(const BoundingBox& bbox, int target_w, int target_h);

}  // namespace vipdist::geometry
