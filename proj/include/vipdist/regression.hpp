#pragma once

// Linear VIP distance regression on bounding-box features:
//   d = a * width + b * height + c * width * height     (no intercept)

#include <span>
#include <string>

#include "vipdist/error.hpp"
#include "vipdist/geometry.hpp"

namespace vipdist::regression {

class RegressionFeatures {
 public:
  static RegressionFeatures make(double width_px, double height_px);

  /// Features of a detector-native box. Boxes from any other resolution are
  /// rejected; rescale them with geometry::scale_bbox first.
  static RegressionFeatures from_bbox(const geometry::BoundingBox& bbox, int native_w = 1280,
                                      int native_h = 720);

  double width() const noexcept { return w_; }
  double height() const noexcept { return h_; }
  double area() const noexcept { return area_; }

 private:
  RegressionFeatures(double w, double h) : w_(w), h_(h), area_(w * h) {}
  double w_, h_, area_;
};

enum class FeatureMode { three_feature, two_feature };

struct RegressionModel {
  double a = 0.0;  // m/px
  double b = 0.0;  // m/px
  double c = 0.0;  // m/px^2, always 0 in two-feature mode
  FeatureMode mode = FeatureMode::three_feature;
  std::string vip_id;

  void validate() const;
};

struct LabeledFrame {
  RegressionFeatures features;
  double true_distance_m = 0.0;
};

struct FitDiagnostics {
  double residual_norm = 0.0;
  std::size_t samples = 0;
  double condition_number = 0.0;  // of the normal matrix
  bool used_rank_revealing = false;
};

/// Ordinary least squares for the model coefficients. Normal equations are
/// used unless their condition number exceeds 1e12, in which case a
/// column-pivoted QR solve is used. Rank-deficient designs throw
/// ErrorCode::singular_fit naming the collinear columns.
RegressionModel fit_regression(std::span<const LabeledFrame> frames, FeatureMode mode,
                               std::string vip_id = {}, FitDiagnostics* diagnostics = nullptr);

/// a*w + b*h + c*A; non-positive results are flagged out of domain.
Estimate predict_distance(const RegressionModel& model, const RegressionFeatures& features);

}  // namespace vipdist::regression
