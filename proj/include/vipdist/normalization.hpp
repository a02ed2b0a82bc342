#pragma once

// Collapsing a box's depth scores to one representative score.
//
// Pixel coverage: a box [x_min,x_max)x[y_min,y_max) in map resolution covers
// pixel columns floor(x_min) .. ceil(x_max)-1 and rows floor(y_min) ..
// ceil(y_max)-1, clipped to the map. Pixel (i,j) has its center at
// (i+0.5, j+0.5).

#include <cstddef>
#include <deque>
#include <span>
#include <string>
#include <string_view>

#include "vipdist/depth_map.hpp"
#include "vipdist/geometry.hpp"

namespace vipdist::depth {

enum class NormalizationKind {
  center,
  five_point_uniform,
  five_point_center_weighted,
  disc_center,
  center_ring,
  low_threshold,
  median,
  mean,
};

/// Which end of the raw score range is nearest to the camera.
enum class NearEnd { low_scores, high_scores };

struct NormalizationMethod {
  NormalizationKind kind = NormalizationKind::low_threshold;
  double diameter_px = 40.0;     // disc and ring
  double lt_percentile = 10.0;   // low threshold
  double center_weight = 0.5;    // five_point_center_weighted; quadrants share the rest
  NearEnd near_end = NearEnd::low_scores;

  void validate() const;
};

NormalizationKind parse_normalization_kind(std::string_view name);
std::string_view to_string(NormalizationKind kind) noexcept;

/// Representative score of the pixels inside `bbox`, which must be in the
/// map's resolution (see geometry::scale_bbox).
///
/// low_threshold averages the nearest ceil(P% of n) pixel scores, taken in
/// sorted order from the near end. five_point_* combine the box center and
/// the four quadrant centers. disc_center averages pixels whose centers lie
/// within diameter/2 of the box center; center_ring averages those within
/// half a pixel of that circle. Both are clipped to the box.
double normalize_region(const DepthMap& map, const geometry::BoundingBox& bbox,
                        const NormalizationMethod& method);

/// Mean of the available history.
double smooth_scores(std::span<const double> history);

/// Sliding-window average of one tracked object's normalized scores.
class ScoreSmoother {
 public:
  explicit ScoreSmoother(std::size_t window = 5);

  /// Adds a score and returns the mean of the last `window` scores.
  double push(double score);
  std::size_t size() const noexcept { return history_.size(); }

 private:
  std::size_t window_;
  std::deque<double> history_;
};

}  // namespace vipdist::depth
