#pragma once

// Scale/shift calibration of normalized depth scores:  d = m * score + s.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vipdist/error.hpp"

namespace vipdist::depth {

enum class Provenance { static_calibration, recalibrated };

std::string_view to_string(Provenance p) noexcept;

struct DepthCoefficients {
  double m = 1.0;  // meters per score unit
  double s = 0.0;  // meters
  Provenance provenance = Provenance::static_calibration;
  std::optional<std::pair<double, double>> fitted_pair;  // calibration distances (m)
  std::optional<std::size_t> window_id;                  // recalibration event index

  void validate() const;
};

struct CalibrationSample {
  double normalized_score = 0.0;
  double true_distance_m = 0.0;
};

/// Least-squares line through the samples. Needs two distinct scores.
DepthCoefficients fit_coefficients(std::span<const CalibrationSample> samples);

/// m*score + s; non-positive distances are flagged out of domain.
Estimate estimate_distance_depth(double score, const DepthCoefficients& coeffs);

using DistancePair = std::pair<double, double>;

/// The six calibration pairs drawn from {2, 2.5, 3, 3.5, 4} m that are at
/// least 1 m apart.
std::vector<DistancePair> default_candidate_pairs();

struct PairEvaluation {
  DistancePair pair;
  DepthCoefficients coeffs;
  std::size_t frame_pairs = 0;
  double abs_median_error_sum = 0.0;     // sum over validation distances of |median signed error|
  double signed_median_error_sum = 0.0;  // |sum of signed medians|, tie-breaker
};

struct PairSelection {
  PairEvaluation best;
  std::vector<PairEvaluation> evaluated;  // in candidate order
};

/// For each candidate (d1, d2): frame k at d1 is paired with frame k at d2,
/// each frame pair gives an exact two-point (m, s), and the candidate's
/// coefficients are the medians of those. Candidates are ranked on the
/// validation set by the sum of |median signed error| per distance, then by
/// |sum of median signed errors|, then by candidate order.
PairSelection select_calibration_pair(const std::map<double, std::vector<double>>& videos,
                                      std::span<const DistancePair> candidates,
                                      std::span<const CalibrationSample> validation);

}  // namespace vipdist::depth
