#pragma once

// Per-frame depth-based distance estimation for every detection, with drift
// detection against a trusted VIP distance and on-line recalibration.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vipdist/calibration.hpp"
#include "vipdist/depth_map.hpp"
#include "vipdist/geometry.hpp"
#include "vipdist/normalization.hpp"
#include "vipdist/recalibration.hpp"

namespace vipdist::depth {

struct Frame {
  std::string frame_id;
  double timestamp_s = 0.0;
  std::vector<geometry::Detection> detections;
  const DepthMap* depth_map = nullptr;
};

struct ObjectDistance {
  std::string object_id;
  std::string class_label;
  bool is_vip = false;
  double score = 0.0;  // normalized (and smoothed) score fed to the calibration line
  Estimate estimate;
};

struct StepResult {
  std::vector<ObjectDistance> objects;
  std::optional<double> vip_distance_m;
  DepthCoefficients coeffs;  // coefficients used for `objects`
  bool drift_detected = false;
  std::optional<RecalibrationResult> recalibration;
  std::vector<std::string> warnings;
};

struct PipelineOptions {
  NormalizationMethod method;
  std::size_t smooth_window = 1;  // 1 disables temporal smoothing
  bool recalibrate = true;
  std::uint64_t seed = 0;
};

class NeoPipeline {
 public:
  /// `original` holds the offline calibration samples; it may be empty only
  /// when recalibration is disabled.
  NeoPipeline(DepthCoefficients coeffs, PipelineOptions options, RecalibrationConfig config,
              std::vector<CalibrationSample> original);

  /// Processes one frame. `vip_trusted` is the trusted VIP distance for this
  /// frame (absent or out-of-domain values leave the buffers untouched).
  /// Frames must arrive in non-decreasing timestamp order.
  StepResult step(const Frame& frame, std::optional<Estimate> vip_trusted);

  const DepthCoefficients& coefficients() const noexcept { return coeffs_; }
  const std::optional<RecalibrationState>& state() const noexcept { return state_; }

 private:
  DepthCoefficients coeffs_;
  PipelineOptions options_;
  RecalibrationConfig config_;
  std::optional<RecalibrationState> state_;
  std::map<std::string, ScoreSmoother> smoothers_;
  std::optional<long long> last_window_second_;
  std::optional<double> last_timestamp_;
  std::mt19937_64 rng_;
};

}  // namespace vipdist::depth
