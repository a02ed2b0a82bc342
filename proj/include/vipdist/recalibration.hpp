#pragma once

// Online drift detection and recalibration of depth coefficients.
//
// A trusted VIP distance (normally the regression estimate) is compared with
// the depth-based VIP estimate over a sliding window sampled at 1 FPS. When
// the mean absolute difference exceeds tau the coefficients are refit from
// the offline calibration samples plus a random draw from the recent
// full-rate (score, trusted distance) buffer.

#include <cstdint>
#include <deque>
#include <random>
#include <vector>

#include "vipdist/calibration.hpp"

namespace vipdist::depth {

struct RecalibrationConfig {
  std::size_t window = 5;          // w: 1 FPS samples in the detection window
  double window_seconds = 5.0;     // w': seconds of full-rate history kept
  double fps = 30.0;
  double alpha = 0.75;             // weight of the offline samples
  double tau_m = 0.30;

  void validate() const;
  /// Capacity of the full-rate buffer, round(w' * fps).
  std::size_t train_capacity() const;
  /// Detection is suppressed until this many 1 FPS samples were seen.
  std::size_t warmup_samples() const { return std::max<std::size_t>(5, window); }
};

/// round-half-away-from-zero(((1 - alpha) / alpha) * n_original), at least 1.
std::size_t new_sample_count(double alpha, std::size_t n_original);

/// Mean |trusted - estimated| over the window is strictly greater than tau.
bool drift_exceeds(std::span<const double> trusted, std::span<const double> estimated,
                   double tau_m);

struct RecalibrationResult;

class RecalibrationState {
 public:
  RecalibrationState(const RecalibrationConfig& config, std::vector<CalibrationSample> original);

  /// Records one 1 FPS observation of the VIP: trusted and depth-based distance.
  /// Ignored while the drift flag is latched.
  void push_window_sample(double trusted_m, double estimated_m);
  /// Records one full-rate (score, trusted distance) pair. Ignored while latched.
  void push_train_sample(CalibrationSample sample);

  bool flag() const noexcept { return flag_; }
  std::size_t samples_seen() const noexcept { return samples_seen_; }
  std::size_t recalibrations() const noexcept { return recalibrations_; }

  const std::deque<double>& trusted() const noexcept { return trusted_; }
  const std::deque<double>& estimated() const noexcept { return estimated_; }
  const std::deque<CalibrationSample>& train() const noexcept { return train_; }
  const std::vector<CalibrationSample>& original() const noexcept { return original_; }

  std::size_t window() const noexcept { return window_; }
  std::size_t train_capacity() const noexcept { return train_capacity_; }

 private:
  friend bool detect_drift(RecalibrationState&, const RecalibrationConfig&);
  friend RecalibrationResult recalibrate(RecalibrationState&, const RecalibrationConfig&,
                                                std::mt19937_64&);

  std::size_t window_;
  std::size_t train_capacity_;
  std::deque<double> trusted_;    // R
  std::deque<double> estimated_;  // D
  std::deque<CalibrationSample> train_;  // T
  std::vector<CalibrationSample> original_;
  std::size_t samples_seen_ = 0;
  std::size_t recalibrations_ = 0;
  bool flag_ = false;
};

/// Latches the flag and returns true when the full window's mean absolute
/// error exceeds tau. Never fires during warm-up or on a partial window.
/// Once latched it keeps returning true until recalibrate() clears it.
bool detect_drift(RecalibrationState& state, const RecalibrationConfig& config);

struct RecalibrationResult {
  DepthCoefficients coeffs;
  std::size_t n_original = 0;
  std::size_t n_new = 0;
  std::vector<CalibrationSample> fit_samples;
};

/// Refits (m, s) on the offline samples plus n_new points drawn uniformly
/// without replacement from the full-rate buffer. Clears the flag and the
/// 1 FPS window. Throws ErrorCode::not_ready (flag stays latched) when the
/// buffer holds fewer than n_new points, and ErrorCode::domain when no drift
/// is latched.
RecalibrationResult recalibrate(RecalibrationState& state, const RecalibrationConfig& config,
                                std::mt19937_64& rng);

}  // namespace vipdist::depth
