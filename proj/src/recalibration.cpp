#include "vipdist/recalibration.hpp"

#include <algorithm>
#include <cmath>

namespace vipdist::depth {

void RecalibrationConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorCode::domain, "alpha must be in (0,1)");
  if (window < 1) fail(ErrorCode::domain, "detection window must be >= 1");
  if (!(tau_m > 0.0)) fail(ErrorCode::domain, "tau must be positive");
  if (!(fps > 0.0) || !(window_seconds > 0.0))
    fail(ErrorCode::domain, "fps and history length must be positive");
  if (train_capacity() < 1) fail(ErrorCode::domain, "full-rate history holds no frames");
}

std::size_t RecalibrationConfig::train_capacity() const {
  return static_cast<std::size_t>(std::llround(window_seconds * fps));
}

std::size_t new_sample_count(double alpha, std::size_t n_original) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorCode::domain, "alpha must be in (0,1)");
  const double raw = (1.0 - alpha) / alpha * static_cast<double>(n_original);
  // std::round rounds half away from zero.
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::round(raw)));
}

bool drift_exceeds(std::span<const double> trusted, std::span<const double> estimated,
                   double tau_m) {
  if (trusted.size() != estimated.size() || trusted.empty())
    fail(ErrorCode::domain, "drift window buffers must be non-empty and equally sized");
  double sum = 0.0;
  for (std::size_t i = 0; i < trusted.size(); ++i) sum += std::abs(trusted[i] - estimated[i]);
  return sum / static_cast<double>(trusted.size()) > tau_m;
}

RecalibrationState::RecalibrationState(const RecalibrationConfig& config,
                                       std::vector<CalibrationSample> original)
    : window_(config.window), train_capacity_(config.train_capacity()), original_(std::move(original)) {
  config.validate();
  if (original_.size() < 2)
    fail(ErrorCode::domain, "recalibration needs at least two offline calibration samples");
}

void RecalibrationState::push_window_sample(double trusted_m, double estimated_m) {
  if (flag_) return;
  trusted_.push_back(trusted_m);
  estimated_.push_back(estimated_m);
  if (trusted_.size() > window_) {
    trusted_.pop_front();
    estimated_.pop_front();
  }
  ++samples_seen_;
}

void RecalibrationState::push_train_sample(CalibrationSample sample) {
  if (flag_) return;
  train_.push_back(sample);
  if (train_.size() > train_capacity_) train_.pop_front();
}

bool detect_drift(RecalibrationState& state, const RecalibrationConfig& config) {
  if (state.flag_) return true;
  if (state.samples_seen_ < config.warmup_samples() || state.trusted_.size() < state.window_)
    return false;
  const std::vector<double> r(state.trusted_.begin(), state.trusted_.end());
  const std::vector<double> d(state.estimated_.begin(), state.estimated_.end());
  if (drift_exceeds(r, d, config.tau_m)) state.flag_ = true;
  return state.flag_;
}

RecalibrationResult recalibrate(RecalibrationState& state, const RecalibrationConfig& config,
                                std::mt19937_64& rng) {
  if (!state.flag_) fail(ErrorCode::domain, "recalibration requested without detected drift");
  RecalibrationResult out;
  out.n_original = state.original_.size();
  out.n_new = new_sample_count(config.alpha, out.n_original);
  if (state.train_.size() < out.n_new)
    fail(ErrorCode::not_ready, "recalibration needs " + std::to_string(out.n_new) +
                                   " recent samples, have " + std::to_string(state.train_.size()));

  out.fit_samples = state.original_;
  out.fit_samples.reserve(out.n_original + out.n_new);
  std::sample(state.train_.begin(), state.train_.end(), std::back_inserter(out.fit_samples),
              static_cast<std::ptrdiff_t>(out.n_new), rng);

  out.coeffs = fit_coefficients(out.fit_samples);
  out.coeffs.provenance = Provenance::recalibrated;
  out.coeffs.window_id = state.recalibrations_;

  ++state.recalibrations_;
  state.flag_ = false;
  state.trusted_.clear();
  state.estimated_.clear();
  return out;
}

}  // namespace vipdist::depth
