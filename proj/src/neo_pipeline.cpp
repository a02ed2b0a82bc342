#include "vipdist/neo_pipeline.hpp"

#include <cmath>

namespace vipdist::depth {

NeoPipeline::NeoPipeline(DepthCoefficients coeffs, PipelineOptions options,
                         RecalibrationConfig config, std::vector<CalibrationSample> original)
    : coeffs_(coeffs), options_(options), config_(config), rng_(options.seed) {
  coeffs_.validate();
  options_.method.validate();
  if (options_.smooth_window == 0) fail(ErrorCode::domain, "smoothing window must be >= 1");
  if (options_.recalibrate) state_.emplace(config_, std::move(original));
}

StepResult NeoPipeline::step(const Frame& frame, std::optional<Estimate> vip_trusted) {
  if (!frame.depth_map) fail(ErrorCode::missing_data, "frame " + frame.frame_id + " has no depth map");
  if (last_timestamp_ && frame.timestamp_s < *last_timestamp_)
    fail(ErrorCode::domain, "frame timestamps must be non-decreasing");
  last_timestamp_ = frame.timestamp_s;

  const DepthMap& map = *frame.depth_map;
  StepResult out;

  std::size_t vip_count = 0;
  for (std::size_t i = 0; i < frame.detections.size(); ++i) {
    const auto& det = frame.detections[i];
    ObjectDistance obj;
    obj.object_id = det.object_id.empty() ? det.class_label + "#" + std::to_string(i) : det.object_id;
    obj.class_label = det.class_label;
    obj.is_vip = det.is_vip;
    const auto box = geometry::scale_bbox(det.bbox, map.width(), map.height());
    obj.score = normalize_region(map, box, options_.method);
    if (options_.smooth_window > 1) {
      const std::string key = det.is_vip ? std::string("vip") : det.object_id;
      if (!key.empty())
        obj.score = smoothers_.try_emplace(key, options_.smooth_window).first->second.push(obj.score);
    }
    vip_count += det.is_vip ? 1 : 0;
    out.objects.push_back(std::move(obj));
  }

  const ObjectDistance* vip = nullptr;
  if (vip_count == 1) {
    for (const auto& o : out.objects)
      if (o.is_vip) vip = &o;
  } else {
    out.warnings.push_back(vip_count == 0 ? "no VIP detection; recalibration buffers untouched"
                                          : "multiple VIP detections; recalibration buffers untouched");
  }

  if (state_ && vip) {
    if (!vip_trusted) {
      out.warnings.push_back("no trusted VIP distance; recalibration buffers untouched");
    } else if (vip_trusted->out_of_domain) {
      out.warnings.push_back("trusted VIP distance out of domain; frame excluded");
    } else {
      const double neo_vip = estimate_distance_depth(vip->score, coeffs_).distance_m;
      state_->push_train_sample({vip->score, vip_trusted->distance_m});
      const auto second = static_cast<long long>(std::floor(frame.timestamp_s));
      if (!last_window_second_ || second != *last_window_second_) {
        if (!state_->flag()) last_window_second_ = second;
        state_->push_window_sample(vip_trusted->distance_m, neo_vip);
      }
    }
  }

  if (state_ && detect_drift(*state_, config_)) {
    out.drift_detected = true;
    try {
      auto result = recalibrate(*state_, config_, rng_);
      coeffs_ = result.coeffs;
      out.recalibration = std::move(result);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::not_ready) throw;
      out.warnings.push_back(e.what());
    }
  }

  for (auto& o : out.objects) {
    o.estimate = estimate_distance_depth(o.score, coeffs_);
    if (o.is_vip && vip) out.vip_distance_m = o.estimate.distance_m;
  }
  out.coeffs = coeffs_;
  return out;
}

}  // namespace vipdist::depth
