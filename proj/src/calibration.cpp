#include "vipdist/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vipdist/stats.hpp"

namespace vipdist::depth {

std::string_view to_string(Provenance p) noexcept {
  return p == Provenance::recalibrated ? "recalibrated" : "static";
}

void DepthCoefficients::validate() const {
  if (!std::isfinite(m) || m == 0.0) fail(ErrorCode::domain, "depth scale m must be finite and nonzero");
  if (!std::isfinite(s)) fail(ErrorCode::domain, "depth shift s must be finite");
}

DepthCoefficients fit_coefficients(std::span<const CalibrationSample> samples) {
  if (samples.size() < 2) fail(ErrorCode::empty_input, "depth fit needs at least two samples");
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& p : samples) {
    if (!(p.true_distance_m > 0.0)) fail(ErrorCode::domain, "calibration distance must be positive");
    mean_x += p.normalized_score;
    mean_y += p.true_distance_m;
  }
  const auto n = static_cast<double>(samples.size());
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : samples) {
    const double dx = p.normalized_score - mean_x;
    sxx += dx * dx;
    sxy += dx * (p.true_distance_m - mean_y);
  }
  if (!(sxx > 0.0)) fail(ErrorCode::singular_fit, "all calibration scores are identical");
  DepthCoefficients c;
  c.m = sxy / sxx;
  c.s = mean_y - c.m * mean_x;
  if (c.m == 0.0) fail(ErrorCode::singular_fit, "calibration scores carry no distance information");
  return c;
}

Estimate estimate_distance_depth(double score, const DepthCoefficients& coeffs) {
  const double d = coeffs.m * score + coeffs.s;
  return {d, !(d > 0.0)};
}

std::vector<DistancePair> default_candidate_pairs() {
  return {{2.0, 3.0}, {2.0, 3.5}, {2.0, 4.0}, {2.5, 3.5}, {2.5, 4.0}, {3.0, 4.0}};
}

namespace {

std::map<double, std::vector<double>> group_errors(std::span<const CalibrationSample> validation,
                                                   const DepthCoefficients& c) {
  std::map<double, std::vector<double>> by_distance;
  for (const auto& v : validation)
    by_distance[v.true_distance_m].push_back(v.true_distance_m -
                                             estimate_distance_depth(v.normalized_score, c).distance_m);
  return by_distance;
}

}  // namespace

PairSelection select_calibration_pair(const std::map<double, std::vector<double>>& videos,
                                      std::span<const DistancePair> candidates,
                                      std::span<const CalibrationSample> validation) {
  if (candidates.empty()) fail(ErrorCode::empty_input, "no candidate calibration pairs");
  if (validation.empty()) fail(ErrorCode::empty_input, "no validation samples");

  PairSelection out;
  for (const auto& pair : candidates) {
    auto near = videos.find(pair.first);
    auto far = videos.find(pair.second);
    if (near == videos.end() || far == videos.end() || near->second.empty() || far->second.empty()) {
      std::ostringstream msg;
      msg << "no frames for calibration pair (" << pair.first << ", " << pair.second << ")";
      fail(ErrorCode::missing_data, msg.str());
    }
    std::vector<double> ms, ss;
    const auto frames = std::min(near->second.size(), far->second.size());
    for (std::size_t k = 0; k < frames; ++k) {
      const double x1 = near->second[k], x2 = far->second[k];
      if (x1 == x2) continue;
      const double m = (pair.second - pair.first) / (x2 - x1);
      ms.push_back(m);
      ss.push_back(pair.first - m * x1);
    }
    if (ms.empty()) continue;

    PairEvaluation eval;
    eval.pair = pair;
    eval.frame_pairs = ms.size();
    eval.coeffs.m = stats::median(ms);
    eval.coeffs.s = stats::median(ss);
    eval.coeffs.fitted_pair = pair;
    if (!std::isfinite(eval.coeffs.m) || eval.coeffs.m == 0.0) continue;

    double signed_sum = 0.0;
    for (const auto& [distance, errors] : group_errors(validation, eval.coeffs)) {
      const double med = stats::median(errors);
      eval.abs_median_error_sum += std::abs(med);
      signed_sum += med;
    }
    eval.signed_median_error_sum = std::abs(signed_sum);
    out.evaluated.push_back(eval);
  }
  if (out.evaluated.empty())
    fail(ErrorCode::singular_fit, "no candidate pair produced a usable fit");

  out.best = *std::min_element(out.evaluated.begin(), out.evaluated.end(),
                               [](const PairEvaluation& a, const PairEvaluation& b) {
                                 if (a.abs_median_error_sum != b.abs_median_error_sum)
                                   return a.abs_median_error_sum < b.abs_median_error_sum;
                                 return a.signed_median_error_sum < b.signed_median_error_sum;
                               });
  return out;
}

}  // namespace vipdist::depth
