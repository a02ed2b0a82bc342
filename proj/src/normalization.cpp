#include "vipdist/normalization.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "vipdist/error.hpp"
#include "vipdist/stats.hpp"

namespace vipdist::depth {

namespace {

struct PixelRange {
  int x0, x1, y0, y1;  // half-open

  bool empty() const noexcept { return x0 >= x1 || y0 >= y1; }
};

PixelRange covered_pixels(const DepthMap& map, const geometry::BoundingBox& bbox) {
  PixelRange r{static_cast<int>(std::floor(bbox.x_min())), static_cast<int>(std::ceil(bbox.x_max())),
               static_cast<int>(std::floor(bbox.y_min())), static_cast<int>(std::ceil(bbox.y_max()))};
  r.x0 = std::clamp(r.x0, 0, map.width());
  r.x1 = std::clamp(r.x1, 0, map.width());
  r.y0 = std::clamp(r.y0, 0, map.height());
  r.y1 = std::clamp(r.y1, 0, map.height());
  return r;
}

double sample(const DepthMap& map, const PixelRange& r, double x, double y) {
  const int i = std::clamp(static_cast<int>(std::floor(x)), r.x0, r.x1 - 1);
  const int j = std::clamp(static_cast<int>(std::floor(y)), r.y0, r.y1 - 1);
  return map.at(i, j);
}

std::vector<double> gather(const DepthMap& map, const PixelRange& r) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(r.x1 - r.x0) * static_cast<std::size_t>(r.y1 - r.y0));
  for (int j = r.y0; j < r.y1; ++j)
    for (int i = r.x0; i < r.x1; ++i) out.push_back(map.at(i, j));
  return out;
}

double plain_mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

template <typename Keep>
double circle_mean(const DepthMap& map, const PixelRange& r, geometry::PixelPoint c, Keep keep) {
  double sum = 0.0;
  std::size_t n = 0;
  double lo = INFINITY, hi = -INFINITY;
  for (int j = r.y0; j < r.y1; ++j) {
    for (int i = r.x0; i < r.x1; ++i) {
      const double dist = std::hypot(i + 0.5 - c.x, j + 0.5 - c.y);
      if (!keep(dist)) continue;
      const double v = map.at(i, j);
      sum += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      ++n;
    }
  }
  if (n == 0) fail(ErrorCode::degenerate, "disc/ring does not cover any pixel of the box");
  return std::clamp(sum / static_cast<double>(n), lo, hi);
}

double five_point(const DepthMap& map, const PixelRange& r, const geometry::BoundingBox& b,
                  double center_weight) {
  const double w = b.width();
  const double h = b.height();
  const double center = sample(map, r, b.x_min() + 0.5 * w, b.y_min() + 0.5 * h);
  const std::array<double, 4> quads{
      sample(map, r, b.x_min() + 0.25 * w, b.y_min() + 0.25 * h),
      sample(map, r, b.x_min() + 0.75 * w, b.y_min() + 0.25 * h),
      sample(map, r, b.x_min() + 0.25 * w, b.y_min() + 0.75 * h),
      sample(map, r, b.x_min() + 0.75 * w, b.y_min() + 0.75 * h)};
  double quad_sum = 0.0;
  double lo = center, hi = center;
  for (double q : quads) {
    quad_sum += q;
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  // The weighted mean is a convex combination; clamp away rounding excursions.
  const double value = center_weight * center + (1.0 - center_weight) * (quad_sum / 4.0);
  return std::clamp(value, lo, hi);
}

double low_threshold(std::vector<double> scores, double percentile, NearEnd near_end) {
  const auto n = scores.size();
  auto k = static_cast<std::size_t>(std::ceil(percentile / 100.0 * static_cast<double>(n)));
  k = std::clamp<std::size_t>(k, 1, n);
  const auto mid = scores.begin() + static_cast<std::ptrdiff_t>(k);
  if (near_end == NearEnd::low_scores)
    std::partial_sort(scores.begin(), mid, scores.end());
  else
    std::partial_sort(scores.begin(), mid, scores.end(), std::greater<>());
  double sum = 0.0;
  for (auto it = scores.begin(); it != mid; ++it) sum += *it;
  return sum / static_cast<double>(k);
}

}  // namespace

void NormalizationMethod::validate() const {
  if (!(lt_percentile > 0.0 && lt_percentile <= 100.0))
    fail(ErrorCode::domain, "LT percentile must be in (0,100]");
  if (!(diameter_px >= 1.0)) fail(ErrorCode::domain, "disc/ring diameter must be >= 1 px");
  if (!(center_weight >= 0.0 && center_weight <= 1.0))
    fail(ErrorCode::domain, "center weight must be in [0,1]");
}

NormalizationKind parse_normalization_kind(std::string_view name) {
  if (name == "center") return NormalizationKind::center;
  if (name == "five_point_uniform" || name == "5pt") return NormalizationKind::five_point_uniform;
  if (name == "five_point_center_weighted" || name == "5pt_weighted")
    return NormalizationKind::five_point_center_weighted;
  if (name == "disc" || name == "disc_center") return NormalizationKind::disc_center;
  if (name == "ring" || name == "center_ring") return NormalizationKind::center_ring;
  if (name == "lt" || name == "low_threshold") return NormalizationKind::low_threshold;
  if (name == "median") return NormalizationKind::median;
  if (name == "mean") return NormalizationKind::mean;
  fail(ErrorCode::format, "unknown normalization method '" + std::string(name) + "'");
}

std::string_view to_string(NormalizationKind kind) noexcept {
  switch (kind) {
    case NormalizationKind::center: return "center";
    case NormalizationKind::five_point_uniform: return "five_point_uniform";
    case NormalizationKind::five_point_center_weighted: return "five_point_center_weighted";
    case NormalizationKind::disc_center: return "disc_center";
    case NormalizationKind::center_ring: return "center_ring";
    case NormalizationKind::low_threshold: return "low_threshold";
    case NormalizationKind::median: return "median";
    case NormalizationKind::mean: return "mean";
  }
  return "unknown";
}

double normalize_region(const DepthMap& map, const geometry::BoundingBox& bbox,
                        const NormalizationMethod& method) {
  method.validate();
  if (bbox.resolution_w() != map.width() || bbox.resolution_h() != map.height())
    fail(ErrorCode::domain, "bounding box is not in depth-map resolution");
  const PixelRange r = covered_pixels(map, bbox);
  if (r.empty()) fail(ErrorCode::no_pixels, "bounding box covers no depth-map pixels");

  const double radius = method.diameter_px / 2.0;
  switch (method.kind) {
    case NormalizationKind::center: {
      const auto c = bbox.center();
      return sample(map, r, c.x, c.y);
    }
    case NormalizationKind::five_point_uniform:
      return five_point(map, r, bbox, 0.2);
    case NormalizationKind::five_point_center_weighted:
      return five_point(map, r, bbox, method.center_weight);
    case NormalizationKind::disc_center:
      return circle_mean(map, r, bbox.center(), [&](double d) { return d <= radius; });
    case NormalizationKind::center_ring:
      return circle_mean(map, r, bbox.center(),
                         [&](double d) { return std::abs(d - radius) <= 0.5; });
    case NormalizationKind::low_threshold:
      return low_threshold(gather(map, r), method.lt_percentile, method.near_end);
    case NormalizationKind::median:
      return stats::median(gather(map, r));
    case NormalizationKind::mean: {
      const auto v = gather(map, r);
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      return std::clamp(plain_mean(v), *lo, *hi);
    }
  }
  fail(ErrorCode::domain, "unknown normalization method");
}

double smooth_scores(std::span<const double> history) {
  if (history.empty()) fail(ErrorCode::empty_input, "no score history to smooth");
  return stats::mean(history);
}

ScoreSmoother::ScoreSmoother(std::size_t window) : window_(window) {
  if (window == 0) fail(ErrorCode::domain, "smoothing window must be >= 1");
}

double ScoreSmoother::push(double score) {
  history_.push_back(score);
  if (history_.size() > window_) history_.pop_front();
  double sum = 0.0;
  for (double v : history_) sum += v;
  return sum / static_cast<double>(history_.size());
}

}  // namespace vipdist::depth
