#include "vipdist/stats.hpp"

#include <algorithm>
#include <cmath>

#include "vipdist/error.hpp"

namespace vipdist::stats {

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) fail(ErrorCode::empty_input, "quantile of empty data");
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::domain, "quantile fraction outside [0,1]");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return std::clamp(sorted[lo] + frac * (sorted[hi] - sorted[lo]), sorted[lo], sorted[hi]);
}

double quantile(std::span<const double> values, double p) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return quantile_sorted(sorted, p);
}

double median(std::span<const double> values) { return quantile(values, 0.5); }

double mean(std::span<const double> values) {
  if (values.empty()) fail(ErrorCode::empty_input, "mean of empty data");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

Quartiles quartiles(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return {quantile_sorted(sorted, 0.25), quantile_sorted(sorted, 0.5),
          quantile_sorted(sorted, 0.75)};
}

}  // namespace vipdist::stats
