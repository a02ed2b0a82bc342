#pragma once

#include <span>
#include <vector>

namespace vipdist::stats {

/// Quantile of `values` at fraction `p` in [0,1], linearly interpolating
/// between order statistics at position p*(n-1). Throws on empty input.
double quantile(std::span<const double> values, double p);

/// Same as quantile() but for data that is already sorted ascending.
double quantile_sorted(std::span<const double> sorted, double p);

double median(std::span<const double> values);

double mean(std::span<const double> values);

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

Quartiles quartiles(std::span<const double> values);

}  // namespace vipdist::stats
