#pragma once

// Error metrics. Signed error = true - predicted: positive values are
// underestimates (object judged nearer than it is), negative values are
// overestimates.

#include <array>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace vipdist::eval {

class ErrorRecord {
 public:
  ErrorRecord(std::string frame_id, std::string class_label, double true_distance_m,
              double predicted_distance_m);

  const std::string& frame_id() const noexcept { return frame_id_; }
  const std::string& class_label() const noexcept { return class_label_; }
  double true_distance_m() const noexcept { return true_m_; }
  double predicted_distance_m() const noexcept { return pred_m_; }
  double signed_error_m() const noexcept { return signed_m_; }

 private:
  std::string frame_id_;
  std::string class_label_;
  double true_m_;
  double pred_m_;
  double signed_m_;
};

struct MetricsSummary {
  double median = 0.0;  // of signed error
  double q1 = 0.0;
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;
  double median_abs = 0.0;  // median of |signed error|
  double mape = 0.0;        // percent
  std::size_t count = 0;
};

MetricsSummary summarize(std::span<const ErrorRecord> records);

enum class Quadrant {
  q1,  // true > T, predicted > T
  q2,  // true <= T, predicted <= T
  q3,  // true <= T, predicted > T
  q4,  // true > T, predicted <= T
};

Quadrant route(double true_m, double predicted_m, double threshold_m) noexcept;

struct QuadrantCell {
  double ase_over_m = 0.0;   // mean |error| over negative errors (magnitude)
  double ase_under_m = 0.0;  // mean error over positive errors
  std::size_t count_over = 0;
  std::size_t count_under = 0;
  std::size_t count_exact = 0;  // signed error exactly zero

  std::size_t total() const noexcept { return count_over + count_under + count_exact; }
};

struct QuadrantMatrix {
  double threshold_m = 4.0;
  std::array<QuadrantCell, 4> cells{};  // indexed by Quadrant

  const QuadrantCell& operator[](Quadrant q) const noexcept {
    return cells[static_cast<std::size_t>(q)];
  }
  std::size_t total() const noexcept;
};

QuadrantMatrix quadrant_matrix(std::span<const ErrorRecord> records, double near_threshold_m = 4.0);

// CSV outputs.
void write_records_csv(std::ostream& out, std::span<const ErrorRecord> records);
/// One row per group key (class, method, ...) plus the rows given in order.
void write_summary_csv(std::ostream& out,
                       const std::vector<std::pair<std::string, MetricsSummary>>& rows);
/// quadrant,bucket,ase_cm,count: 4 quadrants x {over, under}. ase_cm is a
/// positive magnitude; empty when the bucket holds no records.
void write_quadrant_csv(std::ostream& out, const QuadrantMatrix& matrix);

}  // namespace vipdist::eval
