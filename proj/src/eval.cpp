#include "vipdist/eval.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "vipdist/error.hpp"
#include "vipdist/stats.hpp"

namespace vipdist::eval {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

ErrorRecord::ErrorRecord(std::string frame_id, std::string class_label, double true_distance_m,
                         double predicted_distance_m)
    : frame_id_(std::move(frame_id)),
      class_label_(std::move(class_label)),
      true_m_(true_distance_m),
      pred_m_(predicted_distance_m),
      signed_m_(true_distance_m - predicted_distance_m) {
  if (!std::isfinite(true_m_) || !std::isfinite(pred_m_))
    fail(ErrorCode::domain, "error record distances must be finite");
}

MetricsSummary summarize(std::span<const ErrorRecord> records) {
  if (records.empty()) fail(ErrorCode::empty_input, "no records to summarize");
  std::vector<double> errors, abs_errors;
  errors.reserve(records.size());
  abs_errors.reserve(records.size());
  double ape = 0.0;
  for (const auto& r : records) {
    if (!(r.true_distance_m() > 0.0)) fail(ErrorCode::domain, "true distance must be positive");
    errors.push_back(r.signed_error_m());
    abs_errors.push_back(std::abs(r.signed_error_m()));
    ape += std::abs(r.signed_error_m()) / r.true_distance_m();
  }
  std::sort(errors.begin(), errors.end());
  std::sort(abs_errors.begin(), abs_errors.end());
  MetricsSummary s;
  s.count = records.size();
  s.q1 = stats::quantile_sorted(errors, 0.25);
  s.median = stats::quantile_sorted(errors, 0.5);
  s.q3 = stats::quantile_sorted(errors, 0.75);
  s.min = errors.front();
  s.max = errors.back();
  s.median_abs = stats::quantile_sorted(abs_errors, 0.5);
  s.mape = 100.0 * ape / static_cast<double>(records.size());
  return s;
}

Quadrant route(double true_m, double predicted_m, double threshold_m) noexcept {
  const bool true_near = true_m <= threshold_m;
  const bool pred_near = predicted_m <= threshold_m;
  if (true_near) return pred_near ? Quadrant::q2 : Quadrant::q3;
  return pred_near ? Quadrant::q4 : Quadrant::q1;
}

std::size_t QuadrantMatrix::total() const noexcept {
  std::size_t n = 0;
  for (const auto& c : cells) n += c.total();
  return n;
}

QuadrantMatrix quadrant_matrix(std::span<const ErrorRecord> records, double near_threshold_m) {
  if (records.empty()) fail(ErrorCode::empty_input, "no records for the quadrant matrix");
  QuadrantMatrix m;
  m.threshold_m = near_threshold_m;
  std::array<double, 4> over_sum{}, under_sum{};
  for (const auto& r : records) {
    const auto q = static_cast<std::size_t>(
        route(r.true_distance_m(), r.predicted_distance_m(), near_threshold_m));
    const double e = r.signed_error_m();
    auto& cell = m.cells[q];
    if (e > 0.0) {
      under_sum[q] += e;
      ++cell.count_under;
    } else if (e < 0.0) {
      over_sum[q] += -e;
      ++cell.count_over;
    } else {
      ++cell.count_exact;
    }
  }
  for (std::size_t q = 0; q < 4; ++q) {
    auto& cell = m.cells[q];
    if (cell.count_under) cell.ase_under_m = under_sum[q] / static_cast<double>(cell.count_under);
    if (cell.count_over) cell.ase_over_m = over_sum[q] / static_cast<double>(cell.count_over);
  }
  return m;
}

void write_records_csv(std::ostream& out, std::span<const ErrorRecord> records) {
  out << "frame_id,class,true_m,pred_m,signed_error_cm\n";
  for (const auto& r : records)
    out << r.frame_id() << ',' << r.class_label() << ',' << fmt(r.true_distance_m()) << ','
        << fmt(r.predicted_distance_m()) << ',' << fmt(100.0 * r.signed_error_m()) << '\n';
}

void write_summary_csv(std::ostream& out,
                       const std::vector<std::pair<std::string, MetricsSummary>>& rows) {
  out << "group,count,median_cm,q1_cm,q3_cm,min_cm,max_cm,median_abs_cm,mape_pct\n";
  for (const auto& [group, s] : rows)
    out << group << ',' << s.count << ',' << fmt(100 * s.median) << ',' << fmt(100 * s.q1) << ','
        << fmt(100 * s.q3) << ',' << fmt(100 * s.min) << ',' << fmt(100 * s.max) << ','
        << fmt(100 * s.median_abs) << ',' << fmt(s.mape) << '\n';
}

void write_quadrant_csv(std::ostream& out, const QuadrantMatrix& matrix) {
  static constexpr const char* names[] = {"Q1", "Q2", "Q3", "Q4"};
  out << "quadrant,bucket,ase_cm,count\n";
  for (std::size_t q = 0; q < 4; ++q) {
    const auto& c = matrix.cells[q];
    out << names[q] << ",over," << (c.count_over ? fmt(100 * c.ase_over_m) : "") << ','
        << c.count_over << '\n';
    out << names[q] << ",under," << (c.count_under ? fmt(100 * c.ase_under_m) : "") << ','
        << c.count_under << '\n';
  }
}

}  // namespace vipdist::eval
