#pragma once

// JSON calibration profiles. Every writer emits keys in a fixed order so a
// write -> read -> write cycle is byte-identical.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vipdist/calibration.hpp"
#include "vipdist/geometry.hpp"
#include "vipdist/regression.hpp"

namespace vipdist::profiles {

inline constexpr int kFormatVersion = 1;

struct DepthProfile {
  std::string vip_id;
  double m = 1.0;            // in `unit` per score unit
  double s = 0.0;            // in `unit`
  std::string unit = "m";    // "m" or "cm"
  std::optional<std::pair<double, double>> pair;  // meters
  double lt_percentile = 10.0;
  std::size_t smooth_window = 5;
  std::vector<depth::CalibrationSample> samples;  // offline samples, meters

  /// Coefficients in meters.
  depth::DepthCoefficients coefficients() const;
};

std::string dump_camera(const geometry::CameraIntrinsics& camera);
geometry::CameraIntrinsics parse_camera(const std::string& text);

std::string dump_heights(const geometry::HeightTable& table);
geometry::HeightTable parse_heights(const std::string& text);

std::string dump_regression(const regression::RegressionModel& model);
regression::RegressionModel parse_regression(const std::string& text);

std::string dump_depth(const DepthProfile& profile);
DepthProfile parse_depth(const std::string& text);

std::string read_text(const std::filesystem::path& path);
/// Writes via a temporary file and rename, so readers never see partial files.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

geometry::CameraIntrinsics load_camera(const std::filesystem::path& path);
geometry::HeightTable load_heights(const std::filesystem::path& path);
regression::RegressionModel load_regression(const std::filesystem::path& path);
DepthProfile load_depth(const std::filesystem::path& path);

}  // namespace vipdist::profiles
