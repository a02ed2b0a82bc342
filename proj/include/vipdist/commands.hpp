#pragma once

// Subcommand implementations behind the vipdist command line. Each returns a
// process exit status; library errors are mapped by exit_code_for().

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vipdist/calibration.hpp"
#include "vipdist/geometry.hpp"
#include "vipdist/normalization.hpp"
#include "vipdist/recalibration.hpp"

namespace vipdist::cli {

namespace fs = std::filesystem;

enum class EstimatorKind { regression, geometric, geometric_star, neo, neo_norc };

EstimatorKind parse_estimator(const std::string& name);
std::string_view to_string(EstimatorKind kind) noexcept;

enum class VipTruthSource { regression, annotation };

struct SynthArgs {
  fs::path scene;
  fs::path out_dir;
  std::uint64_t seed = 0;
};

struct CalibrateArgs {
  std::string subject;  // regression | focal | depth
  fs::path input;
  fs::path out_profile;
  std::string vip_id;
  std::string mode = "three";
  std::optional<fs::path> heights;
  std::optional<fs::path> camera;
  depth::NormalizationMethod method;
  std::vector<depth::DistancePair> pairs;  // empty: default candidates present in the data
  std::string unit = "m";
  std::size_t smooth_window = 5;
};

struct EstimateArgs {
  fs::path input;
  fs::path output;
  EstimatorKind estimator = EstimatorKind::neo;
  std::optional<fs::path> camera;
  std::optional<fs::path> heights;
  std::optional<fs::path> regression_profile;
  std::optional<fs::path> depth_profile;
  std::optional<depth::NormalizationKind> norm_kind;  // default LT
  std::optional<double> lt_percentile;
  std::optional<std::size_t> smooth_window;
  depth::RecalibrationConfig recal;
  VipTruthSource vip_truth = VipTruthSource::regression;
  std::uint64_t seed = 0;
};

struct EvaluateArgs {
  fs::path estimates;
  fs::path truth;
  fs::path out_dir;
  geometry::RiskPolicy policy;
};

struct FocalArgs {
  fs::path input;
  std::optional<fs::path> heights;
};

int cmd_synth(const SynthArgs& args, std::ostream& out, std::ostream& err);
int cmd_calibrate(const CalibrateArgs& args, std::ostream& out, std::ostream& err);
int cmd_estimate(const EstimateArgs& args, std::ostream& out, std::ostream& err);
int cmd_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err);
int cmd_focal(const FocalArgs& args, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches. Usage errors exit with 2.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vipdist::cli
