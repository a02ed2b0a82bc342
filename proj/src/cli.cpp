#include <CLI11.hpp>
#include <ostream>
#include <sstream>

#include "vipdist/commands.hpp"

namespace vipdist::cli {

namespace {

std::vector<depth::DistancePair> parse_pairs(const std::string& text) {
  // "2.5:4,2:3"
  std::vector<depth::DistancePair> pairs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) fail(ErrorCode::format, "pair '" + item + "' must look like d1:d2");
    try {
      pairs.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
    } catch (const std::logic_error&) {
      fail(ErrorCode::format, "pair '" + item + "' is not numeric");
    }
  }
  return pairs;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distance estimation for drone-guided navigation"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic annotated stream with depth maps");
  synth_cmd->add_option("--scene", synth.scene, "Scene description (JSON)")->required();
  synth_cmd->add_option("--out", synth.out_dir, "Output directory")->required();
  synth_cmd->add_option("--seed", synth.seed, "Noise seed");

  CalibrateArgs cal;
  std::string cal_norm = "lt", cal_pairs;
  auto* cal_cmd = app.add_subcommand("calibrate", "Fit a profile from labeled frames");
  cal_cmd->add_option("subject", cal.subject, "regression | depth | focal")
      ->required()
      ->check(CLI::IsMember({"regression", "depth", "focal"}));
  cal_cmd->add_option("--input", cal.input, "Annotated JSONL stream")->required();
  cal_cmd->add_option("--out", cal.out_profile, "Profile to write")->required();
  cal_cmd->add_option("--vip-id", cal.vip_id);
  cal_cmd->add_option("--mode", cal.mode, "three | two (regression)");
  cal_cmd->add_option("--camera", cal.camera);
  cal_cmd->add_option("--heights", cal.heights);
  cal_cmd->add_option("--norm-method", cal_norm);
  cal_cmd->add_option("--lt-percentile", cal.method.lt_percentile);
  cal_cmd->add_option("--diameter", cal.method.diameter_px);
  cal_cmd->add_option("--pairs", cal_pairs, "Candidate pairs, e.g. 2.5:4,2:3");
  cal_cmd->add_option("--unit", cal.unit, "m | cm");
  cal_cmd->add_option("--smooth-window", cal.smooth_window);

  EstimateArgs est;
  std::string estimator = "neo", est_norm, vip_truth = "regression";
  double tau_cm = 30.0;
  auto* est_cmd = app.add_subcommand("estimate", "Estimate distances for every detection");
  est_cmd->add_option("--input", est.input, "Annotated JSONL stream")->required();
  est_cmd->add_option("--out", est.output, "Estimates JSONL")->required();
  est_cmd->add_option("--estimator", estimator)
      ->check(CLI::IsMember({"regression", "geometric", "geometric_star", "neo", "neo_norc"}));
  est_cmd->add_option("--camera", est.camera);
  est_cmd->add_option("--heights", est.heights);
  est_cmd->add_option("--regression", est.regression_profile);
  est_cmd->add_option("--depth-profile", est.depth_profile);
  est_cmd->add_option("--norm-method", est_norm);
  est_cmd->add_option("--lt-percentile", est.lt_percentile);
  est_cmd->add_option("--smooth-window", est.smooth_window);
  est_cmd->add_option("--alpha", est.recal.alpha);
  est_cmd->add_option("--tau-cm", tau_cm);
  est_cmd->add_option("--window", est.recal.window);
  est_cmd->add_option("--window-seconds", est.recal.window_seconds);
  est_cmd->add_option("--fps", est.recal.fps);
  est_cmd->add_option("--vip-truth", vip_truth)->check(CLI::IsMember({"regression", "annotation"}));
  est_cmd->add_option("--seed", est.seed);

  EvaluateArgs ev;
  auto* ev_cmd = app.add_subcommand("evaluate", "Join estimates with ground truth and report errors");
  ev_cmd->add_option("--estimates", ev.estimates)->required();
  ev_cmd->add_option("--truth", ev.truth)->required();
  ev_cmd->add_option("--out", ev.out_dir)->required();
  ev_cmd->add_option("--threshold", ev.policy.near_threshold_m, "Near/far split in meters");

  FocalArgs focal;
  auto* focal_cmd = app.add_subcommand("focal", "Estimate the focal length from labeled frames");
  focal_cmd->add_option("--input", focal.input)->required();
  focal_cmd->add_option("--heights", focal.heights);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e_out;
    const int code = app.exit(e, o, e_out);
    out << o.str();
    err << e_out.str();
    return code == 0 ? 0 : 2;
  }

  try {
    if (*synth_cmd) return cmd_synth(synth, out, err);
    if (*cal_cmd) {
      cal.method.kind = depth::parse_normalization_kind(cal_norm);
      if (!cal_pairs.empty()) cal.pairs = parse_pairs(cal_pairs);
      cal.method.validate();
      return cmd_calibrate(cal, out, err);
    }
    if (*est_cmd) {
      est.estimator = parse_estimator(estimator);
      if (!est_norm.empty()) est.norm_kind = depth::parse_normalization_kind(est_norm);
      est.recal.tau_m = tau_cm / 100.0;
      est.recal.validate();
      est.vip_truth = vip_truth == "annotation" ? VipTruthSource::annotation : VipTruthSource::regression;
      return cmd_estimate(est, out, err);
    }
    if (*ev_cmd) return cmd_evaluate(ev, out, err);
    if (*focal_cmd) return cmd_focal(focal, out, err);
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return 2;
}

}  // namespace vipdist::cli
