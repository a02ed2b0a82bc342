#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scenes.hpp"
#include "vipdist/error.hpp"

using namespace vipdist;
using namespace vipdist::depth;
using doctest::Approx;

namespace {

const auto kPre = scenes::law(11.69, 1.242);

DepthCoefficients static_coeffs() {
  return fit_coefficients(scenes::offline_samples(kPre, 20));
}

}  // namespace

TEST_CASE("pipeline over a constant scene never recalibrates") {
  const synth::DriftSequence seq({scenes::vest(3.0)}, {}, {1.5}, kPre, kPre, 20.0, 100.0, 10.0, 5,
                                 scenes::small_maps());
  const auto coeffs = static_coeffs();
  RecalibrationConfig cfg;
  cfg.fps = 10.0;
  const auto run = scenes::replay(seq, coeffs, cfg, scenes::offline_samples(kPre, 20));
  CHECK(!run.first_detection_s);
  CHECK(run.recalibration_s.empty());
  CHECK(run.final_coeffs.m == coeffs.m);
  CHECK(run.final_coeffs.s == coeffs.s);
  for (const auto& [t, e] : run.vip_abs_error) CHECK(e < 1e-5);
}

TEST_CASE("full-rate buffer holds w' * fps entries") {
  PipelineOptions opts;
  RecalibrationConfig cfg;
  NeoPipeline pipe(static_coeffs(), opts, cfg, scenes::offline_samples(kPre, 20));
  const geometry::CameraIntrinsics cam;
  for (int i = 0; i < 30 * 7; ++i) {
    const auto f = synth::synth_frame({scenes::vest(3.0)}, cam, {1.5}, kPre, 0, scenes::small_maps());
    pipe.step({std::to_string(i), i / 30.0, f.detections, &f.depth_map}, Estimate{3.0, false});
    if (i + 1 == 150) CHECK(pipe.state()->train().size() == 150);
  }
  CHECK(pipe.state()->train().size() == 150);
  CHECK(pipe.state()->samples_seen() == 7);  // one per wall-clock second
}

TEST_CASE("frames without a usable VIP leave the buffers untouched") {
  PipelineOptions opts;
  RecalibrationConfig cfg;
  NeoPipeline pipe(static_coeffs(), opts, cfg, scenes::offline_samples(kPre, 20));
  const geometry::CameraIntrinsics cam;
  auto other = scenes::vest(5.0);
  other.is_vip = false;
  other.object_id = "b1";
  other.class_label = "bystander";
  other.lateral_offset_m = 1.0;
  const auto f = synth::synth_frame({other}, cam, {1.5}, kPre, 0, scenes::small_maps());
  auto step = pipe.step({"0", 0.0, f.detections, &f.depth_map}, Estimate{3.0, false});
  CHECK(!step.warnings.empty());
  CHECK(step.objects.size() == 1);
  CHECK(step.objects[0].estimate.distance_m == Approx(5.0).epsilon(1e-5));
  CHECK(pipe.state()->train().empty());

  // Out-of-domain trusted distances are skipped as well.
  const auto g = synth::synth_frame({scenes::vest(3.0)}, cam, {1.5}, kPre, 0, scenes::small_maps());
  step = pipe.step({"1", 1.0, g.detections, &g.depth_map}, Estimate{-0.4, true});
  CHECK(!step.warnings.empty());
  CHECK(pipe.state()->train().empty());
  CHECK(pipe.state()->samples_seen() == 0);

  step = pipe.step({"2", 1.5, g.detections, &g.depth_map}, std::nullopt);
  CHECK(pipe.state()->train().empty());
  CHECK(step.vip_distance_m);
}

TEST_CASE("identity law recovers every object exactly") {
  const auto identity = scenes::law(1.0, 0.0);
  auto near = scenes::vest(2.5);
  auto far = scenes::vest(6.0);
  far.is_vip = false;
  far.object_id = "p";
  far.lateral_offset_m = 1.5;
  const auto f = synth::synth_frame({near, far}, {}, {1.5}, identity, 0, scenes::small_maps());
  PipelineOptions opts;
  opts.recalibrate = false;
  NeoPipeline pipe(DepthCoefficients{}, opts, {}, {});
  const auto step = pipe.step({"0", 0.0, f.detections, &f.depth_map}, std::nullopt);
  REQUIRE(step.objects.size() == 2);
  CHECK(step.objects[0].estimate.distance_m == 2.5);
  CHECK(step.objects[1].estimate.distance_m == 6.0);
  CHECK(step.coeffs.provenance == Provenance::static_calibration);
}

TEST_CASE("timestamps must not go backwards") {
  PipelineOptions opts;
  opts.recalibrate = false;
  NeoPipeline pipe(DepthCoefficients{}, opts, {}, {});
  const auto f = synth::synth_frame({scenes::vest(3.0)}, {}, {1.5}, scenes::law(1, 0), 0, scenes::small_maps());
  pipe.step({"0", 2.0, f.detections, &f.depth_map}, std::nullopt);
  CHECK_THROWS_AS(pipe.step({"1", 1.0, f.detections, &f.depth_map}, std::nullopt), Error);
  CHECK_THROWS_AS(pipe.step({"2", 3.0, f.detections, nullptr}, std::nullopt), Error);
}

TEST_CASE("recalibrated coefficients are used for every object") {
  auto post = kPre;
  post.s_true += 1.0;
  auto vip = scenes::vest(3.0);
  auto other = scenes::vest(6.0);
  other.is_vip = false;
  other.object_id = "p";
  other.lateral_offset_m = 1.5;
  const synth::DriftSequence seq({vip, other}, {}, {1.5}, kPre, post, 10.0, 20.0, 10.0, 1,
                                 scenes::small_maps());
  RecalibrationConfig cfg;
  cfg.fps = 10.0;
  PipelineOptions opts;
  NeoPipeline pipe(static_coeffs(), opts, cfg, scenes::offline_samples(kPre, 20));
  bool saw = false;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto f = seq.frame(i);
    const auto step = pipe.step({f.frame_id, f.timestamp_s, f.detections, &f.depth_map}, Estimate{3.0, false});
    if (step.recalibration) {
      saw = true;
      CHECK(step.coeffs.provenance == Provenance::recalibrated);
      for (const auto& o : step.objects)
        CHECK(o.estimate.distance_m == Approx(step.coeffs.m * o.score + step.coeffs.s));
    }
  }
  CHECK(saw);
}

TEST_CASE("drift of one metre is detected within the window") {
  auto post = kPre;
  post.s_true += 1.0;
  const synth::DriftSequence seq({scenes::vest(3.0)}, {}, {1.5}, kPre, post, 20.0, 30.0, 30.0, 2,
                                 scenes::small_maps());
  const auto run = scenes::replay(seq, static_coeffs(), {}, scenes::offline_samples(kPre, 20));
  REQUIRE(run.first_detection_s);
  CHECK(*run.first_detection_s >= 20.0);
  CHECK(*run.first_detection_s <= 25.0);
  REQUIRE(!run.recalibration_s.empty());
  CHECK(run.fit_sizes.front() == 27);
}

TEST_CASE("drift sequence arguments") {
  CHECK_THROWS_AS(synth::DriftSequence({scenes::vest(3.0)}, {}, {1.5}, kPre, kPre, 3.0, 10.0, 30.0, 0), Error);
  CHECK_THROWS_AS(synth::DriftSequence({scenes::vest(3.0)}, {}, {1.5}, kPre, kPre, 10.0, 10.0, 30.0, 0), Error);
  const synth::DriftSequence seq({scenes::vest(3.0)}, {}, {1.5}, kPre, kPre, 10.0, 12.0, 30.0, 0);
  CHECK(seq.size() == 360);
  CHECK(seq.timestamp(30) == Approx(1.0));
}
