#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scenes.hpp"
#include "vipdist/error.hpp"

using namespace vipdist;
using namespace vipdist::synth;
using doctest::Approx;

namespace {

const geometry::CameraIntrinsics kCam;
const geometry::DronePose kPose{1.5};

double lt_score(const SynthFrame& f, std::size_t i, depth::NormalizationMethod m = {}) {
  const auto box = geometry::scale_bbox(f.detections[i].bbox, f.depth_map.width(), f.depth_map.height());
  return depth::normalize_region(f.depth_map, box, m);
}

}  // namespace

TEST_CASE("box height follows the pinhole model") {
  const auto f = synth_frame({scenes::vest(3.0)}, kCam, kPose, scenes::law(1, 0), 0);
  REQUIRE(f.detections.size() == 1);
  const auto& box = f.detections[0].bbox;
  CHECK(box.height() == Approx(334.32).epsilon(1e-12));
  CHECK(geometry::estimate_distance_geometric(box, 0.63, kCam) == Approx(3.0).epsilon(1e-12));
  CHECK(f.truth_m.at("vip") == 3.0);
  CHECK(f.detections[0].is_vip);
  CHECK(f.depth_map.width() == 1024);
  CHECK(f.depth_map.height() == 320);
}

TEST_CASE("identity law: flat object score equals its distance") {
  for (double d : {2.0, 3.7, 8.0}) {
    const auto f = synth_frame({scenes::vest(d)}, kCam, kPose, scenes::law(1, 0), 0);
    CHECK(lt_score(f, 0) == Approx(d).epsilon(1e-7));
  }
  const auto f = synth_frame({scenes::vest(3.0)}, kCam, kPose, scenes::law(1, 0), 0);
  CHECK(f.depth_map.at(0, 0) == 50.0f);  // background
}

TEST_CASE("two-distance calibration recovers the generating line") {
  const auto l = scenes::law(2.0, 0.5);  // scores exactly representable in float32
  std::vector<depth::CalibrationSample> s;
  for (double d : {2.5, 4.0}) {
    const auto f = synth_frame({scenes::vest(d)}, kCam, kPose, l, 0);
    s.push_back({lt_score(f, 0), d});
  }
  const auto c = depth::fit_coefficients(s);
  CHECK(std::abs(c.m - 2.0) < 1e-9);
  CHECK(std::abs(c.s - 0.5) < 1e-9);
}

TEST_CASE("noiseless generation round-trips through the depth pipeline") {
  const auto l = scenes::law(11.69, 1.242);
  std::vector<depth::CalibrationSample> s;
  for (double d : {2.5, 4.0}) s.push_back({lt_score(synth_frame({scenes::vest(d)}, kCam, kPose, l, 0), 0), d});
  const auto c = depth::fit_coefficients(s);

  std::vector<SceneObject> objs{scenes::vest(3.3)};
  SceneObject car;
  car.class_label = "car";
  car.object_id = "car";
  car.height_m = 1.7;
  car.width_m = 1.8;
  car.distance_m = 9.0;
  car.lateral_offset_m = -2.5;
  car.elevation_m = 1.0;
  objs.push_back(car);
  const auto f = synth_frame(objs, kCam, kPose, l, 0);
  for (std::size_t i = 0; i < objs.size(); ++i) {
    const double d = depth::estimate_distance_depth(lt_score(f, i), c).distance_m;
    CHECK(std::abs(d - f.truth_m.at(f.detections[i].object_id)) < 1e-6);
  }
}

TEST_CASE("low threshold wins on a near/far split object") {
  const auto l = scenes::law(1.0, 0.0);
  SceneObject bike;
  bike.class_label = "bicycle";
  bike.object_id = "bike";
  bike.height_m = 0.97;
  bike.width_m = 1.6;
  bike.distance_m = 3.0;
  bike.elevation_m = 1.0;
  bike.shape = {0.5, 3.0};  // lower half at 3 m, upper half at 6 m
  const auto f = synth_frame({bike}, kCam, kPose, l, 0);
  depth::NormalizationMethod lt;
  const double lt_err = std::abs(lt_score(f, 0, lt) - 3.0);
  CHECK(lt_err < 1e-6);
  for (auto k : {depth::NormalizationKind::center, depth::NormalizationKind::five_point_uniform,
                 depth::NormalizationKind::five_point_center_weighted, depth::NormalizationKind::disc_center,
                 depth::NormalizationKind::center_ring, depth::NormalizationKind::median,
                 depth::NormalizationKind::mean}) {
    depth::NormalizationMethod m;
    m.kind = k;
    CHECK(lt_err <= std::abs(lt_score(f, 0, m) - 3.0));
  }
}

TEST_CASE("nearer objects occlude farther ones") {
  auto a = scenes::vest(3.0);
  auto b = scenes::vest(6.0);
  b.object_id = "b";
  b.is_vip = false;
  const auto f = synth_frame({a, b}, kCam, kPose, scenes::law(1, 0), 0);
  const auto box = geometry::scale_bbox(f.detections[0].bbox, 1024, 320);
  const auto c = box.center();
  CHECK(f.depth_map.at(static_cast<int>(c.x), static_cast<int>(c.y)) == 3.0f);
}

TEST_CASE("out-of-frame policy") {
  auto low = scenes::vest(2.0);
  low.elevation_m = 0.8;  // bottom edge below the image
  CHECK_THROWS_AS(synth_frame({low}, kCam, kPose, scenes::law(1, 0), 0), Error);
  SynthOptions clip;
  clip.out_of_frame = OutOfFrame::clip;
  const auto f = synth_frame({low}, kCam, kPose, scenes::law(1, 0), 0, clip);
  CHECK(f.detections[0].bbox.y_max() == 720.0);
}

TEST_CASE("laws and objects are validated") {
  auto l = scenes::law(1, 0);
  l.orientation = ScoreOrientation::high_near;
  CHECK_THROWS_AS(l.validate(), Error);
  CHECK_THROWS_AS(scenes::law(0, 0).validate(), Error);
  auto bad = scenes::vest(3.0);
  bad.distance_m = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK_NOTHROW(scenes::law(-2, 10).validate());
}

TEST_CASE("generation is deterministic under a seed") {
  const auto l = scenes::law(11.69, 1.242, 0.01);
  const auto a = synth_frame({scenes::vest(3.0)}, kCam, kPose, l, 77);
  const auto b = synth_frame({scenes::vest(3.0)}, kCam, kPose, l, 77);
  const auto c = synth_frame({scenes::vest(3.0)}, kCam, kPose, l, 78);
  CHECK(depth::encode_neod(a.depth_map) == depth::encode_neod(b.depth_map));
  CHECK(depth::encode_neod(a.depth_map) != depth::encode_neod(c.depth_map));
  CHECK(frame_seed(1, 0) != frame_seed(1, 1));
}

TEST_CASE("drift sequence switches laws at the given time") {
  const auto pre = scenes::law(1, 0), post = scenes::law(1, -1);
  const DriftSequence seq({scenes::vest(3.0)}, kCam, kPose, pre, post, 6.0, 8.0, 10.0, 0,
                          scenes::small_maps());
  CHECK(seq.size() == 80);
  CHECK(lt_score(seq.frame(59), 0) == Approx(3.0).epsilon(1e-7));
  CHECK(lt_score(seq.frame(60), 0) == Approx(4.0).epsilon(1e-7));
  CHECK(seq.frame(60).timestamp_s == Approx(6.0));
  CHECK(seq.frame(5).frame_id == "5");
}
