#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "vipdist/error.hpp"
#include "vipdist/regression.hpp"

using namespace vipdist;
using namespace vipdist::regression;
using doctest::Approx;

namespace {

double truth(double a, double b, double c, double w, double h) { return a * w + b * h + c * w * h; }

// Boxes consistent with the model: pick d and h, solve the model for w.
std::vector<LabeledFrame> frames_from(double a, double b, double c, int n, std::uint64_t seed,
                                      double noise = 0.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(1.5, 8.0), uh(600, 720);
  std::normal_distribution<double> nd(0.0, noise > 0 ? noise : 1.0);
  std::vector<LabeledFrame> out;
  while (static_cast<int>(out.size()) < n) {
    const double d = ud(rng), h = uh(rng);
    const double w = (d - b * h) / (a + c * h);
    if (!(w > 0)) continue;
    double label = truth(a, b, c, w, h);
    if (noise > 0) label += nd(rng);
    if (label <= 0) continue;
    out.push_back({RegressionFeatures::make(w, h), label});
  }
  return out;
}

}  // namespace

TEST_CASE("features") {
  const auto f = RegressionFeatures::make(3.0, 7.0);
  CHECK(f.area() == 21.0);
  CHECK_THROWS_AS(RegressionFeatures::make(0.0, 1.0), Error);
  const auto box = geometry::BoundingBox::make(10, 20, 110, 220, 1280, 720);
  CHECK(RegressionFeatures::from_bbox(box).width() == 100.0);
  CHECK(RegressionFeatures::from_bbox(box).height() == 200.0);
  CHECK_THROWS_AS(RegressionFeatures::from_bbox(geometry::BoundingBox::make(0, 0, 5, 5, 1024, 320)), Error);
}

TEST_CASE("prediction") {
  RegressionModel m{1, 1, 0, FeatureMode::three_feature, ""};
  auto e = predict_distance(m, RegressionFeatures::make(1, 2));
  CHECK(e.distance_m == 3.0);
  CHECK(!e.out_of_domain);
  RegressionModel m2{-2.0, -1.0, 0.004, FeatureMode::three_feature, ""};
  e = predict_distance(m2, RegressionFeatures::make(200, 400));
  CHECK(e.distance_m == Approx(-480.0).epsilon(1e-12));
  CHECK(e.out_of_domain);
  RegressionModel two{1, 1, 0.5, FeatureMode::two_feature, ""};
  CHECK_THROWS_AS(two.validate(), Error);
}

TEST_CASE("noiseless recovery") {
  const auto frames = frames_from(-2.0, -1.0, 0.004, 40, 1);
  FitDiagnostics diag;
  const auto m = fit_regression(frames, FeatureMode::three_feature, "P1", &diag);
  CHECK(m.a == Approx(-2.0).epsilon(1e-9));
  CHECK(m.b == Approx(-1.0).epsilon(1e-9));
  CHECK(m.c == Approx(0.004).epsilon(1e-9));
  CHECK(m.vip_id == "P1");
  CHECK(diag.samples == 40);
  CHECK(diag.residual_norm < 1e-7);
}

TEST_CASE("normal equations are satisfied") {
  const auto frames = frames_from(-2.42, -1.29, 0.0043, 200, 7, 0.05);
  for (auto mode : {FeatureMode::three_feature, FeatureMode::two_feature}) {
    const auto m = fit_regression(frames, mode);
    // Independent check: gradient of the squared loss at the solution, scaled per column.
    const int k = mode == FeatureMode::three_feature ? 3 : 2;
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(k), scale = Eigen::VectorXd::Zero(k);
    for (const auto& f : frames) {
      const double r = f.true_distance_m - predict_distance(m, f.features).distance_m;
      const double x[3] = {f.features.width(), f.features.height(), f.features.area()};
      for (int j = 0; j < k; ++j) {
        grad[j] += r * x[j];
        scale[j] += std::abs(r * x[j]);
      }
    }
    for (int j = 0; j < k; ++j) CHECK(std::abs(grad[j]) / scale[j] < 1e-9);
    if (mode == FeatureMode::two_feature) CHECK(m.c == 0.0);
  }
}

TEST_CASE("noise robustness") {
  const double sigma = 0.05;
  const auto frames = frames_from(-2.42, -1.29, 0.0043, 150, 9, sigma);
  const auto m = fit_regression(frames, FeatureMode::three_feature);
  const auto clean = frames_from(-2.42, -1.29, 0.0043, 150, 9);  // same boxes, noiseless labels
  for (const auto& f : clean)
    CHECK(std::abs(predict_distance(m, f.features).distance_m - f.true_distance_m) < 3 * sigma);
}

TEST_CASE("singular designs") {
  std::vector<LabeledFrame> same(10, LabeledFrame{RegressionFeatures::make(100, 200), 3.0});
  try {
    fit_regression(same, FeatureMode::three_feature);
    FAIL("expected singular fit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::singular_fit);
    CHECK(std::string(e.what()).find("width") != std::string::npos);
  }
  // Width proportional to height: the two-feature design has rank 1.
  std::vector<LabeledFrame> prop;
  for (double h : {100.0, 200.0, 300.0, 400.0}) prop.push_back({RegressionFeatures::make(h / 2, h), h / 100});
  CHECK_THROWS_AS(fit_regression(prop, FeatureMode::two_feature), Error);
  CHECK_THROWS_AS(fit_regression({}, FeatureMode::three_feature), Error);
  std::vector<LabeledFrame> bad{{RegressionFeatures::make(1, 2), -1.0}};
  CHECK_THROWS_AS(fit_regression(bad, FeatureMode::three_feature), Error);
}

TEST_CASE("two-feature mode with constant area") {
  // Constant area makes the third column a constant: both modes fit the data
  // exactly when the labels are generated without the area term.
  std::vector<LabeledFrame> frames;
  for (double w : {50.0, 80.0, 100.0, 125.0, 160.0, 200.0}) {
    const double h = 20000.0 / w;
    frames.push_back({RegressionFeatures::make(w, h), 0.01 * w + 0.004 * h});
  }
  const auto m2 = fit_regression(frames, FeatureMode::two_feature);
  const auto m3 = fit_regression(frames, FeatureMode::three_feature);
  for (const auto& f : frames) {
    CHECK(predict_distance(m2, f.features).distance_m == Approx(f.true_distance_m).epsilon(1e-9));
    CHECK(predict_distance(m3, f.features).distance_m == Approx(f.true_distance_m).epsilon(1e-9));
  }
}

TEST_CASE("ill-conditioned designs use the rank-revealing path") {
  std::vector<LabeledFrame> frames;
  for (int i = 0; i < 20; ++i) {
    const double h = 300.0 + i;
    const double w = 0.5 * h + 1e-7 * i * i;  // nearly collinear columns
    frames.push_back({RegressionFeatures::make(w, h), 0.01 * w - 0.004 * h + 1e-6 * w * h});
  }
  FitDiagnostics diag;
  try {
    fit_regression(frames, FeatureMode::three_feature, "", &diag);
    CHECK(diag.used_rank_revealing);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::singular_fit);
  }
}
