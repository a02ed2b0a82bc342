#include "vipdist/regression.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <sstream>

namespace vipdist::regression {

namespace {

constexpr double kConditionLimit = 1e12;
constexpr std::array<const char*, 3> kColumnNames{"width", "height", "area"};

// Columns whose removal keeps the rank unchanged take part in a linear
// dependency.
std::string collinear_columns(const Eigen::MatrixXd& design, Eigen::Index rank) {
  std::ostringstream out;
  bool first = true;
  for (Eigen::Index j = 0; j < design.cols(); ++j) {
    Eigen::MatrixXd reduced(design.rows(), design.cols() - 1);
    for (Eigen::Index k = 0, col = 0; k < design.cols(); ++k)
      if (k != j) reduced.col(col++) = design.col(k);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(reduced);
    if (qr.rank() == rank) {
      out << (first ? "" : ", ") << kColumnNames[static_cast<std::size_t>(j)];
      first = false;
    }
  }
  return first ? std::string("all") : out.str();
}

}  // namespace

RegressionFeatures RegressionFeatures::make(double width_px, double height_px) {
  if (!(width_px > 0.0) || !(height_px > 0.0) || !std::isfinite(width_px) ||
      !std::isfinite(height_px))
    fail(ErrorCode::domain, "regression features need positive width and height");
  return RegressionFeatures(width_px, height_px);
}

RegressionFeatures RegressionFeatures::from_bbox(const geometry::BoundingBox& bbox, int native_w,
                                                 int native_h) {
  if (bbox.resolution_w() != native_w || bbox.resolution_h() != native_h)
    fail(ErrorCode::domain, "regression needs detector-native boxes (" +
                                std::to_string(native_w) + "x" + std::to_string(native_h) + ")");
  return make(bbox.width(), bbox.height());
}

void RegressionModel::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
    fail(ErrorCode::domain, "regression coefficients must be finite");
  if (mode == FeatureMode::two_feature && c != 0.0)
    fail(ErrorCode::domain, "two-feature model must have c = 0");
}

RegressionModel fit_regression(std::span<const LabeledFrame> frames, FeatureMode mode,
                               std::string vip_id, FitDiagnostics* diagnostics) {
  const Eigen::Index cols = mode == FeatureMode::three_feature ? 3 : 2;
  if (frames.size() < static_cast<std::size_t>(cols))
    fail(ErrorCode::empty_input, "regression fit needs at least " + std::to_string(cols) +
                                     " frames, got " + std::to_string(frames.size()));

  const auto rows = static_cast<Eigen::Index>(frames.size());
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd target(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& f = frames[static_cast<std::size_t>(i)];
    if (!(f.true_distance_m > 0.0)) fail(ErrorCode::domain, "labeled distance must be positive");
    design(i, 0) = f.features.width();
    design(i, 1) = f.features.height();
    if (cols == 3) design(i, 2) = f.features.area();
    target(i) = f.true_distance_m;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < cols)
    fail(ErrorCode::singular_fit,
         "rank-deficient regression design; collinear columns: " + collinear_columns(design, qr.rank()));

  const Eigen::MatrixXd normal = design.transpose() * design;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const double cond = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();

  Eigen::VectorXd coef;
  const bool rank_revealing = !(cond <= kConditionLimit);
  if (rank_revealing)
    coef = qr.solve(target);
  else
    coef = normal.ldlt().solve(design.transpose() * target);

  RegressionModel model;
  model.a = coef(0);
  model.b = coef(1);
  model.c = cols == 3 ? coef(2) : 0.0;
  model.mode = mode;
  model.vip_id = std::move(vip_id);

  if (diagnostics) {
    diagnostics->residual_norm = (design * coef - target).norm();
    diagnostics->samples = frames.size();
    diagnostics->condition_number = cond;
    diagnostics->used_rank_revealing = rank_revealing;
  }
  return model;
}

Estimate predict_distance(const RegressionModel& model, const RegressionFeatures& features) {
  double d = model.a * features.width() + model.b * features.height();
  if (model.mode == FeatureMode::three_feature) d += model.c * features.area();
  return {d, !(d > 0.0)};
}

}  // namespace vipdist::regression
