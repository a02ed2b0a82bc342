#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "vipdist/calibration.hpp"
#include "vipdist/error.hpp"

using namespace vipdist;
using namespace vipdist::depth;
using doctest::Approx;

TEST_CASE("two-point fit") {
  const std::vector<CalibrationSample> s{{0.1, 2.0}, {0.4, 4.0}};
  const auto c = fit_coefficients(s);
  CHECK(c.m == Approx(20.0 / 3.0).epsilon(1e-12));
  CHECK(c.s == Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(c.provenance == Provenance::static_calibration);
  for (const auto& p : s) CHECK(estimate_distance_depth(p.normalized_score, c).distance_m == Approx(p.true_distance_m).epsilon(1e-12));

  const std::vector<CalibrationSample> id{{1.0, 1.0}, {2.5, 2.5}, {4.0, 4.0}};
  const auto one = fit_coefficients(id);
  CHECK(one.m == Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(one.s) < 1e-15);
}

TEST_CASE("fit errors") {
  const std::vector<CalibrationSample> flat{{0.3, 2.0}, {0.3, 4.0}};
  try {
    fit_coefficients(flat);
    FAIL("expected singular fit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::singular_fit);
  }
  CHECK_THROWS_AS(fit_coefficients({}), Error);
  const std::vector<CalibrationSample> neg{{0.1, -2.0}, {0.4, 4.0}};
  CHECK_THROWS_AS(fit_coefficients(neg), Error);
  DepthCoefficients zero;
  zero.m = 0.0;
  CHECK_THROWS_AS(zero.validate(), Error);
}

TEST_CASE("least-squares gradient vanishes") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> us(0.0, 1.0), un(-0.2, 0.2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<CalibrationSample> s;
    for (int i = 0; i < 40; ++i) {
      const double x = us(rng);
      s.push_back({x, 1.5 + 7.0 * x + un(rng)});
    }
    const auto c = fit_coefficients(s);
    double gm = 0.0, gs = 0.0, scale = 0.0;
    for (const auto& p : s) {
      const double r = p.true_distance_m - c.m * p.normalized_score - c.s;
      gm += r * p.normalized_score;
      gs += r;
      scale += std::abs(p.true_distance_m);
    }
    CHECK(std::abs(gm) / scale < 1e-9);
    CHECK(std::abs(gs) / scale < 1e-9);
  }
}

TEST_CASE("estimates") {
  DepthCoefficients c;
  CHECK(estimate_distance_depth(2.5, c).distance_m == 2.5);
  c.m = 6.6667;
  c.s = 1.3333;
  CHECK(estimate_distance_depth(0.25, c).distance_m == Approx(3.0).epsilon(1e-4));
  CHECK(estimate_distance_depth(0.1, c).distance_m == Approx(2.0).epsilon(1e-4));
  CHECK(estimate_distance_depth(-1.0, c).out_of_domain);
  // Strictly increasing in the score for m > 0.
  double prev = -INFINITY;
  for (double x = -1.0; x <= 1.0; x += 0.01) {
    const double d = estimate_distance_depth(x, c).distance_m;
    CHECK(d > prev);
    prev = d;
  }
}

TEST_CASE("candidate pairs") {
  const auto pairs = default_candidate_pairs();
  CHECK(pairs.size() == 6);
  for (const auto& [a, b] : pairs) CHECK(b - a >= 1.0);
}

namespace {

// Per-frame scores at each distance from a line plus noise.
std::map<double, std::vector<double>> videos_from(double m, double s, double sigma, std::size_t frames,
                                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, sigma);
  std::map<double, std::vector<double>> v;
  for (double d : {2.0, 2.5, 3.0, 3.5, 4.0})
    for (std::size_t k = 0; k < frames; ++k) v[d].push_back((d - s) / m + nd(rng));
  return v;
}

std::vector<CalibrationSample> validation_of(const std::map<double, std::vector<double>>& v) {
  std::vector<CalibrationSample> out;
  for (const auto& [d, xs] : v)
    for (double x : xs) out.push_back({x, d});
  return out;
}

// Independent evaluation of one candidate: median of per-frame two-point
// fits, then the sum over distances of |median signed error|.
double exhaustive_score(const std::map<double, std::vector<double>>& v, std::pair<double, double> p,
                        const std::vector<CalibrationSample>& val) {
  std::vector<double> ms, ss;
  const auto& a = v.at(p.first);
  const auto& b = v.at(p.second);
  for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
    const double m = (p.second - p.first) / (b[k] - a[k]);
    ms.push_back(m);
    ss.push_back(p.first - m * a[k]);
  }
  const double m = oracle::quantile(ms, 0.5), s = oracle::quantile(ss, 0.5);
  std::map<double, std::vector<double>> errs;
  for (const auto& x : val) errs[x.true_distance_m].push_back(x.true_distance_m - (m * x.normalized_score + s));
  double sum = 0.0;
  for (const auto& [d, e] : errs) sum += std::abs(oracle::quantile(e, 0.5));
  return sum;
}

}  // namespace

TEST_CASE("pair selection agrees with exhaustive evaluation") {
  const auto candidates = default_candidate_pairs();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto v = videos_from(11.69, 1.242, 0.01, 15, seed);
    const auto val = validation_of(v);
    const auto sel = select_calibration_pair(v, candidates, val);
    REQUIRE(sel.evaluated.size() == 6);
    double best = INFINITY, worst = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const double score = exhaustive_score(v, candidates[i], val);
      CHECK(sel.evaluated[i].abs_median_error_sum == Approx(score).epsilon(1e-10));
      best = std::min(best, score);
      worst = std::max(worst, score);
    }
    CHECK(exhaustive_score(v, sel.best.pair, val) == Approx(best).epsilon(1e-10));
    CHECK(sel.best.abs_median_error_sum <= worst);
    CHECK(sel.best.coeffs.fitted_pair == sel.best.pair);
  }
}

TEST_CASE("pair selection edge cases") {
  const auto v = videos_from(2.0, 0.5, 0.0, 4, 1);
  const auto val = validation_of(v);
  const std::vector<DistancePair> one{{2.5, 4.0}};
  const auto sel = select_calibration_pair(v, one, val);
  CHECK(sel.best.pair == one[0]);
  CHECK(sel.best.coeffs.m == Approx(2.0).epsilon(1e-12));
  CHECK(sel.best.coeffs.s == Approx(0.5).epsilon(1e-12));

  try {
    select_calibration_pair(v, {}, val);
    FAIL("empty candidates");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::empty_input);
  }
  const std::vector<DistancePair> missing{{2.0, 5.0}};
  CHECK_THROWS_AS(select_calibration_pair(v, missing, val), Error);

  // Exact ties on the primary sum fall back to |sum of signed medians|, then order.
  const std::vector<DistancePair> all = default_candidate_pairs();
  const auto noiseless = select_calibration_pair(v, all, val);
  CHECK(noiseless.best.abs_median_error_sum < 1e-12);
}
