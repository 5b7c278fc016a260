#include "survkit/simulate.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace survkit;

namespace {

RandomSurvivalConfig base_config() {
  RandomSurvivalConfig cfg;
  cfg.center = Vector::Zero(5);
  cfg.radius = 8.0;
  cfg.coefficients.resize(5);
  cfg.coefficients << 1e-6, 0.1, -0.15, 1e-6, 1e-6;
  cfg.lambda_weibull = 1e-5;
  cfg.v_weibull = 2.0;
  cfg.prob_event = 0.9;
  cfg.time_cap = 2000.0;
  cfg.seed = 123;
  return cfg;
}

// One-sample Kolmogorov-Smirnov statistic against U(0,1).
double ks_uniform(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(std::abs(samples[i] - lo),
                             std::abs(samples[i] - hi)));
  }
  return d;
}

} // namespace

TEST_CASE("config validation") {
  auto cfg = base_config();
  CHECK_NOTHROW(cfg.validate());

  auto bad = cfg;
  bad.radius = 0.0;
  CHECK_THROWS_AS(bad.validate(), invariant_error);
  bad = cfg;
  bad.coefficients = Vector::Zero(3);
  CHECK_THROWS_AS(bad.validate(), invariant_error);
  bad = cfg;
  bad.prob_event = 1.0;
  CHECK_THROWS_AS(bad.validate(), invariant_error);
  bad = cfg;
  bad.v_weibull = -1.0;
  CHECK_THROWS_AS(bad.validate(), invariant_error);
  bad = cfg;
  bad.time_cap = 0.0;
  CHECK_THROWS_AS(bad.validate(), invariant_error);
}

TEST_CASE("sample_ball stays inside the ball and is seeded") {
  auto cfg = base_config();
  cfg.center = Vector::Ones(5) * 2.0;
  const Matrix pts = sample_ball(cfg, 500);
  REQUIRE(pts.rows() == 500);
  for (Eigen::Index i = 0; i < 500; ++i)
    CHECK((pts.row(i).transpose() - cfg.center).norm() <= cfg.radius);
  CHECK(sample_ball(cfg, 500) == pts);
  cfg.seed = 124;
  CHECK(sample_ball(cfg, 500) != pts);
}

TEST_CASE("sample_ball radii follow the uniform-volume law") {
  auto cfg = base_config();
  const Eigen::Index n = 4000;
  const Matrix pts = sample_ball(cfg, n);
  // for the uniform ball, (||x - c|| / r)^p is U(0,1)
  std::vector<double> u(n);
  for (Eigen::Index i = 0; i < n; ++i)
    u[i] = std::pow(pts.row(i).norm() / cfg.radius, 5.0);
  // 1% critical value ~ 1.63 / sqrt(n)
  CHECK(ks_uniform(u) < 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("generate_times obeys the weibull scaling law") {
  auto cfg = base_config();
  cfg.time_cap.reset(); // uncapped so the scaling is exact
  const Matrix x1 = Matrix::Zero(200, 5);
  Matrix x2 = Matrix::Zero(200, 5);
  x2.col(1).setConstant(3.0); // eta jumps by 0.3
  const Vector t1 = generate_times(x1, cfg);
  const Vector t2 = generate_times(x2, cfg);
  // identical u-streams, so tau2/tau1 = exp(-(eta2-eta1)/v) exactly
  const double want = std::exp(-0.3 / cfg.v_weibull);
  for (Eigen::Index i = 0; i < 200; ++i)
    CHECK(t2(i) / t1(i) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("generate_times honors the cap and stays positive") {
  auto cfg = base_config();
  const Matrix x = sample_ball(cfg, 300);
  const Vector t = generate_times(x, cfg);
  for (Eigen::Index i = 0; i < 300; ++i) {
    CHECK(t(i) > 0.0);
    CHECK(t(i) <= 2000.0);
  }
  CHECK_THROWS_AS(generate_times(Matrix::Zero(5, 3), cfg), invariant_error);
}

TEST_CASE("uncapped zero-coefficient times are weibull distributed") {
  auto cfg = base_config();
  cfg.coefficients.setZero();
  cfg.time_cap.reset();
  const Eigen::Index n = 4000;
  const Vector t = generate_times(Matrix::Zero(n, 5), cfg);
  // U = exp(-lambda * tau^v) recovers the underlying uniform draw
  std::vector<double> u(n);
  for (Eigen::Index i = 0; i < n; ++i)
    u[i] = std::exp(-cfg.lambda_weibull * std::pow(t(i), cfg.v_weibull));
  CHECK(ks_uniform(u) < 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("random_survival_data") {
  auto cfg = base_config();
  const auto d = random_survival_data(cfg, 1000);

  SUBCASE("shape, names and validity") {
    CHECK(d.num_individuals() == 1000);
    CHECK(d.num_features() == 5);
    REQUIRE(d.feature_names.size() == 5);
    CHECK(d.feature_names[0] == "x1");
    CHECK(d.feature_names[4] == "x5");
    CHECK_NOTHROW(d.validate());
  }
  SUBCASE("event rate near prob_event") {
    const double rate = d.events.mean();
    // binomial 5-sigma band around 0.9 with n = 1000
    CHECK(std::abs(rate - 0.9) < 5.0 * std::sqrt(0.9 * 0.1 / 1000.0));
  }
  SUBCASE("bit reproducible") {
    const auto again = random_survival_data(cfg, 1000);
    CHECK(again.features == d.features);
    CHECK(again.times == d.times);
    CHECK(again.events == d.events);
  }
  SUBCASE("features in the ball") {
    for (Eigen::Index i = 0; i < d.num_individuals(); ++i)
      CHECK(d.features.row(i).norm() <= cfg.radius);
  }
}
