#include "survkit/simulate.hpp"

#include <cmath>
#include <random>
#include <string>

namespace survkit {

void RandomSurvivalConfig::validate() const {
  if (center.size() < 1)
    throw invariant_error("center must have at least one coordinate");
  if (coefficients.size() != center.size())
    throw invariant_error("coefficients/center length mismatch");
  if (!(radius > 0.0))
    throw invariant_error("radius must be positive");
  if (!(lambda_weibull > 0.0) || !(v_weibull > 0.0))
    throw invariant_error("weibull parameters must be positive");
  if (!(prob_event > 0.0 && prob_event < 1.0))
    throw invariant_error("prob_event must be in (0,1)");
  if (time_cap && !(*time_cap > 0.0))
    throw invariant_error("time_cap must be positive");
}

namespace {

// uniform on (0,1): zero excluded so ln(u) stays finite
double open_uniform(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double u;
  do {
    u = dist(rng);
  } while (u == 0.0);
  return u;
}

Matrix sample_ball_impl(const RandomSurvivalConfig& config,
                        Eigen::Index num_points, std::mt19937_64& rng) {
  const Eigen::Index p = config.center.size();
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix out(num_points, p);
  for (Eigen::Index i = 0; i < num_points; ++i) {
    Vector dir(p);
    double norm_sq;
    do {
      for (Eigen::Index j = 0; j < p; ++j)
        dir(j) = gauss(rng);
      norm_sq = dir.squaredNorm();
    } while (norm_sq == 0.0);
    const double u = open_uniform(rng);
    const double r =
        config.radius * std::pow(u, 1.0 / static_cast<double>(p));
    out.row(i) =
        (config.center + (r / std::sqrt(norm_sq)) * dir).transpose();
  }
  return out;
}

Vector generate_times_impl(const Matrix& features,
                           const RandomSurvivalConfig& config,
                           std::mt19937_64& rng) {
  const Vector eta = features * config.coefficients;
  Vector times(features.rows());
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    const double u = open_uniform(rng);
    const double rate = config.lambda_weibull * std::exp(eta(i));
    double tau = std::pow(-std::log(u) / rate, 1.0 / config.v_weibull);
    if (config.time_cap && tau > *config.time_cap)
      tau = *config.time_cap;
    times(i) = tau;
  }
  return times;
}

} // namespace

Matrix sample_ball(const RandomSurvivalConfig& config,
                   Eigen::Index num_points) {
  config.validate();
  if (num_points < 1)
    throw invariant_error("num_points must be >= 1");
  std::mt19937_64 rng(config.seed ? *config.seed : std::random_device{}());
  return sample_ball_impl(config, num_points, rng);
}

Vector generate_times(const Matrix& features,
                      const RandomSurvivalConfig& config) {
  config.validate();
  if (features.cols() != config.center.size())
    throw invariant_error("feature dimension mismatch");
  std::mt19937_64 rng(config.seed ? *config.seed : std::random_device{}());
  return generate_times_impl(features, config, rng);
}

SurvivalDataset random_survival_data(const RandomSurvivalConfig& config,
                                     Eigen::Index num_points) {
  config.validate();
  if (num_points < 2)
    throw invariant_error("num_points must be >= 2");
  std::mt19937_64 rng(config.seed ? *config.seed : std::random_device{}());

  SurvivalDataset data;
  data.features = sample_ball_impl(config, num_points, rng);
  data.times = generate_times_impl(data.features, config, rng);
  data.events.resize(num_points);
  std::bernoulli_distribution event(config.prob_event);
  for (Eigen::Index i = 0; i < num_points; ++i)
    data.events(i) = event(rng) ? 1.0 : 0.0;
  data.feature_names.reserve(config.center.size());
  for (Eigen::Index j = 0; j < config.center.size(); ++j)
    data.feature_names.push_back("x" + std::to_string(j + 1));
  return data;
}

} // namespace survkit
