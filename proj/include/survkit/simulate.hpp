#pragma once

#include "survkit/types.hpp"

#include <cstdint>
#include <optional>

namespace survkit {

/// Synthetic survival data: features uniform in a p-ball, Weibull event
/// times driven by a linear predictor, Bernoulli event indicators.
struct RandomSurvivalConfig {
  Vector center;
  double radius = 1.0;
  Vector coefficients;
  double prob_event = 0.9;
  double lambda_weibull = 1.0;
  double v_weibull = 1.0;
  std::optional<double> time_cap;
  std::optional<std::uint64_t> seed;

  void validate() const;
};

/// num_points rows uniform in the closed ball of the configured radius
/// around the center (Gaussian direction, radius scaled by U^{1/p}).
Matrix sample_ball(const RandomSurvivalConfig& config, Eigen::Index num_points);

/// Weibull times tau = (-ln(u) / (lambda exp(X beta)))^{1/v} with u
/// uniform on (0,1), capped at time_cap when configured.
Vector generate_times(const Matrix& features,
                      const RandomSurvivalConfig& config);

/// Full triplet (features, times, events) from one seeded generator
/// state; bit-reproducible for a fixed seed.
SurvivalDataset random_survival_data(const RandomSurvivalConfig& config,
                                     Eigen::Index num_points);

} // namespace survkit
