#pragma once

#include "survkit/types.hpp"

namespace survkit {

/// Sorted unique observation times from the dataset (events and censored
/// alike). Throws invariant_error("degenerate time grid") when fewer
/// than two distinct times exist.
TimeGrid distinct_times(const SurvivalDataset& dataset, double gamma = 1e-6);

/// Nelson-Aalen baseline cumulative hazard on the given grid:
/// H0(t_i) = sum_{t_k <= t_i} d_k / n_k with d_k the events and n_k the
/// risk-set size at t_k.
StepFunction nelson_aalen(const SurvivalDataset& dataset,
                          const TimeGrid& grid);

// Pointwise S = exp(-H) and H = -ln(S). Survival values are clamped to
// [sf_clamp, 1] before the logarithm.
StepFunction chf_to_sf(const StepFunction& chf);
StepFunction sf_to_chf(const StepFunction& sf, double sf_clamp = 1e-12);

/// Re-evaluates each prediction row on a new time grid: linear
/// interpolation inside the source grid, endpoint values held constant
/// outside it.
PredictionMatrix interpolate_to_grid(const PredictionMatrix& pred,
                                     const TimeGrid& target);

/// Concordance index over comparable pairs. Both-censored pairs and
/// censored-before-event pairs are skipped, as are pairs with tied risk
/// scores. Throws invariant_error("no comparable pairs") when the
/// denominator is empty.
double c_index(const Vector& risks, const Vector& times,
               const Vector& events);

} // namespace survkit
