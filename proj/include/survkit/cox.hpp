#pragma once

#include "survkit/types.hpp"

#include <string>

namespace survkit {

struct CoxConvergence {
  int iterations = 0;
  double final_gradient_norm = 0.0;
};

/// Proportional hazards model h(x,t) = h0(t) exp(beta^T x) with a
/// Nelson-Aalen baseline cumulative hazard.
struct CoxModel {
  Vector coefficients;
  StepFunction baseline_chf;
  std::vector<std::string> feature_names;
  CoxConvergence convergence;
};

struct CoxFitOptions {
  double tolerance = 1e-9; // max-norm of the score vector
  int max_iter = 100;
  double divergence_bound = 50.0; // on the max-norm of beta
};

/// Maximizes the Cox partial likelihood by Newton-Raphson with
/// step-halving. Ties are handled with the Breslow approximation.
CoxModel fit_cox(const SurvivalDataset& dataset,
                 const CoxFitOptions& options = {});

/// Negative log partial likelihood with optional score/information
/// output; exposed for tests.
double cox_negative_log_likelihood(const SurvivalDataset& dataset,
                                   const Vector& beta,
                                   Vector* gradient = nullptr,
                                   Matrix* hessian = nullptr);

/// CHF predictions on the model's own grid (or any grid carrying the
/// baseline): row k, column i is H0(t_i) * exp(beta^T x_k).
PredictionMatrix predict_chf(const CoxModel& model, const Matrix& individuals);

/// JSON document {feature_names, coefficients, baseline:{times,values},
/// gamma}; decimal values survive a round trip bit-exactly.
std::string cox_to_json(const CoxModel& model);
CoxModel cox_from_json(const std::string& text);

} // namespace survkit
