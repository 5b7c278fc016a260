#pragma once

#include "survkit/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace survkit {

/// Functional norm for the surrogate fit: l^k with k >= 1, or l-infinity.
struct Norm {
  double k = 2.0;
  bool is_inf = false;

  static Norm l2() { return {2.0, false}; }
  static Norm lk(double k) { return {k, false}; }
  static Norm linf() { return {0.0, true}; }

  bool operator==(const Norm&) const = default;
};

struct ExplainerConfig {
  int num_neighbors = 1000;
  // Kernel bandwidth; when unset, the Normal reference rule
  // [4/(n(p+2))]^{1/(p+4)} is applied with the training-set n and p.
  std::optional<double> bandwidth;
  Norm norm = Norm::l2();
  double gamma = 1e-6;
  double chf_clamp = 1e-12;
  std::optional<std::uint64_t> seed;
};

/// Perturbed copies of the instance under explanation with their kernel
/// weights (Gaussian density values, unnormalized).
struct NeighborSet {
  Matrix points;  // N x p
  Vector weights; // N
  Vector center;  // p
};

/// Everything the solver needs, assembled once per explanation:
/// log-predictions, log-baseline, squared H/ln(H) ratio weights and the
/// time-interval widths.
struct ObjectiveData {
  Vector log_baseline;        // m+1, ln H0(t_i); every neighbor shares it
  RowMatrix log_predictions;  // N x (m+1), ln H_i(e_k)
  RowMatrix sq_ratio_weights; // N x (m+1), (H/ln H)^2 after clamping
  Vector delta_t;          // m+1, last entry = gamma
  Vector neighbor_weights; // N
  int entries_clamped = 0;
};

struct SolveDiagnostics {
  std::string solver;
  int iterations = 0;
  int neighbors_clamped = 0;
  bool converged = true;
};

struct Explanation {
  Vector coefficients;
  double objective_value = 0.0;
  ExplainerConfig config_used;
  SolveDiagnostics diagnostics;
};

struct MonteCarloExplanation {
  Matrix per_repetition; // b x p
  Vector mean;           // p, column-wise average
  int num_repetitions = 0;
};

/// Black-box prediction interface: maps an N x p matrix of individuals
/// to a PredictionMatrix (CHF or SF, on the model's own output times).
using PredictFn = std::function<PredictionMatrix(const Matrix&)>;

/// Normal reference rule bandwidth [4/(n(p+2))]^{1/(p+4)}.
double default_bandwidth(Eigen::Index n, Eigen::Index p);

/// Draws N rows from N(center, b^2 diag(sigma_j^2)), sigma_j the sample
/// standard deviations of the dataset columns; the weight of each row is
/// that density evaluated at it. Throws on constant feature columns.
NeighborSet generate_neighbors(const Vector& center,
                               const SurvivalDataset& dataset,
                               const ExplainerConfig& config);

/// Runs the black box over the neighbors, converts survival-kind output
/// to CHF, interpolates onto `grid` when the model's output times differ,
/// and assembles logs, ratio weights and interval widths.
ObjectiveData build_objective(const NeighborSet& neighbors,
                              const PredictFn& predict,
                              const StepFunction& baseline,
                              const TimeGrid& grid,
                              const ExplainerConfig& config);

/// Minimizes the surrogate objective. The l2 norm is solved exactly via
/// weighted least-squares normal equations; other norms by subgradient
/// descent initialized at the l2 solution.
Explanation solve(const ObjectiveData& objective, const NeighborSet& neighbors,
                  const ExplainerConfig& config);

// Objective and (sub)gradient at an arbitrary beta; the iterative path
// of solve uses exactly these. Exposed for verification.
double objective_value(const ObjectiveData& objective,
                       const NeighborSet& neighbors, const Vector& beta,
                       const Norm& norm);
Vector objective_gradient(const ObjectiveData& objective,
                          const NeighborSet& neighbors, const Vector& beta,
                          const Norm& norm);

/// End-to-end single-instance explanation: distinct times, Nelson-Aalen
/// baseline, neighbor draw, objective assembly, solve. Deterministic for
/// a fixed config.seed.
Explanation explain_instance(const Vector& data_row, const PredictFn& predict,
                             const SurvivalDataset& dataset,
                             const ExplainerConfig& config);

/// explain_instance repeated with independent neighbor draws per
/// repetition (seeds derived from config.seed, repetition and row
/// index), one result per row of `data`.
std::vector<MonteCarloExplanation>
montecarlo_explanation(const Matrix& data, const PredictFn& predict,
                       const SurvivalDataset& dataset,
                       const ExplainerConfig& config, int num_repetitions);

/// Explanation JSON: {feature_names, coefficients, objective_value,
/// config, diagnostics}.
std::string explanation_to_json(const Explanation& explanation,
                                const std::vector<std::string>& feature_names);

// Deterministic per-repetition seed stream (splitmix-style mixing).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t row,
                          std::uint64_t repetition);

} // namespace survkit
