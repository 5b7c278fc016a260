#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

namespace survkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
// Row-major storage, for code handing contiguous rows to the kernels.
using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Thrown when an input violates a documented precondition or invariant.
class invariant_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Right-censored survival data: one row per individual, feature matrix
/// plus observed time and event indicator (1 = event, 0 = censored).
struct SurvivalDataset {
  Matrix features;                        // n x p
  Vector times;                           // n
  Vector events;                          // n, entries 0 or 1
  std::vector<std::string> feature_names; // p

  Eigen::Index num_individuals() const { return features.rows(); }
  Eigen::Index num_features() const { return features.cols(); }

  // Throws invariant_error on shape mismatch, non-finite/negative times,
  // non-binary events, n < 2 or p < 1.
  void validate() const;
};

/// Strictly increasing distinct times t_1 < ... < t_{m+1}. The final
/// interval is closed off by an extra knot at t_{m+1} + gamma.
struct TimeGrid {
  Vector times;
  double gamma = 1e-6;

  Eigen::Index size() const { return times.size(); }
  double min_time() const { return times(0); }
  double max_time() const { return times(times.size() - 1); }

  // Interval widths, size m+1; the last width equals gamma.
  Vector interval_widths() const;

  void validate() const;
};

enum class FunctionKind { cumulative_hazard, survival };

/// Piecewise-constant function on a time grid: values[i] is the level on
/// [t_i, t_{i+1}).
struct StepFunction {
  TimeGrid grid;
  Vector values;
  FunctionKind kind = FunctionKind::cumulative_hazard;

  // Constant level at time t (values clamped to the grid range).
  double at(double t) const;

  void validate() const;
};

/// Per-individual model outputs on a common time grid, one row per
/// individual. Rows are CHF (non-negative, non-decreasing) or SF
/// (in [0,1], non-increasing) depending on kind.
struct PredictionMatrix {
  TimeGrid grid;
  Matrix rows;
  FunctionKind kind = FunctionKind::cumulative_hazard;

  void validate() const;
};

} // namespace survkit
