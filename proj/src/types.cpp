#include "survkit/types.hpp"

#include <cmath>

namespace survkit {

void SurvivalDataset::validate() const {
  const auto n = features.rows();
  const auto p = features.cols();
  if (p < 1)
    throw invariant_error("dataset needs at least one feature");
  if (n < 2)
    throw invariant_error("dataset needs at least two individuals");
  if (times.size() != n || events.size() != n)
    throw invariant_error("features/times/events length mismatch");
  if (!feature_names.empty() &&
      static_cast<Eigen::Index>(feature_names.size()) != p)
    throw invariant_error("feature_names length mismatch");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(times(i)) || times(i) < 0.0)
      throw invariant_error("times must be finite and non-negative");
    if (events(i) != 0.0 && events(i) != 1.0)
      throw invariant_error("event indicators must be 0 or 1");
  }
  if (!features.allFinite())
    throw invariant_error("features must be finite");
}

Vector TimeGrid::interval_widths() const {
  const auto m1 = times.size();
  Vector dt(m1);
  for (Eigen::Index i = 0; i + 1 < m1; ++i)
    dt(i) = times(i + 1) - times(i);
  dt(m1 - 1) = gamma;
  return dt;
}

void TimeGrid::validate() const {
  if (times.size() < 1)
    throw invariant_error("empty time grid");
  if (!(gamma > 0.0))
    throw invariant_error("gamma must be positive");
  for (Eigen::Index i = 0; i + 1 < times.size(); ++i)
    if (!(times(i) < times(i + 1)))
      throw invariant_error("time grid must be strictly increasing");
}

double StepFunction::at(double t) const {
  const auto& ts = grid.times;
  if (t <= ts(0))
    return values(0);
  Eigen::Index lo = 0, hi = ts.size() - 1;
  if (t >= ts(hi))
    return values(hi);
  // last index with ts[idx] <= t
  while (lo + 1 < hi) {
    const Eigen::Index mid = (lo + hi) / 2;
    (ts(mid) <= t ? lo : hi) = mid;
  }
  return values(lo);
}

void StepFunction::validate() const {
  grid.validate();
  if (values.size() != grid.size())
    throw invariant_error("step function values/grid length mismatch");
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = values(i);
    if (!std::isfinite(v))
      throw invariant_error("step function value not finite");
    if (kind == FunctionKind::cumulative_hazard) {
      if (v < 0.0)
        throw invariant_error("CHF value negative");
      if (i > 0 && v < values(i - 1))
        throw invariant_error("CHF not non-decreasing");
    } else {
      if (v < 0.0 || v > 1.0)
        throw invariant_error("survival value outside [0,1]");
      if (i > 0 && v > values(i - 1))
        throw invariant_error("survival function not non-increasing");
    }
  }
}

void PredictionMatrix::validate() const {
  grid.validate();
  if (rows.cols() != grid.size())
    throw invariant_error("prediction columns/grid length mismatch");
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    for (Eigen::Index c = 0; c < rows.cols(); ++c) {
      const double v = rows(r, c);
      if (!std::isfinite(v))
        throw invariant_error("invalid model output: non-finite entry in row " +
                              std::to_string(r));
      if (kind == FunctionKind::cumulative_hazard) {
        if (v < 0.0 || (c > 0 && v < rows(r, c - 1)))
          throw invariant_error("non-monotone CHF prediction in row " +
                                std::to_string(r));
      } else {
        if (v < 0.0 || v > 1.0 || (c > 0 && v > rows(r, c - 1)))
          throw invariant_error("non-monotone survival prediction in row " +
                                std::to_string(r));
      }
    }
  }
}

} // namespace survkit
