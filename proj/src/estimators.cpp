#include "survkit/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace survkit {

TimeGrid distinct_times(const SurvivalDataset& dataset, double gamma) {
  dataset.validate();
  if (!(gamma > 0.0))
    throw invariant_error("gamma must be positive");

  std::vector<double> ts(dataset.times.data(),
                         dataset.times.data() + dataset.times.size());
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  if (ts.size() < 2)
    throw invariant_error("degenerate time grid");

  TimeGrid grid;
  grid.times = Eigen::Map<const Vector>(ts.data(), ts.size());
  grid.gamma = gamma;
  return grid;
}

StepFunction nelson_aalen(const SurvivalDataset& dataset,
                          const TimeGrid& grid) {
  dataset.validate();
  grid.validate();

  const auto n = dataset.num_individuals();
  const auto m1 = grid.size();

  // Sort individuals by time once; walk the grid accumulating d_k/n_k.
  std::vector<Eigen::Index> order(n);
  for (Eigen::Index i = 0; i < n; ++i)
    order[i] = i;
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return dataset.times(a) < dataset.times(b);
  });

  StepFunction h0;
  h0.grid = grid;
  h0.kind = FunctionKind::cumulative_hazard;
  h0.values = Vector::Zero(m1);

  double cum = 0.0;
  Eigen::Index pos = 0; // first individual with time >= current grid time
  for (Eigen::Index i = 0; i < m1; ++i) {
    const double t = grid.times(i);
    while (pos < n && dataset.times(order[pos]) < t)
      ++pos;
    const Eigen::Index at_risk = n - pos;
    Eigen::Index events_here = 0;
    for (Eigen::Index j = pos; j < n && dataset.times(order[j]) == t; ++j)
      events_here += dataset.events(order[j]) == 1.0 ? 1 : 0;
    if (events_here > 0 && at_risk > 0)
      cum += static_cast<double>(events_here) / static_cast<double>(at_risk);
    h0.values(i) = cum;
  }
  return h0;
}

StepFunction chf_to_sf(const StepFunction& chf) {
  chf.validate();
  if (chf.kind != FunctionKind::cumulative_hazard)
    throw invariant_error("chf_to_sf expects a cumulative hazard input");
  StepFunction sf;
  sf.grid = chf.grid;
  sf.kind = FunctionKind::survival;
  sf.values = (-chf.values.array()).exp();
  return sf;
}

StepFunction sf_to_chf(const StepFunction& sf, double sf_clamp) {
  sf.validate();
  if (sf.kind != FunctionKind::survival)
    throw invariant_error("sf_to_chf expects a survival input");
  StepFunction chf;
  chf.grid = sf.grid;
  chf.kind = FunctionKind::cumulative_hazard;
  chf.values = -sf.values.array().max(sf_clamp).log();
  // -log can produce -0.0 at S = 1
  chf.values = chf.values.array().max(0.0);
  return chf;
}

namespace {

// One piecewise-linear row resampled onto the target knots; constant
// extrapolation beyond [src_t.front(), src_t.back()].
void interpolate_row(const Vector& src_t, const Eigen::RowVectorXd& src_v,
                     const Vector& dst_t, Eigen::RowVectorXd& dst_v) {
  const Eigen::Index q = src_t.size();
  for (Eigen::Index j = 0; j < dst_t.size(); ++j) {
    const double t = dst_t(j);
    if (t <= src_t(0)) {
      dst_v(j) = src_v(0);
    } else if (t >= src_t(q - 1)) {
      dst_v(j) = src_v(q - 1);
    } else {
      Eigen::Index lo = 0, hi = q - 1;
      while (lo + 1 < hi) {
        const Eigen::Index mid = (lo + hi) / 2;
        (src_t(mid) <= t ? lo : hi) = mid;
      }
      const double span = src_t(hi) - src_t(lo);
      const double w = (t - src_t(lo)) / span;
      dst_v(j) = src_v(lo) + w * (src_v(hi) - src_v(lo));
    }
  }
}

} // namespace

PredictionMatrix interpolate_to_grid(const PredictionMatrix& pred,
                                     const TimeGrid& target) {
  pred.validate();
  target.validate();
  if (pred.grid.size() < 2)
    throw invariant_error("prediction grid needs at least two points");

  PredictionMatrix out;
  out.grid = target;
  out.kind = pred.kind;
  out.rows.resize(pred.rows.rows(), target.size());
  Eigen::RowVectorXd dst(target.size());
  for (Eigen::Index r = 0; r < pred.rows.rows(); ++r) {
    Eigen::RowVectorXd src = pred.rows.row(r);
    interpolate_row(pred.grid.times, src, target.times, dst);
    out.rows.row(r) = dst;
  }
  return out;
}

double c_index(const Vector& risks, const Vector& times,
               const Vector& events) {
  const auto n = risks.size();
  if (times.size() != n || events.size() != n)
    throw invariant_error("c_index input length mismatch");

  long concordant = 0, discordant = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      // Comparable only when one individual's event is observed strictly
      // before the other's time; both-censored and tied-time pairs are
      // skipped, as are tied risk scores.
      Eigen::Index first, second;
      if (events(i) == 1.0 && times(i) < times(j)) {
        first = i;
        second = j;
      } else if (events(j) == 1.0 && times(j) < times(i)) {
        first = j;
        second = i;
      } else {
        continue;
      }
      if (risks(first) == risks(second))
        continue;
      if (risks(first) > risks(second))
        ++concordant;
      else
        ++discordant;
    }
  }
  const long total = concordant + discordant;
  if (total == 0)
    throw invariant_error("no comparable pairs");
  return static_cast<double>(concordant) / static_cast<double>(total);
}

} // namespace survkit
