#include "survkit/explainer.hpp"
#include "survkit/estimators.hpp"
#include "survkit/kernels.hpp"

#include <Eigen/LU>
#include <cmath>
#include <random>

#include <json.hpp>

namespace survkit {

double default_bandwidth(Eigen::Index n, Eigen::Index p) {
  if (n < 2 || p < 1)
    throw invariant_error("default_bandwidth needs n >= 2 and p >= 1");
  const double nn = static_cast<double>(n);
  const double pp = static_cast<double>(p);
  return std::pow(4.0 / (nn * (pp + 2.0)), 1.0 / (pp + 4.0));
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t row,
                          std::uint64_t repetition) {
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  std::uint64_t s = mix(base);
  s = mix(s ^ (0xA24BAED4963EE407ULL * (row + 1)));
  s = mix(s ^ (0x9FB21C651E98DF25ULL * (repetition + 1)));
  return s;
}

NeighborSet generate_neighbors(const Vector& center,
                               const SurvivalDataset& dataset,
                               const ExplainerConfig& config) {
  dataset.validate();
  const auto n = dataset.num_individuals();
  const auto p = dataset.num_features();
  if (center.size() != p)
    throw invariant_error("center dimension mismatch");
  if (config.num_neighbors < p + 2)
    throw invariant_error(
        "degenerate neighborhood: num_neighbors must be at least p + 2");

  // per-feature sampling standard deviations (n-1 denominator)
  Vector sigma(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double mean = dataset.features.col(j).mean();
    const double ss = (dataset.features.col(j).array() - mean).square().sum();
    sigma(j) = std::sqrt(ss / static_cast<double>(n - 1));
    if (sigma(j) == 0.0)
      throw invariant_error("constant feature; cannot perturb");
  }

  const double b = config.bandwidth ? *config.bandwidth
                                    : default_bandwidth(n, p);
  if (!(b > 0.0))
    throw invariant_error("bandwidth must be positive");

  std::mt19937_64 rng(config.seed ? *config.seed
                                  : std::random_device{}());
  std::normal_distribution<double> gauss(0.0, 1.0);

  const int N = config.num_neighbors;
  NeighborSet out;
  out.center = center;
  out.points.resize(N, p);
  out.weights.resize(N);

  const double log_norm_const =
      -0.5 * static_cast<double>(p) * std::log(2.0 * M_PI) -
      static_cast<double>(p) * std::log(b) - sigma.array().log().sum();

  for (int k = 0; k < N; ++k) {
    double sq_std_dist = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double z = gauss(rng);
      out.points(k, j) = center(j) + b * sigma(j) * z;
      sq_std_dist += z * z;
    }
    out.weights(k) = std::exp(log_norm_const - 0.5 * sq_std_dist);
  }
  return out;
}

ObjectiveData build_objective(const NeighborSet& neighbors,
                              const PredictFn& predict,
                              const StepFunction& baseline,
                              const TimeGrid& grid,
                              const ExplainerConfig& config) {
  baseline.validate();
  grid.validate();
  if (baseline.grid.size() != grid.size() ||
      baseline.grid.times != grid.times)
    throw invariant_error("baseline not on the explanation grid");

  PredictionMatrix pm = predict(neighbors.points);
  pm.validate();

  if (pm.kind == FunctionKind::survival) {
    Matrix chf = -pm.rows.array().max(config.chf_clamp).log();
    pm.rows = chf.array().max(0.0);
    pm.kind = FunctionKind::cumulative_hazard;
  }
  if (pm.grid.size() != grid.size() || pm.grid.times != grid.times)
    pm = interpolate_to_grid(pm, grid);

  const Eigen::Index N = pm.rows.rows();
  const Eigen::Index m1 = grid.size();
  const double eps = config.chf_clamp;

  ObjectiveData obj;
  obj.delta_t = grid.interval_widths();
  obj.neighbor_weights = neighbors.weights;
  obj.log_baseline.resize(m1);
  for (Eigen::Index i = 0; i < m1; ++i) {
    double h0 = baseline.values(i);
    if (h0 < eps) {
      h0 = eps;
      ++obj.entries_clamped;
    }
    obj.log_baseline(i) = std::log(h0);
  }

  obj.log_predictions.resize(N, m1);
  obj.sq_ratio_weights.resize(N, m1);
  RowMatrix clamped_h(N, m1);
  RowMatrix clamped_log(N, m1);
  for (Eigen::Index k = 0; k < N; ++k) {
    for (Eigen::Index i = 0; i < m1; ++i) {
      double h = pm.rows(k, i);
      if (h < eps) {
        h = eps;
        ++obj.entries_clamped;
      }
      const double lh = std::log(h);
      obj.log_predictions(k, i) = lh;
      clamped_h(k, i) = h;
      // u = H/ln(H) is singular at H = 1; floor |ln H| keeping the sign
      double lh_c = lh;
      if (std::abs(lh_c) < eps) {
        lh_c = lh_c < 0.0 ? -eps : eps;
        ++obj.entries_clamped;
      }
      clamped_log(k, i) = lh_c;
    }
    kernels::active().sq_ratio(clamped_h.row(k).data(),
                               clamped_log.row(k).data(),
                               obj.sq_ratio_weights.row(k).data(),
                               static_cast<std::size_t>(m1));
  }
  return obj;
}

namespace {

// Residual weights c_{ki} = M2_{ki} * dt_i per row (neighbor weight w_k
// applied separately).
RowMatrix residual_weights(const ObjectiveData& obj) {
  return obj.sq_ratio_weights.array().rowwise() *
         obj.delta_t.transpose().array();
}

// Targets y_{ki} = ln H_i(e_k) - ln H0(t_i).
RowMatrix residual_targets(const ObjectiveData& obj) {
  return obj.log_predictions.array().rowwise() -
         obj.log_baseline.transpose().array();
}

} // namespace

double objective_value(const ObjectiveData& obj, const NeighborSet& neighbors,
                       const Vector& beta, const Norm& norm) {
  const RowMatrix C = residual_weights(obj);
  const RowMatrix Y = residual_targets(obj);
  const Vector shifts = neighbors.points * beta;
  const Eigen::Index N = C.rows();
  const auto m1 = static_cast<std::size_t>(C.cols());

  if (!norm.is_inf && norm.k == 2.0) {
    double total = 0.0;
    for (Eigen::Index k = 0; k < N; ++k)
      total += obj.neighbor_weights(k) *
               kernels::active().weighted_sq_residual(
                   C.row(k).data(), Y.row(k).data(), shifts(k), m1);
    return total;
  }

  double total = norm.is_inf ? 0.0 : 0.0;
  for (Eigen::Index k = 0; k < N; ++k) {
    const double w = obj.neighbor_weights(k);
    for (Eigen::Index i = 0; i < C.cols(); ++i) {
      const double scaled =
          std::sqrt(w * C(k, i)) * std::abs(Y(k, i) - shifts(k));
      if (norm.is_inf)
        total = std::max(total, scaled);
      else
        total += std::pow(scaled, norm.k);
    }
  }
  return total;
}

Vector objective_gradient(const ObjectiveData& obj,
                          const NeighborSet& neighbors, const Vector& beta,
                          const Norm& norm) {
  const RowMatrix C = residual_weights(obj);
  const RowMatrix Y = residual_targets(obj);
  const Vector shifts = neighbors.points * beta;
  const Eigen::Index N = C.rows();
  const Eigen::Index p = beta.size();
  Vector grad = Vector::Zero(p);

  if (norm.is_inf) {
    // subgradient at the largest scaled residual
    double best = -1.0;
    Eigen::Index bk = 0, bi = 0;
    for (Eigen::Index k = 0; k < N; ++k)
      for (Eigen::Index i = 0; i < C.cols(); ++i) {
        const double scaled = std::sqrt(obj.neighbor_weights(k) * C(k, i)) *
                              std::abs(Y(k, i) - shifts(k));
        if (scaled > best) {
          best = scaled;
          bk = k;
          bi = i;
        }
      }
    const double r = Y(bk, bi) - shifts(bk);
    const double sign = r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
    grad = -std::sqrt(obj.neighbor_weights(bk) * C(bk, bi)) * sign *
           neighbors.points.row(bk).transpose();
    return grad;
  }

  for (Eigen::Index k = 0; k < N; ++k) {
    const double w = obj.neighbor_weights(k);
    double row_factor = 0.0;
    for (Eigen::Index i = 0; i < C.cols(); ++i) {
      const double r = Y(k, i) - shifts(k);
      const double c = w * C(k, i);
      if (norm.k == 2.0) {
        row_factor += 2.0 * c * r;
      } else {
        const double sign = r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
        row_factor += std::pow(std::sqrt(c), norm.k) * norm.k *
                      std::pow(std::abs(r), norm.k - 1.0) * sign;
      }
    }
    grad -= row_factor * neighbors.points.row(k).transpose();
  }
  return grad;
}

namespace {

Vector solve_l2(const ObjectiveData& obj, const NeighborSet& neighbors) {
  // Eq-style weighted least squares: per-residual weight w_k*u2_{ki}*dt_i,
  // design row e_k, target y_{ki}. Because the design row is constant
  // across i, the normal equations collapse to per-neighbor sums.
  const RowMatrix& M2 = obj.sq_ratio_weights;
  const RowMatrix Y = residual_targets(obj);
  const Eigen::Index N = M2.rows();
  const Eigen::Index p = neighbors.points.cols();
  const auto m1 = static_cast<std::size_t>(M2.cols());

  Matrix normal = Matrix::Zero(p, p);
  Vector rhs = Vector::Zero(p);
  const auto& ops = kernels::active();
  for (Eigen::Index k = 0; k < N; ++k) {
    const double w = obj.neighbor_weights(k);
    const double row_weight =
        w * ops.dot(M2.row(k).data(), obj.delta_t.data(), m1);
    const double row_target =
        w * ops.dot3(M2.row(k).data(), obj.delta_t.data(), Y.row(k).data(),
                     m1);
    const Vector e = neighbors.points.row(k).transpose();
    normal.noalias() += row_weight * e * e.transpose();
    rhs.noalias() += row_target * e;
  }

  Eigen::FullPivLU<Matrix> lu(normal);
  lu.setThreshold(1e-12);
  if (lu.rank() < p)
    throw invariant_error("degenerate neighborhood; increase N or bandwidth");
  return lu.solve(rhs);
}

} // namespace

Explanation solve(const ObjectiveData& obj, const NeighborSet& neighbors,
                  const ExplainerConfig& config) {
  if (obj.log_predictions.rows() != neighbors.points.rows())
    throw invariant_error("objective/neighbors size mismatch");

  Explanation out;
  out.config_used = config;
  out.diagnostics.neighbors_clamped = obj.entries_clamped;

  Vector beta = solve_l2(obj, neighbors);

  if (config.norm == Norm::l2()) {
    out.diagnostics.solver = "normal-equations";
    out.diagnostics.iterations = 0;
  } else {
    // subgradient descent from the l2 solution
    out.diagnostics.solver = "subgradient-descent";
    const int max_iter = 10000;
    const double tol = 1e-8;
    Vector best = beta;
    double f_best = objective_value(obj, neighbors, best, config.norm);
    Vector iterate = beta;
    const double scale = 1.0 + best.norm();
    int iters_since_improvement = 0;
    int t = 1;
    for (; t <= max_iter; ++t) {
      Vector g = objective_gradient(obj, neighbors, iterate, config.norm);
      const double gn = g.norm();
      if (gn == 0.0)
        break;
      const double step = scale / (std::sqrt(static_cast<double>(t)) * gn);
      iterate -= step * g;
      const double f = objective_value(obj, neighbors, iterate, config.norm);
      if (f < f_best - tol) {
        f_best = f;
        best = iterate;
        iters_since_improvement = 0;
      } else if (++iters_since_improvement > 500) {
        break;
      }
    }
    out.diagnostics.iterations = t;
    out.diagnostics.converged = t <= max_iter;
    beta = best;
  }

  out.coefficients = beta;
  out.objective_value = objective_value(obj, neighbors, beta, config.norm);
  return out;
}

Explanation explain_instance(const Vector& data_row, const PredictFn& predict,
                             const SurvivalDataset& dataset,
                             const ExplainerConfig& config) {
  const TimeGrid grid = distinct_times(dataset, config.gamma);
  const StepFunction baseline = nelson_aalen(dataset, grid);
  const NeighborSet neighbors = generate_neighbors(data_row, dataset, config);
  const ObjectiveData obj =
      build_objective(neighbors, predict, baseline, grid, config);
  return solve(obj, neighbors, config);
}

std::vector<MonteCarloExplanation>
montecarlo_explanation(const Matrix& data, const PredictFn& predict,
                       const SurvivalDataset& dataset,
                       const ExplainerConfig& config, int num_repetitions) {
  if (num_repetitions < 1)
    throw invariant_error("num_repetitions must be >= 1");
  if (data.rows() < 1)
    throw invariant_error("no rows to explain");

  const std::uint64_t base = config.seed ? *config.seed
                                         : std::random_device{}();
  std::vector<MonteCarloExplanation> results;
  results.reserve(data.rows());
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    MonteCarloExplanation mc;
    mc.num_repetitions = num_repetitions;
    mc.per_repetition.resize(num_repetitions, data.cols());
    for (int rep = 0; rep < num_repetitions; ++rep) {
      ExplainerConfig rep_config = config;
      rep_config.seed = derive_seed(base, static_cast<std::uint64_t>(r),
                                    static_cast<std::uint64_t>(rep));
      try {
        const Explanation e = explain_instance(data.row(r).transpose(),
                                               predict, dataset, rep_config);
        mc.per_repetition.row(rep) = e.coefficients.transpose();
      } catch (const std::exception& ex) {
        throw invariant_error("montecarlo row " + std::to_string(r) +
                              ", repetition " + std::to_string(rep) + ": " +
                              ex.what());
      }
    }
    mc.mean = mc.per_repetition.colwise().mean().transpose();
    results.push_back(std::move(mc));
  }
  return results;
}

std::string
explanation_to_json(const Explanation& explanation,
                    const std::vector<std::string>& feature_names) {
  nlohmann::json doc;
  doc["feature_names"] = feature_names;
  doc["coefficients"] = std::vector<double>(
      explanation.coefficients.data(),
      explanation.coefficients.data() + explanation.coefficients.size());
  doc["objective_value"] = explanation.objective_value;
  const auto& cfg = explanation.config_used;
  doc["config"]["num_samples"] = cfg.num_neighbors;
  if (cfg.bandwidth)
    doc["config"]["bandwidth"] = *cfg.bandwidth;
  doc["config"]["norm"] =
      cfg.norm.is_inf ? nlohmann::json("inf") : nlohmann::json(cfg.norm.k);
  doc["config"]["gamma"] = cfg.gamma;
  doc["config"]["chf_clamp"] = cfg.chf_clamp;
  if (cfg.seed)
    doc["config"]["seed"] = *cfg.seed;
  doc["diagnostics"]["solver"] = explanation.diagnostics.solver;
  doc["diagnostics"]["iterations"] = explanation.diagnostics.iterations;
  doc["diagnostics"]["neighbors_clamped"] =
      explanation.diagnostics.neighbors_clamped;
  doc["diagnostics"]["converged"] = explanation.diagnostics.converged;
  return doc.dump(2);
}

} // namespace survkit
