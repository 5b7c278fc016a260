#include "survkit/cox.hpp"
#include "survkit/estimators.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace survkit {

double cox_negative_log_likelihood(const SurvivalDataset& dataset,
                                   const Vector& beta, Vector* gradient,
                                   Matrix* hessian) {
  const auto n = dataset.num_individuals();
  const auto p = dataset.num_features();

  Vector eta = dataset.features * beta;
  const double eta_max = eta.maxCoeff();

  // Descending time order so the risk set grows as we walk.
  std::vector<Eigen::Index> order(n);
  for (Eigen::Index i = 0; i < n; ++i)
    order[i] = i;
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return dataset.times(a) > dataset.times(b);
  });

  double nll = 0.0;
  if (gradient)
    gradient->setZero(p);
  if (hessian)
    hessian->setZero(p, p);

  double s0 = 0.0;
  Vector s1 = Vector::Zero(p);
  Matrix s2 = Matrix::Zero(p, p);

  Eigen::Index i = 0;
  while (i < n) {
    const double t = dataset.times(order[i]);
    // admit everyone with this time into the risk set
    Eigen::Index j = i;
    for (; j < n && dataset.times(order[j]) == t; ++j) {
      const Eigen::Index idx = order[j];
      const double r = std::exp(eta(idx) - eta_max);
      s0 += r;
      s1 += r * dataset.features.row(idx).transpose();
      if (hessian)
        s2 += r * dataset.features.row(idx).transpose() *
              dataset.features.row(idx);
    }
    // Breslow: tied events share the full risk-set denominator
    Eigen::Index d = 0;
    Vector x_sum = Vector::Zero(p);
    for (Eigen::Index k = i; k < j; ++k) {
      const Eigen::Index idx = order[k];
      if (dataset.events(idx) == 1.0) {
        ++d;
        x_sum += dataset.features.row(idx).transpose();
      }
    }
    if (d > 0) {
      const double dd = static_cast<double>(d);
      nll += -(beta.dot(x_sum)) + dd * (std::log(s0) + eta_max);
      const Vector mean = s1 / s0;
      if (gradient)
        *gradient += -x_sum + dd * mean;
      if (hessian)
        *hessian += dd * (s2 / s0 - mean * mean.transpose());
    }
    i = j;
  }
  return nll;
}

CoxModel fit_cox(const SurvivalDataset& dataset, const CoxFitOptions& options) {
  dataset.validate();
  if (dataset.events.sum() < 1.0)
    throw invariant_error("no events to fit");

  const auto p = dataset.num_features();
  Vector beta = Vector::Zero(p);
  Vector grad(p);
  Matrix hess(p, p);

  double nll = cox_negative_log_likelihood(dataset, beta, &grad, &hess);
  int iter = 0;
  double grad_norm = grad.lpNorm<Eigen::Infinity>();

  while (grad_norm > options.tolerance) {
    if (iter >= options.max_iter) {
      std::ostringstream os;
      os << "cox fit did not converge after " << iter
         << " iterations; gradient max-norm " << grad_norm
         << ", last beta = [" << beta.transpose() << "]";
      throw invariant_error(os.str());
    }
    Vector step = hess.ldlt().solve(grad);
    if (!step.allFinite())
      throw invariant_error("diverging coefficients");

    // step-halving until the negative log likelihood decreases; the slack
    // keeps roundoff-level comparisons from rejecting the full Newton step
    // near the optimum, where the true decrease is below double precision
    const double slack = 1e-10 * (std::abs(nll) + 1.0);
    double scale = 1.0;
    Vector candidate;
    double nll_new;
    for (int h = 0;; ++h) {
      candidate = beta - scale * step;
      nll_new = cox_negative_log_likelihood(dataset, candidate);
      if (nll_new <= nll + slack || h >= 40)
        break;
      scale *= 0.5;
    }
    beta = candidate;
    nll = nll_new;
    if (beta.lpNorm<Eigen::Infinity>() > options.divergence_bound)
      throw invariant_error("diverging coefficients");
    cox_negative_log_likelihood(dataset, beta, &grad, &hess);
    grad_norm = grad.lpNorm<Eigen::Infinity>();
    ++iter;
  }

  CoxModel model;
  model.coefficients = beta;
  model.feature_names = dataset.feature_names;
  model.convergence = {iter, grad_norm};
  const TimeGrid grid = distinct_times(dataset);
  model.baseline_chf = nelson_aalen(dataset, grid);
  return model;
}

PredictionMatrix predict_chf(const CoxModel& model,
                             const Matrix& individuals) {
  if (individuals.cols() != model.coefficients.size())
    throw invariant_error("predict_chf: feature dimension mismatch");
  PredictionMatrix out;
  out.grid = model.baseline_chf.grid;
  out.kind = FunctionKind::cumulative_hazard;
  const Vector scores =
      (individuals * model.coefficients).array().exp().matrix();
  out.rows = scores * model.baseline_chf.values.transpose();
  return out;
}

std::string cox_to_json(const CoxModel& model) {
  nlohmann::json doc;
  doc["feature_names"] = model.feature_names;
  doc["coefficients"] = std::vector<double>(
      model.coefficients.data(),
      model.coefficients.data() + model.coefficients.size());
  doc["baseline"]["times"] = std::vector<double>(
      model.baseline_chf.grid.times.data(),
      model.baseline_chf.grid.times.data() +
          model.baseline_chf.grid.times.size());
  doc["baseline"]["values"] = std::vector<double>(
      model.baseline_chf.values.data(),
      model.baseline_chf.values.data() + model.baseline_chf.values.size());
  doc["gamma"] = model.baseline_chf.grid.gamma;
  return doc.dump(2);
}

CoxModel cox_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  CoxModel model;
  model.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
  const auto coefs = doc.at("coefficients").get<std::vector<double>>();
  model.coefficients = Eigen::Map<const Vector>(coefs.data(), coefs.size());
  const auto times = doc.at("baseline").at("times").get<std::vector<double>>();
  const auto values =
      doc.at("baseline").at("values").get<std::vector<double>>();
  model.baseline_chf.grid.times =
      Eigen::Map<const Vector>(times.data(), times.size());
  model.baseline_chf.grid.gamma = doc.at("gamma").get<double>();
  model.baseline_chf.values =
      Eigen::Map<const Vector>(values.data(), values.size());
  model.baseline_chf.kind = FunctionKind::cumulative_hazard;
  model.baseline_chf.validate();
  return model;
}

} // namespace survkit
