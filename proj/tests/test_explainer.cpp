#include "survkit/cox.hpp"
#include "survkit/estimators.hpp"
#include "survkit/explainer.hpp"
#include "survkit/simulate.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace survkit;

namespace {

SurvivalDataset weibull_set1(std::uint64_t seed, Eigen::Index n) {
  RandomSurvivalConfig cfg;
  cfg.center = Vector::Zero(5);
  cfg.radius = 8.0;
  cfg.coefficients.resize(5);
  cfg.coefficients << 1e-6, 0.1, -0.15, 1e-6, 1e-6;
  cfg.lambda_weibull = 1e-5;
  cfg.v_weibull = 2.0;
  cfg.prob_event = 0.9;
  cfg.time_cap = 2000.0;
  cfg.seed = seed;
  return random_survival_data(cfg, n);
}

PredictFn cox_predictor(const CoxModel& model) {
  return [model](const Matrix& x) { return predict_chf(model, x); };
}

Vector column_sd(const Matrix& m) {
  Vector out(m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double mean = m.col(j).mean();
    out(j) = std::sqrt((m.col(j).array() - mean).square().sum() /
                       static_cast<double>(m.rows() - 1));
  }
  return out;
}

} // namespace

TEST_CASE("default bandwidth reference values") {
  CHECK(default_bandwidth(1000, 5) ==
        doctest::Approx(0.4361766765255794).epsilon(1e-14));
  CHECK(default_bandwidth(100, 2) ==
        doctest::Approx(0.4641588833612779).epsilon(1e-14));
  CHECK(default_bandwidth(20, 1) ==
        doctest::Approx(0.581810759152688).epsilon(1e-14));
  CHECK_THROWS_AS(default_bandwidth(1, 5), invariant_error);
}

TEST_CASE("derive_seed separates rows and repetitions") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t r = 0; r < 8; ++r)
    for (std::uint64_t rep = 0; rep < 8; ++rep)
      seen.insert(derive_seed(42, r, rep));
  CHECK(seen.size() == 64);
  CHECK(derive_seed(42, 0, 0) != derive_seed(43, 0, 0));
}

TEST_CASE("generate_neighbors") {
  const auto d = weibull_set1(3, 400);
  const Vector center = d.features.row(0).transpose();
  ExplainerConfig cfg;
  cfg.seed = 7;

  SUBCASE("shape, positivity and moments") {
    cfg.num_neighbors = 20000;
    const auto nb = generate_neighbors(center, d, cfg);
    REQUIRE(nb.points.rows() == 20000);
    REQUIRE(nb.points.cols() == 5);
    CHECK((nb.weights.array() > 0.0).all());
    const double b = default_bandwidth(400, 5);
    const Vector sd = column_sd(d.features);
    const Vector nb_sd = column_sd(nb.points);
    for (Eigen::Index j = 0; j < 5; ++j) {
      const double se = b * sd(j) / std::sqrt(20000.0);
      CHECK(std::abs(nb.points.col(j).mean() - center(j)) < 5.0 * se);
      CHECK(nb_sd(j) == doctest::Approx(b * sd(j)).epsilon(0.05));
    }
  }

  SUBCASE("weight ratios match the gaussian density") {
    cfg.num_neighbors = 50;
    cfg.bandwidth = 0.5;
    const auto nb = generate_neighbors(center, d, cfg);
    const Vector sd = column_sd(d.features);
    auto quad = [&](Eigen::Index k) {
      double q = 0.0;
      for (Eigen::Index j = 0; j < 5; ++j) {
        const double z = (nb.points(k, j) - center(j)) / (0.5 * sd(j));
        q += z * z;
      }
      return q;
    };
    for (Eigen::Index k = 1; k < 50; ++k) {
      const double want = std::exp(-0.5 * (quad(k) - quad(0)));
      CHECK(nb.weights(k) / nb.weights(0) ==
            doctest::Approx(want).epsilon(1e-10));
    }
  }

  SUBCASE("rejects constant features and tiny neighborhoods") {
    auto flat = d;
    flat.features.col(2).setConstant(1.0);
    CHECK_THROWS_WITH_AS(generate_neighbors(center, flat, cfg),
                         "constant feature; cannot perturb", invariant_error);
    cfg.num_neighbors = 6; // p + 2 = 7
    CHECK_THROWS_WITH_AS(
        generate_neighbors(center, d, cfg),
        "degenerate neighborhood: num_neighbors must be at least p + 2",
        invariant_error);
  }

  SUBCASE("same seed reproduces, different seed does not") {
    cfg.num_neighbors = 30;
    const auto a = generate_neighbors(center, d, cfg);
    const auto b = generate_neighbors(center, d, cfg);
    CHECK(a.points == b.points);
    CHECK(a.weights == b.weights);
    cfg.seed = 8;
    const auto c = generate_neighbors(center, d, cfg);
    CHECK(a.points != c.points);
  }
}

TEST_CASE("cox model explains itself exactly under l2") {
  const auto d = weibull_set1(11, 500);
  const auto model = fit_cox(d);
  ExplainerConfig cfg;
  cfg.seed = 19;
  cfg.num_neighbors = 300;
  const Vector row = d.features.row(4).transpose();
  const auto e = explain_instance(row, cox_predictor(model), d, cfg);
  // the black box is itself proportional hazards with the same baseline,
  // so the surrogate residual vanishes at the Cox coefficients
  for (Eigen::Index j = 0; j < 5; ++j)
    CHECK(e.coefficients(j) ==
          doctest::Approx(model.coefficients(j)).epsilon(1e-6).scale(1.0));
  CHECK(e.objective_value < 1e-10);
  CHECK(e.diagnostics.solver == "normal-equations");
}

TEST_CASE("survival-kind predictions give the same explanation") {
  const auto d = weibull_set1(23, 300);
  const auto model = fit_cox(d);
  ExplainerConfig cfg;
  cfg.seed = 5;
  cfg.num_neighbors = 200;
  const Vector row = d.features.row(10).transpose();

  PredictFn sf_predictor = [&model](const Matrix& x) {
    PredictionMatrix pm = predict_chf(model, x);
    pm.rows = (-pm.rows.array()).exp();
    pm.kind = FunctionKind::survival;
    return pm;
  };

  const auto via_chf = explain_instance(row, cox_predictor(model), d, cfg);
  const auto via_sf = explain_instance(row, sf_predictor, d, cfg);
  for (Eigen::Index j = 0; j < 5; ++j)
    CHECK(via_sf.coefficients(j) ==
          doctest::Approx(via_chf.coefficients(j)).epsilon(1e-6).scale(1.0));
}

TEST_CASE("a foreign output grid is interpolated, not rejected") {
  const auto d = weibull_set1(29, 300);
  const auto model = fit_cox(d);
  ExplainerConfig cfg;
  cfg.seed = 2;
  cfg.num_neighbors = 200;
  const Vector row = d.features.row(0).transpose();

  // same model, reported on a dense foreign grid
  const TimeGrid native = distinct_times(d, cfg.gamma);
  PredictFn foreign = [&](const Matrix& x) {
    PredictionMatrix pm = predict_chf(model, x);
    TimeGrid dense;
    dense.times = Vector::LinSpaced(4 * native.size(), native.min_time(),
                                    native.max_time());
    return interpolate_to_grid(pm, dense);
  };

  const auto native_e = explain_instance(row, cox_predictor(model), d, cfg);
  const auto foreign_e = explain_instance(row, foreign, d, cfg);
  for (Eigen::Index j = 0; j < 5; ++j)
    CHECK(std::abs(foreign_e.coefficients(j) - native_e.coefficients(j)) <
          5e-3);
}

TEST_CASE("rescaling all neighbor weights leaves the argmin unchanged") {
  const auto d = weibull_set1(31, 250);
  const auto model = fit_cox(d);
  ExplainerConfig cfg;
  cfg.seed = 77;
  cfg.num_neighbors = 150;
  const Vector row = d.features.row(3).transpose();
  const TimeGrid grid = distinct_times(d, cfg.gamma);
  const StepFunction baseline = nelson_aalen(d, grid);
  auto nb = generate_neighbors(row, d, cfg);
  const auto obj = build_objective(nb, cox_predictor(model), baseline, grid,
                                   cfg);
  const auto base = solve(obj, nb, cfg);

  auto scaled_obj = obj;
  scaled_obj.neighbor_weights *= 1000.0;
  auto scaled_nb = nb;
  scaled_nb.weights *= 1000.0;
  const auto scaled = solve(scaled_obj, scaled_nb, cfg);
  CHECK((scaled.coefficients - base.coefficients).lpNorm<Eigen::Infinity>() <
        1e-9);
  CHECK(scaled.objective_value ==
        doctest::Approx(1000.0 * base.objective_value).epsilon(1e-9));
}

TEST_CASE("l2 gradient vanishes at the normal-equations solution") {
  const auto d = weibull_set1(37, 200);
  const auto model = fit_cox(d);
  ExplainerConfig cfg;
  cfg.seed = 13;
  cfg.num_neighbors = 120;
  const Vector row = d.features.row(7).transpose();
  const TimeGrid grid = distinct_times(d, cfg.gamma);
  const StepFunction baseline = nelson_aalen(d, grid);
  const auto nb = generate_neighbors(row, d, cfg);
  const auto obj = build_objective(nb, cox_predictor(model), baseline, grid,
                                   cfg);
  const auto e = solve(obj, nb, cfg);
  const Vector g =
      objective_gradient(obj, nb, e.coefficients, Norm::l2());
  CHECK(g.lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("objective_gradient matches finite differences for k=3") {
  const auto d = weibull_set1(41, 150);
  const auto model = fit_cox(d);
  ExplainerConfig cfg;
  cfg.seed = 3;
  cfg.num_neighbors = 60;
  const Vector row = d.features.row(1).transpose();
  const TimeGrid grid = distinct_times(d, cfg.gamma);
  const StepFunction baseline = nelson_aalen(d, grid);
  const auto nb = generate_neighbors(row, d, cfg);
  const auto obj = build_objective(nb, cox_predictor(model), baseline, grid,
                                   cfg);
  Vector beta(5);
  beta << 0.05, 0.2, -0.1, 0.0, -0.3;
  const Norm norm = Norm::lk(3.0);
  const Vector g = objective_gradient(obj, nb, beta, norm);
  const double h = 1e-6;
  for (int j = 0; j < 5; ++j) {
    Vector up = beta, dn = beta;
    up(j) += h;
    dn(j) -= h;
    const double fd = (objective_value(obj, nb, up, norm) -
                       objective_value(obj, nb, dn, norm)) /
                      (2 * h);
    CHECK(g(j) == doctest::Approx(fd).epsilon(1e-4).scale(1.0));
  }
}

TEST_CASE("non-l2 norms stay close to the l2 answer on a cox black box") {
  const auto d = weibull_set1(47, 250);
  const auto model = fit_cox(d);
  ExplainerConfig cfg;
  cfg.seed = 101;
  cfg.num_neighbors = 150;
  const Vector row = d.features.row(2).transpose();
  // for a self-consistent black box the residual is ~0 at the Cox beta,
  // which minimizes every norm of the residual vector simultaneously
  for (const Norm& norm : {Norm::lk(1.0), Norm::lk(3.0), Norm::linf()}) {
    auto c = cfg;
    c.norm = norm;
    const auto e = explain_instance(row, cox_predictor(model), d, c);
    CHECK(e.diagnostics.solver == "subgradient-descent");
    for (Eigen::Index j = 0; j < 5; ++j)
      CHECK(e.coefficients(j) ==
            doctest::Approx(model.coefficients(j)).epsilon(1e-3).scale(0.1));
  }
}

TEST_CASE("explanations are deterministic under a fixed seed") {
  const auto d = weibull_set1(53, 200);
  const auto model = fit_cox(d);
  ExplainerConfig cfg;
  cfg.seed = 404;
  cfg.num_neighbors = 100;
  const Vector row = d.features.row(9).transpose();
  const auto a = explain_instance(row, cox_predictor(model), d, cfg);
  const auto b = explain_instance(row, cox_predictor(model), d, cfg);
  CHECK(a.coefficients == b.coefficients);
  CHECK(a.objective_value == b.objective_value);
  cfg.seed = 405;
  const auto c = explain_instance(row, cox_predictor(model), d, cfg);
  CHECK(a.coefficients != c.coefficients);
}

TEST_CASE("montecarlo_explanation") {
  const auto d = weibull_set1(59, 200);
  const auto model = fit_cox(d);
  ExplainerConfig cfg;
  cfg.seed = 7;
  cfg.num_neighbors = 60;
  const Matrix rows = d.features.topRows(2);

  SUBCASE("shape, mean and reproducibility") {
    const auto res =
        montecarlo_explanation(rows, cox_predictor(model), d, cfg, 5);
    REQUIRE(res.size() == 2);
    for (const auto& mc : res) {
      CHECK(mc.num_repetitions == 5);
      REQUIRE(mc.per_repetition.rows() == 5);
      const Vector want = mc.per_repetition.colwise().mean().transpose();
      CHECK(mc.mean == want);
      // repetitions use distinct neighbor draws
      CHECK(mc.per_repetition.row(0) != mc.per_repetition.row(1));
    }
    const auto again =
        montecarlo_explanation(rows, cox_predictor(model), d, cfg, 5);
    CHECK(again[0].per_repetition == res[0].per_repetition);
    CHECK(again[1].per_repetition == res[1].per_repetition);
  }

  SUBCASE("argument validation and error context") {
    CHECK_THROWS_AS(
        montecarlo_explanation(rows, cox_predictor(model), d, cfg, 0),
        invariant_error);
    PredictFn broken = [](const Matrix&) -> PredictionMatrix {
      throw invariant_error("black box fell over");
    };
    try {
      montecarlo_explanation(rows, broken, d, cfg, 2);
      FAIL("expected a throw");
    } catch (const invariant_error& ex) {
      const std::string msg = ex.what();
      CHECK(msg.find("montecarlo row 0, repetition 0") != std::string::npos);
      CHECK(msg.find("black box fell over") != std::string::npos);
    }
  }
}

TEST_CASE("explanation json carries coefficients and config") {
  Explanation e;
  e.coefficients = Vector(2);
  e.coefficients << 0.5, -1.25;
  e.objective_value = 3.5;
  e.config_used.seed = 9;
  e.config_used.bandwidth = 0.75;
  e.diagnostics.solver = "normal-equations";
  const std::string doc = explanation_to_json(e, {"age", "dose"});
  CHECK(doc.find("\"age\"") != std::string::npos);
  CHECK(doc.find("-1.25") != std::string::npos);
  CHECK(doc.find("normal-equations") != std::string::npos);
  CHECK(doc.find("\"bandwidth\": 0.75") != std::string::npos);
}
