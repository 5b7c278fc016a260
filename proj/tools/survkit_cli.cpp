// Command-line surface for the survkit library: dataset simulation, Cox
// fitting, single and Monte-Carlo explanations, figure emission.
//
// Exit codes: 0 success, 2 usage, 3 data/model error, 4 solver error,
// 5 adapter error.

#include "survkit/cox.hpp"
#include "survkit/csv.hpp"
#include "survkit/estimators.hpp"
#include "survkit/explainer.hpp"
#include "survkit/plots.hpp"
#include "survkit/simulate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace survkit;

namespace {

constexpr const char* kToolVersion = "survkit 0.1.0";
constexpr int kSchemaVersion = 1;

class usage_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};
class data_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};
class adapter_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

// Writes <out>.manifest.json next to the primary output and returns the
// manifest content hash embedded in every JSON output of the run.
std::string emit_manifest(const std::string& out_path,
                          const std::string& command,
                          const json& config_snapshot,
                          const std::vector<std::string>& input_paths) {
  json manifest;
  manifest["command"] = command;
  manifest["config_snapshot"] = config_snapshot;
  json hashes = json::object();
  for (const auto& p : input_paths)
    hashes[p] = hex64(fnv1a(read_file(p)));
  manifest["input_hashes"] = hashes;
  manifest["tool_version"] = kToolVersion;
  const std::string text = manifest.dump(2);
  write_file_atomic(out_path + ".manifest.json", text);
  return hex64(fnv1a(text));
}

Vector parse_vector_flag(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  std::istringstream in(text);
  std::string field;
  while (std::getline(in, field, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(field, &used));
      if (used != field.size())
        throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw usage_error("malformed value '" + field + "' in " + flag);
    }
  }
  if (values.empty())
    throw usage_error(flag + " must be a comma-separated list of decimals");
  Vector out(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = values[i];
  return out;
}

Norm parse_norm(const std::string& text) {
  if (text == "inf")
    return Norm::linf();
  try {
    const double k = std::stod(text);
    if (k < 1.0)
      throw usage_error("--norm must be >= 1 or 'inf'");
    return Norm::lk(k);
  } catch (const usage_error&) {
    throw;
  } catch (const std::exception&) {
    throw usage_error("--norm must be a number >= 1 or 'inf'");
  }
}

std::uint64_t effective_seed(std::optional<std::uint64_t> seed) {
  return seed ? *seed : std::random_device{}();
}


// data/model loading failures map to exit code 3, not 4
SurvivalDataset load_dataset(const std::string& path) {
  try {
    return read_dataset_csv(path);
  } catch (const std::exception& ex) {
    throw data_error(ex.what());
  }
}

// ---------------------------------------------------------------------------
// subprocess black-box adapter

struct AdapterOptions {
  std::string command;
  FunctionKind kind = FunctionKind::cumulative_hazard;
  int timeout_seconds = 300;
};

PredictFn make_subprocess_predictor(const AdapterOptions& opts,
                                    double gamma) {
  return [opts, gamma](const Matrix& individuals) -> PredictionMatrix {
    const auto dir = fs::temp_directory_path() /
                     ("survkit-adapter-" +
                      hex64(fnv1a(std::to_string(std::random_device{}()))));
    fs::create_directories(dir);
    const std::string input = (dir / "neighbors.csv").string();
    const std::string output = (dir / "predictions.csv").string();
    const std::string errlog = (dir / "stderr.log").string();
    write_matrix_csv(individuals, input);

    std::ostringstream cmd;
    cmd << "timeout " << opts.timeout_seconds << " " << opts.command
        << " --input '" << input << "' --output '" << output << "' --kind "
        << (opts.kind == FunctionKind::survival ? "survival" : "cumulative")
        << " 2> '" << errlog << "'";
    const int status = std::system(cmd.str().c_str());
    std::string diagnostics;
    if (fs::exists(errlog))
      diagnostics = read_file(errlog);
    if (status != 0) {
      fs::remove_all(dir);
      throw adapter_error("model command failed (status " +
                          std::to_string(status) + "): " + diagnostics);
    }
    if (!fs::exists(output)) {
      fs::remove_all(dir);
      throw adapter_error("model command wrote no prediction file: " +
                          diagnostics);
    }
    PredictionMatrix pred;
    try {
      pred = read_prediction_csv(output, opts.kind, gamma);
    } catch (const std::exception& ex) {
      fs::remove_all(dir);
      throw adapter_error(std::string("ill-formed prediction CSV: ") +
                          ex.what());
    }
    fs::remove_all(dir);
    if (pred.rows.rows() != individuals.rows())
      throw adapter_error("prediction row count mismatch");
    return pred;
  };
}

// ---------------------------------------------------------------------------
// shared helpers for explain/montecarlo

struct ModelSource {
  std::string model_path;   // internal JSON
  std::string model_cmd;    // subprocess adapter
  std::string model_kind = "cumulative";
  int adapter_timeout = 300;
};

PredictFn load_predictor(const ModelSource& src, double gamma,
                         std::vector<std::string>* feature_names,
                         std::vector<std::string>* inputs) {
  if (!src.model_path.empty()) {
    CoxModel model;
    try {
      model = cox_from_json(read_file(src.model_path));
    } catch (const std::exception& ex) {
      throw data_error(ex.what());
    }
    if (feature_names)
      *feature_names = model.feature_names;
    if (inputs)
      inputs->push_back(src.model_path);
    return [model](const Matrix& x) { return predict_chf(model, x); };
  }
  if (src.model_cmd.empty())
    throw usage_error("either --model or --model-cmd is required");
  AdapterOptions opts;
  opts.command = src.model_cmd;
  opts.timeout_seconds = src.adapter_timeout;
  if (src.model_kind == "survival")
    opts.kind = FunctionKind::survival;
  else if (src.model_kind != "cumulative")
    throw usage_error("--model-kind must be 'cumulative' or 'survival'");
  return make_subprocess_predictor(opts, gamma);
}

std::vector<Eigen::Index> shuffled_indices(Eigen::Index n,
                                           std::uint64_t seed) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

json vector_to_json(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const std::string& center, const std::string& coefficients,
                 double radius, double prob_event, double lambda, double v,
                 std::optional<double> time_cap, Eigen::Index n,
                 std::optional<std::uint64_t> seed, const std::string& out) {
  RandomSurvivalConfig config;
  config.center = parse_vector_flag(center, "--center");
  config.coefficients = parse_vector_flag(coefficients, "--coefficients");
  if (config.center.size() != config.coefficients.size())
    throw usage_error("--center and --coefficients must have equal length");
  config.radius = radius;
  config.prob_event = prob_event;
  config.lambda_weibull = lambda;
  config.v_weibull = v;
  config.time_cap = time_cap;
  config.seed = effective_seed(seed);
  if (n < 2)
    throw usage_error("--n must be at least 2");

  const SurvivalDataset data = random_survival_data(config, n);
  write_dataset_csv(data, out);

  json snapshot;
  snapshot["center"] = vector_to_json(config.center);
  snapshot["coefficients"] = vector_to_json(config.coefficients);
  snapshot["radius"] = config.radius;
  snapshot["prob_event"] = config.prob_event;
  snapshot["lambda_weibull"] = config.lambda_weibull;
  snapshot["v_weibull"] = config.v_weibull;
  if (config.time_cap)
    snapshot["time_cap"] = *config.time_cap;
  snapshot["seed"] = *config.seed;
  snapshot["num_points"] = n;

  const std::string manifest_hash =
      emit_manifest(out, "simulate", snapshot, {});
  json sidecar = snapshot;
  sidecar["schema_version"] = kSchemaVersion;
  sidecar["manifest_hash"] = manifest_hash;
  write_file_atomic(out + ".config.json", sidecar.dump(2));
  return 0;
}

// ---------------------------------------------------------------------------
// fit-cox

int cmd_fit_cox(const std::string& data_path, double split,
                std::optional<std::uint64_t> seed, const std::string& out) {
  if (!(split > 0.0))
    throw usage_error("--split must be in (0,1]");
  if (split >= 1.0)
    throw usage_error("empty test split");

  const SurvivalDataset full = load_dataset(data_path);
  const Eigen::Index n = full.num_individuals();
  const Eigen::Index p = full.num_features();
  const std::uint64_t split_seed = effective_seed(seed);
  const auto idx = shuffled_indices(n, split_seed);
  const auto n_train =
      static_cast<Eigen::Index>(split * static_cast<double>(n));
  if (n_train < 2 || n_train >= n)
    throw usage_error("split leaves too few rows on one side");

  auto subset = [&](Eigen::Index begin, Eigen::Index end) {
    SurvivalDataset d;
    d.features.resize(end - begin, p);
    d.times.resize(end - begin);
    d.events.resize(end - begin);
    d.feature_names = full.feature_names;
    for (Eigen::Index i = begin; i < end; ++i) {
      d.features.row(i - begin) = full.features.row(idx[i]);
      d.times(i - begin) = full.times(idx[i]);
      d.events(i - begin) = full.events(idx[i]);
    }
    return d;
  };
  SurvivalDataset train = subset(0, n_train);
  const SurvivalDataset test = subset(n_train, n);

  // Standardize on training statistics only; the fitted coefficients are
  // mapped back to raw feature units (the partial likelihood is scale
  // equivariant, so this only conditions the optimization).
  Vector mu(p), sd(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    mu(j) = train.features.col(j).mean();
    const double ss =
        (train.features.col(j).array() - mu(j)).square().sum();
    sd(j) = std::sqrt(ss / static_cast<double>(train.num_individuals() - 1));
    if (sd(j) == 0.0)
      throw data_error("constant feature column " + std::to_string(j));
  }
  SurvivalDataset train_std = train;
  for (Eigen::Index j = 0; j < p; ++j)
    train_std.features.col(j) =
        (train.features.col(j).array() - mu(j)) / sd(j);

  CoxModel model = fit_cox(train_std);
  model.coefficients = model.coefficients.array() / sd.array();
  model.feature_names = full.feature_names;
  // baseline from the raw training data (Nelson-Aalen ignores features)
  const TimeGrid grid = distinct_times(train);
  model.baseline_chf = nelson_aalen(train, grid);

  const Vector train_risk = train.features * model.coefficients;
  const Vector test_risk = test.features * model.coefficients;
  const double c_train = c_index(train_risk, train.times, train.events);
  const double c_test = c_index(test_risk, test.times, test.events);

  json snapshot;
  snapshot["data"] = data_path;
  snapshot["split"] = split;
  snapshot["seed"] = split_seed;
  const std::string manifest_hash =
      emit_manifest(out, "fit-cox", snapshot, {data_path});

  write_file_atomic(out, cox_to_json(model));
  json metrics;
  metrics["schema_version"] = kSchemaVersion;
  metrics["manifest_hash"] = manifest_hash;
  metrics["c_index_train"] = c_train;
  metrics["c_index_test"] = c_test;
  metrics["n_train"] = n_train;
  metrics["n_test"] = n - n_train;
  metrics["iterations"] = model.convergence.iterations;
  metrics["final_gradient_norm"] = model.convergence.final_gradient_norm;
  write_file_atomic(out + ".metrics.json", metrics.dump(2));
  return 0;
}

// ---------------------------------------------------------------------------
// explain

int cmd_explain(const std::string& data_path, const ModelSource& src,
                std::optional<Eigen::Index> row_index,
                const std::string& row_values, int num_samples,
                const std::string& norm, std::optional<std::uint64_t> seed,
                const std::string& plot_path, const std::string& out) {
  const SurvivalDataset data = load_dataset(data_path);

  Vector row;
  if (!row_values.empty()) {
    row = parse_vector_flag(row_values, "--row-values");
  } else if (row_index) {
    if (*row_index < 0 || *row_index >= data.num_individuals())
      throw usage_error("--row-index out of range");
    row = data.features.row(*row_index).transpose();
  } else {
    throw usage_error("either --row-index or --row-values is required");
  }
  if (row.size() != data.num_features())
    throw data_error("row dimension mismatch: expected " +
                     std::to_string(data.num_features()) + " values");

  ExplainerConfig config;
  config.num_neighbors = num_samples;
  config.norm = parse_norm(norm);
  config.seed = effective_seed(seed);

  std::vector<std::string> feature_names = data.feature_names;
  std::vector<std::string> inputs = {data_path};
  const PredictFn predict =
      load_predictor(src, config.gamma, &feature_names, &inputs);

  const Explanation explanation =
      explain_instance(row, predict, data, config);

  json snapshot;
  snapshot["data"] = data_path;
  if (!src.model_path.empty())
    snapshot["model"] = src.model_path;
  if (!src.model_cmd.empty()) {
    snapshot["model_cmd"] = src.model_cmd;
    snapshot["model_kind"] = src.model_kind;
  }
  if (row_index)
    snapshot["row_index"] = *row_index;
  snapshot["row"] = vector_to_json(row);
  snapshot["num_samples"] = num_samples;
  snapshot["norm"] = norm;
  snapshot["seed"] = *config.seed;
  const std::string manifest_hash =
      emit_manifest(out, "explain", snapshot, inputs);

  json doc = json::parse(explanation_to_json(explanation, feature_names));
  doc["schema_version"] = kSchemaVersion;
  doc["manifest_hash"] = manifest_hash;
  write_file_atomic(out, doc.dump(2));

  if (!plot_path.empty()) {
    PlotSpec spec;
    spec.kind = PlotKind::bar;
    spec.output_path = plot_path;
    plot_weights(explanation, feature_names, spec);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// montecarlo

int cmd_montecarlo(const std::string& data_path, const ModelSource& src,
                   const std::string& rows_flag, int num_repetitions,
                   int num_samples, const std::string& norm,
                   std::optional<std::uint64_t> seed, double split,
                   std::optional<std::uint64_t> split_seed,
                   const std::string& plot_path, const std::string& out) {
  if (num_repetitions < 1)
    throw usage_error("--num-repetitions must be >= 1");
  const SurvivalDataset data = load_dataset(data_path);

  std::vector<Eigen::Index> rows;
  if (rows_flag == "all-test") {
    if (!(split > 0.0 && split < 1.0))
      throw usage_error("all-test needs --split in (0,1)");
    const auto idx = shuffled_indices(data.num_individuals(),
                                      effective_seed(split_seed));
    const auto n_train = static_cast<Eigen::Index>(
        split * static_cast<double>(data.num_individuals()));
    rows.assign(idx.begin() + n_train, idx.end());
  } else {
    std::istringstream in(rows_flag);
    std::string field;
    while (std::getline(in, field, ',')) {
      try {
        rows.push_back(std::stol(field));
      } catch (const std::exception&) {
        throw usage_error("--rows must be an index list or 'all-test'");
      }
      if (rows.back() < 0 || rows.back() >= data.num_individuals())
        throw usage_error("row index out of range: " + field);
    }
    if (rows.empty())
      throw usage_error("--rows must name at least one row");
  }

  Matrix targets(static_cast<Eigen::Index>(rows.size()),
                 data.num_features());
  for (std::size_t i = 0; i < rows.size(); ++i)
    targets.row(static_cast<Eigen::Index>(i)) = data.features.row(rows[i]);

  ExplainerConfig config;
  config.num_neighbors = num_samples;
  config.norm = parse_norm(norm);
  config.seed = effective_seed(seed);

  std::vector<std::string> feature_names = data.feature_names;
  std::vector<std::string> inputs = {data_path};
  const PredictFn predict =
      load_predictor(src, config.gamma, &feature_names, &inputs);

  const auto results = montecarlo_explanation(targets, predict, data, config,
                                              num_repetitions);

  json snapshot;
  snapshot["data"] = data_path;
  if (!src.model_path.empty())
    snapshot["model"] = src.model_path;
  if (!src.model_cmd.empty()) {
    snapshot["model_cmd"] = src.model_cmd;
    snapshot["model_kind"] = src.model_kind;
  }
  snapshot["rows"] = rows;
  snapshot["num_repetitions"] = num_repetitions;
  snapshot["num_samples"] = num_samples;
  snapshot["norm"] = norm;
  snapshot["seed"] = *config.seed;
  const std::string manifest_hash =
      emit_manifest(out, "montecarlo", snapshot, inputs);

  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["manifest_hash"] = manifest_hash;
  doc["feature_names"] = feature_names;
  doc["rows"] = rows;
  doc["num_repetitions"] = num_repetitions;
  json means = json::array();
  json reps = json::array();
  for (const auto& mc : results) {
    means.push_back(vector_to_json(mc.mean));
    json rep_rows = json::array();
    for (Eigen::Index r = 0; r < mc.per_repetition.rows(); ++r)
      rep_rows.push_back(
          vector_to_json(mc.per_repetition.row(r).transpose()));
    reps.push_back(rep_rows);
  }
  doc["mean_matrix"] = means;
  doc["per_repetition"] = reps;
  write_file_atomic(out, doc.dump(2));

  if (!plot_path.empty()) {
    PlotSpec spec;
    spec.kind = PlotKind::distribution;
    spec.output_path = plot_path;
    plot_montecarlo_weights(results.front(), feature_names, spec);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// plot (re-render saved JSON payloads)

int cmd_plot(const std::string& explanation_path,
             const std::string& montecarlo_path, bool with_colour,
             const std::string& title, const std::string& out) {
  if (explanation_path.empty() == montecarlo_path.empty())
    throw usage_error("exactly one of --explanation or --montecarlo is "
                      "required");
  PlotSpec spec;
  spec.with_colour = with_colour;
  spec.title = title;
  spec.output_path = out;

  if (!explanation_path.empty()) {
    const json doc = json::parse(read_file(explanation_path));
    Explanation e;
    const auto coefs = doc.at("coefficients").get<std::vector<double>>();
    e.coefficients = Eigen::Map<const Vector>(coefs.data(), coefs.size());
    e.objective_value = doc.value("objective_value", 0.0);
    spec.kind = PlotKind::bar;
    plot_weights(e, doc.at("feature_names").get<std::vector<std::string>>(),
                 spec);
  } else {
    const json doc = json::parse(read_file(montecarlo_path));
    const auto reps = doc.at("per_repetition");
    if (reps.empty())
      throw data_error("montecarlo payload has no repetitions");
    const auto first = reps.at(0);
    MonteCarloExplanation mc;
    mc.num_repetitions = static_cast<int>(first.size());
    const auto p = first.at(0).get<std::vector<double>>().size();
    mc.per_repetition.resize(mc.num_repetitions,
                             static_cast<Eigen::Index>(p));
    for (int r = 0; r < mc.num_repetitions; ++r) {
      const auto row = first.at(r).get<std::vector<double>>();
      for (std::size_t j = 0; j < p; ++j)
        mc.per_repetition(r, static_cast<Eigen::Index>(j)) = row[j];
    }
    mc.mean = mc.per_repetition.colwise().mean().transpose();
    spec.kind = PlotKind::distribution;
    plot_montecarlo_weights(
        mc, doc.at("feature_names").get<std::vector<std::string>>(), spec);
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"SurvLIME-style local explanations for survival models"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a synthetic dataset");
  std::string sim_center, sim_coefs, sim_out;
  double sim_radius = 1.0, sim_prob = 0.9, sim_lambda = 1.0, sim_v = 1.0;
  std::optional<double> sim_cap;
  Eigen::Index sim_n = 0;
  std::optional<std::uint64_t> sim_seed;
  sim->add_option("--center", sim_center)->required();
  sim->add_option("--coefficients", sim_coefs)->required();
  sim->add_option("--radius", sim_radius)->required();
  sim->add_option("--prob-event", sim_prob)->required();
  sim->add_option("--lambda", sim_lambda)->required();
  sim->add_option("--v", sim_v)->required();
  sim->add_option("--time-cap", sim_cap);
  sim->add_option("--n", sim_n)->required();
  sim->add_option("--seed", sim_seed);
  sim->add_option("--out", sim_out)->required();

  // fit-cox
  auto* fit = app.add_subcommand("fit-cox", "fit a Cox model to a CSV");
  std::string fit_data, fit_out;
  double fit_split = 0.9;
  std::optional<std::uint64_t> fit_seed;
  fit->add_option("--data", fit_data)->required();
  fit->add_option("--split", fit_split);
  fit->add_option("--seed", fit_seed);
  fit->add_option("--out", fit_out)->required();

  // shared model flags
  auto add_model_flags = [](CLI::App* cmd, ModelSource& src) {
    cmd->add_option("--model", src.model_path);
    cmd->add_option("--model-cmd", src.model_cmd);
    cmd->add_option("--model-kind", src.model_kind);
    cmd->add_option("--adapter-timeout", src.adapter_timeout);
  };

  // explain
  auto* exp = app.add_subcommand("explain", "explain a single individual");
  std::string exp_data, exp_row_values, exp_norm = "2", exp_plot, exp_out;
  ModelSource exp_src;
  std::optional<Eigen::Index> exp_row_index;
  int exp_samples = 1000;
  std::optional<std::uint64_t> exp_seed;
  exp->add_option("--data", exp_data)->required();
  add_model_flags(exp, exp_src);
  exp->add_option("--row-index", exp_row_index);
  exp->add_option("--row-values", exp_row_values);
  exp->add_option("--num-samples", exp_samples);
  exp->add_option("--norm", exp_norm);
  exp->add_option("--seed", exp_seed);
  exp->add_option("--plot", exp_plot);
  exp->add_option("--out", exp_out)->required();

  // montecarlo
  auto* mc = app.add_subcommand("montecarlo",
                                "repeated explanations with averaging");
  std::string mc_data, mc_rows, mc_norm = "2", mc_plot, mc_out;
  ModelSource mc_src;
  int mc_reps = 10, mc_samples = 1000;
  std::optional<std::uint64_t> mc_seed, mc_split_seed;
  double mc_split = 0.9;
  mc->add_option("--data", mc_data)->required();
  add_model_flags(mc, mc_src);
  mc->add_option("--rows", mc_rows)->required();
  mc->add_option("--num-repetitions", mc_reps);
  mc->add_option("--num-samples", mc_samples);
  mc->add_option("--norm", mc_norm);
  mc->add_option("--seed", mc_seed);
  mc->add_option("--split", mc_split);
  mc->add_option("--split-seed", mc_split_seed);
  mc->add_option("--plot", mc_plot);
  mc->add_option("--out", mc_out)->required();

  // plot
  auto* plt = app.add_subcommand("plot", "render a saved explanation");
  std::string plt_explanation, plt_montecarlo, plt_title, plt_out;
  bool plt_colour = true;
  plt->add_option("--explanation", plt_explanation);
  plt->add_option("--montecarlo", plt_montecarlo);
  plt->add_flag("--with-colour,!--no-colour", plt_colour);
  plt->add_option("--title", plt_title);
  plt->add_option("--figure-path,--out", plt_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0)
      return app.exit(e); // --help
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed())
      return cmd_simulate(sim_center, sim_coefs, sim_radius, sim_prob,
                          sim_lambda, sim_v, sim_cap, sim_n, sim_seed,
                          sim_out);
    if (fit->parsed())
      return cmd_fit_cox(fit_data, fit_split, fit_seed, fit_out);
    if (exp->parsed())
      return cmd_explain(exp_data, exp_src, exp_row_index, exp_row_values,
                         exp_samples, exp_norm, exp_seed, exp_plot, exp_out);
    if (mc->parsed())
      return cmd_montecarlo(mc_data, mc_src, mc_rows, mc_reps, mc_samples,
                            mc_norm, mc_seed, mc_split, mc_split_seed,
                            mc_plot, mc_out);
    if (plt->parsed())
      return cmd_plot(plt_explanation, plt_montecarlo, plt_colour, plt_title,
                      plt_out);
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const adapter_error& e) {
    std::cerr << "adapter error: " << e.what() << "\n";
    return 5;
  } catch (const data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const invariant_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
