// Copyright 2026 The rtc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// rtc: command-line front end for the threshold/kNN experiments.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rtc/bounds.hpp"
#include "rtc/errors.hpp"
#include "rtc/experiments.hpp"
#include "rtc/io.hpp"
#include "rtc/knn.hpp"
#include "rtc/random.hpp"
#include "rtc/synth.hpp"
#include "rtc/threshold_opt.hpp"

namespace {

using json = nlohmann::json;

constexpr int kDataError = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rtc::Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Writes `text` to `path`, or to stdout when the path is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rtc::Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw rtc::Error("failed writing '" + path + "'");
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
      value = std::stoull(item, &used);
    } catch (const std::exception&) {
      throw UsageError("invalid integer list '" + text + "'");
    }
    if (used != item.size()) throw UsageError("invalid integer list '" + text + "'");
    out.push_back(static_cast<std::size_t>(value));
  }
  if (out.empty()) throw UsageError("empty integer list");
  return out;
}

// Options shared by the experiment-style subcommands.
struct RunOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string out;
  std::string summary;
  std::optional<std::string> metric;
  std::optional<std::string> k_rule;
  std::optional<std::string> grid;
  std::optional<int> workers;
  std::optional<std::size_t> test_size;
  std::optional<int> error_grid;

  // fraud only
  std::optional<std::string> data;
  std::optional<std::string> label_column;
  std::optional<std::string> k_values;
  std::optional<double> downsample;
};

void add_run_options(CLI::App* cmd, RunOptions& o, bool fraud) {
  cmd->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--trials", o.trials, "trials per grid point");
  cmd->add_option("--out", o.out, "results CSV (default stdout)");
  cmd->add_option("--summary", o.summary, "per-group mean/CI CSV");
  cmd->add_option("--metric", o.metric, "metric, e.g. f1, tp_tn_product, f_beta:2");
  cmd->add_option("--workers", o.workers, "worker threads");
  if (fraud) {
    cmd->add_option("--data", o.data, "input CSV");
    cmd->add_option("--label-column", o.label_column, "label column name");
    cmd->add_option("--k-values", o.k_values, "comma-separated k values");
    cmd->add_option("--downsample", o.downsample, "fraction of negatives kept");
  } else {
    cmd->add_option("--k-rule", o.k_rule, "exp1 | exp2 | balanced | uci | extreme");
    cmd->add_option("--grid", o.grid, "comma-separated sample sizes");
    cmd->add_option("--test-size", o.test_size, "fresh test samples per trial");
    cmd->add_option("--error-grid", o.error_grid, "grid points for error sweeps");
  }
}

rtc::ExperimentConfig build_config(const std::string& experiment, const RunOptions& o) {
  auto cfg = rtc::ExperimentConfig::defaults_for(experiment);
  if (!o.config_path.empty()) {
    cfg = rtc::ExperimentConfig::from_json(read_file(o.config_path), cfg);
    if (cfg.experiment != experiment) {
      throw UsageError("config names experiment '" + cfg.experiment + "' but '" + experiment + "' was requested");
    }
  }
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.trials) cfg.trials = *o.trials;
  if (o.k_rule) cfg.k_rule = *o.k_rule;
  if (o.grid) cfg.n_grid = parse_size_list(*o.grid);
  if (o.workers) cfg.workers = *o.workers;
  if (o.test_size) cfg.test_size = *o.test_size;
  if (o.error_grid) cfg.error_grid = *o.error_grid;
  if (o.data) cfg.dataset = *o.data;
  if (o.label_column) cfg.label_column = *o.label_column;
  if (o.k_values) cfg.k_values = parse_size_list(*o.k_values);
  if (o.downsample) cfg.downsample_negative_ratio = *o.downsample;
  if (!o.out.empty()) cfg.output = o.out;
  try {
    if (o.metric) cfg.metric = rtc::parse_cmm(*o.metric);
    cfg.validate();
  } catch (const rtc::DomainError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

void run_and_write(const rtc::ExperimentConfig& cfg, const RunOptions& o) {
  const auto table = rtc::run_experiment(cfg);
  emit(o.out, table.to_csv());
  if (!o.summary.empty()) {
    std::ostringstream summary;
    rtc::write_summary_csv(summary, table);
    emit(o.summary, summary.str());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// --- tune-threshold -------------------------------------------------------

struct TuneOptions {
  std::string data;
  std::string label_column = "label";
  std::string score_column = "score";
  std::string draw_column;
  std::string metric = "f1";
  std::uint64_t seed = 20230601;
  bool deterministic = false;
  std::string out;
};

void run_tune(const TuneOptions& o) {
  std::optional<std::string> draw_column;
  if (!o.draw_column.empty()) draw_column = o.draw_column;
  const auto ds = rtc::load_csv(o.data, o.label_column, draw_column);
  const auto it = std::find(ds.feature_names.begin(), ds.feature_names.end(), o.score_column);
  if (it == ds.feature_names.end()) throw rtc::SchemaError("score column '" + o.score_column + "' not found");
  const auto col = static_cast<Eigen::Index>(std::distance(ds.feature_names.begin(), it));

  std::vector<rtc::ScoredSample> samples(ds.rows());
  rtc::UniformStream draws(o.seed);
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    const double score = ds.covariates(static_cast<Eigen::Index>(i), col);
    if (!(score >= 0.0 && score <= 1.0)) throw rtc::DomainError("scores must lie in [0, 1]");
    samples[i] = {score, ds.labels[i], ds.has_draws() ? ds.draws[i] : draws.next()};
  }
  rtc::CmmSpec spec;
  try {
    spec = rtc::parse_cmm(o.metric);
  } catch (const rtc::DomainError& e) {
    throw UsageError(e.what());
  }
  const auto result = o.deterministic ? rtc::optimize_threshold_deterministic(samples, spec)
                                      : rtc::optimize_threshold(samples, spec);
  json j;
  j["tool_version"] = rtc::kToolVersion;
  j["n"] = ds.rows();
  j["metric"] = spec.to_string();
  j["method"] = o.deterministic ? "deterministic" : "stochastic";
  j["draws"] = ds.has_draws() ? "column:" + o.draw_column : "seed:" + std::to_string(o.seed);
  j["t"] = result.threshold.t;
  j["p"] = result.threshold.p;
  j["value"] = result.metric_value;
  j["prefix_index"] = result.prefix_index;
  emit(o.out, dump(j));
}

// --- fit-knn ----------------------------------------------------------------

struct FitOptions {
  std::string data;
  std::string label_column = "label";
  std::optional<std::size_t> k;
  std::string k_rule = "balanced";
  double r = 1.0;
  std::optional<std::string> at;
  std::optional<int> grid;
  std::string out;
};

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    std::size_t used = 0;
    try {
      out.push_back(std::stod(item, &used));
    } catch (const std::exception&) {
      throw UsageError("invalid number list '" + text + "'");
    }
    if (used != item.size()) throw UsageError("invalid number list '" + text + "'");
  }
  return out;
}

void run_fit(const FitOptions& o) {
  const auto ds = rtc::load_csv(o.data, o.label_column);
  ds.validate();
  const std::size_t k = o.k ? *o.k : rtc::select_k(rtc::KSelectionRule::named(o.k_rule, o.r), ds.rows());
  const rtc::KnnModeld model(ds.covariates, ds.labels, k);

  Eigen::MatrixXd queries;
  if (o.at || o.grid) {
    if (ds.dims() != 1) throw UsageError("--at and --grid need one-dimensional data");
    std::vector<double> xs;
    if (o.at) xs = parse_double_list(*o.at);
    if (o.grid) {
      if (*o.grid < 2) throw UsageError("--grid must be >= 2");
      for (int i = 0; i < *o.grid; ++i) xs.push_back(static_cast<double>(i) / (*o.grid - 1));
    }
    queries.resize(static_cast<Eigen::Index>(xs.size()), 1);
    for (std::size_t i = 0; i < xs.size(); ++i) queries(static_cast<Eigen::Index>(i), 0) = xs[i];
  } else {
    queries = ds.covariates;
  }
  const auto predictions = model.predict_rows(queries);

  json j;
  j["tool_version"] = rtc::kToolVersion;
  j["n"] = ds.rows();
  j["d"] = ds.dims();
  j["k"] = k;
  j["label_mean"] = static_cast<double>(ds.positives()) / static_cast<double>(ds.rows());
  j["predictions"] = json::array();
  for (Eigen::Index i = 0; i < queries.rows(); ++i) {
    std::vector<double> x;
    for (Eigen::Index c = 0; c < queries.cols(); ++c) x.push_back(queries(i, c));
    j["predictions"].push_back({{"x", x}, {"value", predictions[static_cast<std::size_t>(i)]}});
  }
  emit(o.out, dump(j));
}

// --- bounds -------------------------------------------------------------------

struct BoundsOptions {
  rtc::BoundInputs in;
  std::optional<double> sup_err;
  std::optional<double> shattering;
  std::string out;
};

void run_bounds(BoundsOptions o) {
  o.in.shattering_override = o.shattering;
  try {
    o.in.validate();
  } catch (const rtc::DomainError& e) {
    throw UsageError(e.what());
  }
  json j;
  j["tool_version"] = rtc::kToolVersion;
  j["inputs"] = {{"n", o.in.n},
                 {"k", o.in.k},
                 {"r", o.in.r},
                 {"alpha", o.in.alpha},
                 {"L", o.in.lipschitz},
                 {"d", o.in.d},
                 {"p_star", o.in.p_star},
                 {"epsilon_star", o.in.epsilon_star},
                 {"delta", o.in.delta},
                 {"margin_c", o.in.margin_c},
                 {"margin_beta", o.in.margin_beta},
                 {"L_M", o.in.lipschitz_m}};
  if (o.shattering) j["inputs"]["shattering_override"] = *o.shattering;
  j["shattering_bound"] = o.shattering ? *o.shattering : rtc::shattering_bound(o.in.n, o.in.d);
  try {
    const auto b = rtc::uniform_error_bound(o.in);
    j["uniform_error_bound"] = {{"value", b.value},
                                {"bias_term", b.bias_term},
                                {"variance_term", b.variance_term},
                                {"deviation_term", b.deviation_term},
                                {"failure_probability", b.failure_probability}};
  } catch (const rtc::RegimeError& e) {
    j["uniform_error_bound"] = nullptr;
    j["uniform_error_bound_note"] = e.what();
  }
  j["estimation_error_bound"] = rtc::estimation_error_bound(o.in.n, o.in.delta);
  if (o.sup_err) {
    if (*o.sup_err < 0.0) throw UsageError("--sup-err must be >= 0");
    j["sup_err"] = *o.sup_err;
    j["regret_bound"] = rtc::regret_bound(o.in, *o.sup_err);
  }
  emit(o.out, dump(j));
}

// --- generate -------------------------------------------------------------------

struct GenerateOptions {
  std::string problem = "exp1";
  std::size_t n = 1000;
  std::uint64_t seed = 20230601;
  int dim = 1;
  std::string out;
};

void run_generate(const GenerateOptions& o) {
  auto problem = rtc::parse_problem(o.problem);
  if (o.dim != problem.d) problem = problem.with_dimension(o.dim);
  const auto ds = rtc::generate(problem, o.n, o.seed);
  std::ostringstream text;
  text << "# tool_version=" << rtc::kToolVersion << '\n'
       << "# problem=" << o.problem << '\n'
       << "# n=" << o.n << '\n'
       << "# seed=" << o.seed << '\n';
  rtc::write_csv(text, ds);
  emit(o.out, text.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic regression-thresholding classifiers: experiments, tuning, bounds"};
  app.set_version_flag("--version", std::string(rtc::kToolVersion));
  app.require_subcommand(1);

  std::string experiment_name;
  RunOptions experiment_opts;
  auto* experiment = app.add_subcommand("experiment", "run a synthetic experiment");
  experiment->add_option("name", experiment_name, "exp1 | exp2")
      ->required()
      ->check(CLI::IsMember({"exp1", "exp2"}));
  add_run_options(experiment, experiment_opts, false);

  RunOptions fraud_opts;
  auto* fraud = app.add_subcommand("fraud", "kNN threshold pipeline on a labelled CSV");
  add_run_options(fraud, fraud_opts, true);

  TuneOptions tune_opts;
  auto* tune = app.add_subcommand("tune-threshold", "optimal (stochastic) threshold for scored data");
  tune->add_option("--data", tune_opts.data, "CSV with score and label columns")->required();
  tune->add_option("--label-column", tune_opts.label_column);
  tune->add_option("--score-column", tune_opts.score_column);
  tune->add_option("--draw-column", tune_opts.draw_column, "stored uniform draws (default: generated)");
  tune->add_option("--metric", tune_opts.metric);
  tune->add_option("--seed", tune_opts.seed, "seed for generated draws");
  tune->add_flag("--deterministic", tune_opts.deterministic, "restrict to p = 0");
  tune->add_option("--out", tune_opts.out);

  FitOptions fit_opts;
  auto* fit = app.add_subcommand("fit-knn", "fit a kNN regressor and report predictions");
  fit->add_option("--data", fit_opts.data, "training CSV")->required();
  fit->add_option("--label-column", fit_opts.label_column);
  auto* k_opt = fit->add_option("--k", fit_opts.k, "neighbour count");
  fit->add_option("--k-rule", fit_opts.k_rule, "rule used when --k is absent")->excludes(k_opt);
  fit->add_option("--r", fit_opts.r, "UCI degree passed to the k rule");
  fit->add_option("--at", fit_opts.at, "comma-separated 1-d query points");
  fit->add_option("--grid", fit_opts.grid, "evenly spaced 1-d query points on [0, 1]");
  fit->add_option("--out", fit_opts.out);

  BoundsOptions bounds_opts;
  auto* bounds = app.add_subcommand("bounds", "evaluate the finite-sample bounds");
  bounds->add_option("--n", bounds_opts.in.n)->required();
  bounds->add_option("--k", bounds_opts.in.k);
  bounds->add_option("--r", bounds_opts.in.r);
  bounds->add_option("--alpha", bounds_opts.in.alpha);
  bounds->add_option("--L", bounds_opts.in.lipschitz);
  bounds->add_option("--d", bounds_opts.in.d);
  bounds->add_option("--p-star", bounds_opts.in.p_star);
  bounds->add_option("--epsilon-star", bounds_opts.in.epsilon_star);
  bounds->add_option("--delta", bounds_opts.in.delta);
  bounds->add_option("--margin-c", bounds_opts.in.margin_c);
  bounds->add_option("--margin-beta", bounds_opts.in.margin_beta);
  bounds->add_option("--L-M", bounds_opts.in.lipschitz_m);
  bounds->add_option("--shattering", bounds_opts.shattering, "override S(n)");
  bounds->add_option("--sup-err", bounds_opts.sup_err, "observed uniform error for the regret bound");
  bounds->add_option("--out", bounds_opts.out);

  GenerateOptions gen_opts;
  auto* gen = app.add_subcommand("generate", "write a synthetic dataset as CSV");
  gen->add_option("--problem", gen_opts.problem, "exp1 | exp2_uci:R | exp2_nonuci:R | singleton:E | constant:C");
  gen->add_option("--n", gen_opts.n);
  gen->add_option("--seed", gen_opts.seed);
  gen->add_option("--dim", gen_opts.dim, "covariate dimension (constant problems)");
  gen->add_option("--out", gen_opts.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*experiment) {
      run_and_write(build_config(experiment_name, experiment_opts), experiment_opts);
    } else if (*fraud) {
      run_and_write(build_config("fraud_pipeline", fraud_opts), fraud_opts);
    } else if (*tune) {
      run_tune(tune_opts);
    } else if (*fit) {
      run_fit(fit_opts);
    } else if (*bounds) {
      run_bounds(bounds_opts);
    } else if (*gen) {
      run_generate(gen_opts);
    }
  } catch (const UsageError& e) {
    std::cerr << "rtc: " << e.what() << '\n';
    return kUsageError;
  } catch (const rtc::Error& e) {
    std::cerr << "rtc: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "rtc: " << e.what() << '\n';
    return kDataError;
  }
  return 0;
}
