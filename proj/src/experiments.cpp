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

#include "rtc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "rtc/bounds.hpp"
#include "rtc/classify.hpp"
#include "rtc/io.hpp"
#include "rtc/knn.hpp"
#include "rtc/random.hpp"
#include "rtc/synth.hpp"
#include "rtc/threshold_opt.hpp"

namespace rtc {
namespace {

using json = nlohmann::json;

enum ExperimentTag : std::uint64_t { kExp1 = 1, kExp2 = 2, kFraud = 3 };
enum DataTag : std::uint64_t { kTrainData = 1, kTestData = 2, kSplit = 3, kValidationDraws = 4, kTestDraws = 5 };

// Runs job(i) for i in [0, count) on `workers` threads. Results are stored by
// index so the output never depends on scheduling.
template <typename Result>
std::vector<Result> run_jobs(std::size_t count, int workers, const std::function<Result(std::size_t)>& job) {
  std::vector<Result> results(count);
  const auto threads = static_cast<std::size_t>(std::clamp<int>(workers, 1, 256));
  if (threads == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = job(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(threads, count); ++w) {
    pool.emplace_back([&]() {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          results[i] = job(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

std::vector<ScoredSample> score_rows(const KnnModeld& model, const LabeledDataset& ds) {
  return ds.scored(model.predict_rows(ds.covariates));
}

double test_metric(const CmmSpec& spec, const StochasticThreshold& th, std::span<const ScoredSample> test) {
  return evaluate_cmm(spec, empirical_confusion(th, test));
}

// Best deterministic t among `grid` evenly spaced values in [0, 1]; first
// maximum wins.
StochasticThreshold grid_threshold(std::span<const ScoredSample> samples, const CmmSpec& spec, int grid) {
  StochasticThreshold best{0.0, 0.0};
  double best_value = -1.0;
  for (int i = 0; i < grid; ++i) {
    const StochasticThreshold th{static_cast<double>(i) / static_cast<double>(grid - 1), 0.0};
    const double value = evaluate_cmm(spec, empirical_confusion(th, samples));
    if (value > best_value) {
      best_value = value;
      best = th;
    }
  }
  return best;
}

std::string metric_label(const CmmSpec& spec) { return spec == CmmSpec::f1() ? "f1" : spec.to_string(); }

std::vector<std::pair<std::string, std::string>> base_metadata(const ExperimentConfig& cfg) {
  return {{"tool", "rtc"},
          {"tool_version", kToolVersion},
          {"experiment", cfg.experiment},
          {"config_hash", cfg.hash()},
          {"seed", std::to_string(cfg.master_seed)},
          {"metric", cfg.metric.to_string()},
          {"k_rule", cfg.k_rule},
          {"trials", std::to_string(cfg.trials)}};
}

template <typename T>
std::vector<T> flatten(std::vector<std::vector<T>> nested) {
  std::vector<T> out;
  for (auto& v : nested) out.insert(out.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  return out;
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

// ---------------------------------------------------------------------------
// Config

std::vector<std::size_t> default_n_grid() {
  std::vector<std::size_t> out;
  for (int i = 0; i < 10; ++i) {
    out.push_back(static_cast<std::size_t>(std::llround(std::pow(10.0, 2.0 + 2.0 * i / 9.0))));
  }
  return out;
}

ExperimentConfig ExperimentConfig::defaults_for(const std::string& experiment) {
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  cfg.n_grid = default_n_grid();
  if (experiment == "exp1") {
    cfg.metric = CmmSpec::tp_tn_product();
    cfg.k_rule = "exp1";
  } else if (experiment == "exp2") {
    cfg.metric = CmmSpec::f1();
    cfg.k_rule = "exp2";
  } else if (experiment == "fraud_pipeline") {
    cfg.metric = CmmSpec::f1();
    cfg.k_rule = "fixed";
    cfg.n_grid.clear();
  } else {
    throw DomainError("unknown experiment '" + experiment + "'");
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  if (experiment != "exp1" && experiment != "exp2" && experiment != "fraud_pipeline") {
    throw DomainError("unknown experiment '" + experiment + "'");
  }
  if (trials < 1) throw DomainError("config: trials must be >= 1");
  if (workers < 1) throw DomainError("config: workers must be >= 1");
  metric.validate();
  if (experiment != "fraud_pipeline") {
    if (n_grid.empty()) throw DomainError("config: n_grid must not be empty");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
      if (n_grid[i] < 2) throw DomainError("config: every n must be >= 2");
      if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw DomainError("config: n_grid must be strictly increasing");
    }
    (void)KSelectionRule::named(k_rule, 0.5);
  } else {
    if (dataset.empty()) throw DomainError("config: fraud_pipeline needs a dataset path");
    if (k_values.empty()) throw DomainError("config: k_values must not be empty");
    for (auto k : k_values) {
      if (k < 1) throw DomainError("config: k values must be >= 1");
    }
  }
  if (test_size < 1 || error_grid < 2 || threshold_grid < 2 || population_grid < 2) {
    throw DomainError("config: sizes must be positive (grids >= 2)");
  }
}

std::string ExperimentConfig::canonical_json() const {
  json j;
  j["experiment"] = experiment;
  j["n_grid"] = n_grid;
  j["trials"] = trials;
  j["master_seed"] = master_seed;
  j["metric"] = metric.to_string();
  j["k_rule"] = k_rule;
  j["test_size"] = test_size;
  j["error_grid"] = error_grid;
  j["threshold_grid"] = threshold_grid;
  j["population_grid"] = population_grid;
  if (experiment == "fraud_pipeline") {
    j["dataset"] = dataset;
    j["label_column"] = label_column;
    j["k_values"] = k_values;
    j["downsample_negative_ratio"] =
        downsample_negative_ratio ? json(*downsample_negative_ratio) : json(nullptr);
  }
  return j.dump();
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : canonical_json()) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text, ExperimentConfig base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config JSON: ") + e.what(), 1);
  }
  try {
    if (j.contains("experiment")) {
      const std::string name = j["experiment"].get<std::string>();
      if (name != base.experiment) base = defaults_for(name);
    }
    if (j.contains("n_grid")) base.n_grid = j["n_grid"].get<std::vector<std::size_t>>();
    if (j.contains("trials")) base.trials = j["trials"].get<int>();
    if (j.contains("master_seed")) base.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("metric")) base.metric = parse_cmm(j["metric"].get<std::string>());
    if (j.contains("k_rule")) base.k_rule = j["k_rule"].get<std::string>();
    if (j.contains("output")) base.output = j["output"].get<std::string>();
    if (j.contains("workers")) base.workers = j["workers"].get<int>();
    if (j.contains("test_size")) base.test_size = j["test_size"].get<std::size_t>();
    if (j.contains("error_grid")) base.error_grid = j["error_grid"].get<int>();
    if (j.contains("threshold_grid")) base.threshold_grid = j["threshold_grid"].get<int>();
    if (j.contains("population_grid")) base.population_grid = j["population_grid"].get<int>();
    if (j.contains("dataset")) base.dataset = j["dataset"].get<std::string>();
    if (j.contains("label_column")) base.label_column = j["label_column"].get<std::string>();
    if (j.contains("k_values")) base.k_values = j["k_values"].get<std::vector<std::size_t>>();
    if (j.contains("downsample_negative_ratio") && !j["downsample_negative_ratio"].is_null()) {
      base.downsample_negative_ratio = j["downsample_negative_ratio"].get<double>();
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("config JSON: ") + e.what());
  }
  return base;
}

// ---------------------------------------------------------------------------
// Tables

void ResultTable::write_csv(std::ostream& out) const {
  for (const auto& [key, value] : metadata) out << "# " << key << '=' << value << '\n';
  out << "trial,seed,n,k,r,imbalance_ratio,method,metric,value,bound\n";
  for (const auto& row : rows) {
    out << row.trial << ',' << row.seed << ',' << row.n << ',' << row.k << ',' << optional_cell(row.r) << ','
        << optional_cell(row.imbalance_ratio) << ',' << row.method << ',' << row.metric << ','
        << format_double(row.value) << ',' << optional_cell(row.bound) << '\n';
  }
}

std::string ResultTable::to_csv() const {
  std::ostringstream out;
  write_csv(out);
  return out.str();
}

std::vector<SummaryRow> summarize(const ResultTable& table) {
  using Key = std::tuple<std::size_t, std::size_t, std::string, std::string>;
  std::map<Key, std::vector<double>> groups;
  for (const auto& row : table.rows) groups[{row.n, row.k, row.method, row.metric}].push_back(row.value);

  std::vector<SummaryRow> out;
  for (const auto& [key, values] : groups) {
    SummaryRow s;
    std::tie(s.n, s.k, s.method, s.metric) = key;
    s.trials = static_cast<int>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
    s.std_error = s.sd / std::sqrt(static_cast<double>(values.size()));
    s.ci_low = s.mean - 1.96 * s.std_error;
    s.ci_high = s.mean + 1.96 * s.std_error;
    out.push_back(s);
  }
  return out;
}

void write_summary_csv(std::ostream& out, const ResultTable& table) {
  for (const auto& [key, value] : table.metadata) out << "# " << key << '=' << value << '\n';
  out << "n,k,method,metric,trials,mean,sd,std_error,ci_low,ci_high\n";
  for (const auto& s : summarize(table)) {
    out << s.n << ',' << s.k << ',' << s.method << ',' << s.metric << ',' << s.trials << ','
        << format_double(s.mean) << ',' << format_double(s.sd) << ',' << format_double(s.std_error) << ','
        << format_double(s.ci_low) << ',' << format_double(s.ci_high) << '\n';
  }
}

const SummaryRow& find_summary(const std::vector<SummaryRow>& rows, std::size_t n, const std::string& method,
                               const std::string& metric) {
  for (const auto& s : rows) {
    if (s.n == n && s.method == method && s.metric == metric) return s;
  }
  throw DomainError("no summary for n=" + std::to_string(n) + " method=" + method + " metric=" + metric);
}

// ---------------------------------------------------------------------------
// Experiment 1

ResultTable run_experiment1(const ExperimentConfig& cfg) {
  cfg.validate();
  const SyntheticProblem problem = SyntheticProblem::exp1();
  const double optimum =
      optimize_population_threshold(problem.eta, cfg.metric, cfg.population_grid, cfg.population_grid).metric_value;

  const std::size_t trials = static_cast<std::size_t>(cfg.trials);
  const std::size_t jobs = cfg.n_grid.size() * trials;
  auto nested = run_jobs<std::vector<ResultRow>>(jobs, cfg.workers, [&](std::size_t job) {
    const std::size_t n_index = job / trials;
    const int trial = static_cast<int>(job % trials);
    const std::size_t n = cfg.n_grid[n_index];
    const std::uint64_t seed = derive_seed(cfg.master_seed, {kExp1, n_index, static_cast<std::uint64_t>(trial)});

    const LabeledDataset train = generate(problem, n, derive_seed(seed, {kTrainData}));
    const LabeledDataset test = generate(problem, cfg.test_size, derive_seed(seed, {kTestData}));
    const std::size_t k = select_k(KSelectionRule::named(cfg.k_rule), n);
    const KnnModeld model(train.covariates, train.labels, k);

    const auto train_samples = score_rows(model, train);
    const auto test_samples = score_rows(model, test);
    const auto stochastic = optimize_threshold(train_samples, cfg.metric);
    const auto deterministic = optimize_threshold_deterministic(train_samples, cfg.metric);

    std::vector<ResultRow> rows;
    for (const auto& [method, result] : {std::pair{"stochastic", stochastic}, std::pair{"deterministic", deterministic}}) {
      ResultRow row;
      row.trial = trial;
      row.seed = seed;
      row.n = n;
      row.k = k;
      row.method = method;
      row.metric = "regret";
      row.value = optimum - test_metric(cfg.metric, result.threshold, test_samples);
      rows.push_back(row);
    }
    return rows;
  });

  ResultTable table;
  table.metadata = base_metadata(cfg);
  table.metadata.emplace_back("population_optimum", format_double(optimum));
  table.metadata.emplace_back("test_size", std::to_string(cfg.test_size));
  table.rows = flatten(std::move(nested));
  return table;
}

// ---------------------------------------------------------------------------
// Experiment 2

ResultTable run_experiment2(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string metric = metric_label(cfg.metric);

  struct PerN {
    double r;
    std::size_t k;
    SyntheticProblem problems[2];
    double optimum[2];
  };
  std::vector<PerN> per_n;
  for (std::size_t n : cfg.n_grid) {
    const double r = 1.0 / std::sqrt(static_cast<double>(n));
    PerN entry{r, select_k(KSelectionRule::named(cfg.k_rule, r), n),
               {SyntheticProblem::exp2_uci(r), SyntheticProblem::exp2_nonuci(r)},
               {0.0, 0.0}};
    for (int e = 0; e < 2; ++e) {
      entry.optimum[e] = optimize_population_threshold(entry.problems[e].eta, cfg.metric, cfg.population_grid,
                                                       cfg.population_grid)
                             .metric_value;
    }
    per_n.push_back(std::move(entry));
  }

  const std::size_t trials = static_cast<std::size_t>(cfg.trials);
  const std::size_t jobs = cfg.n_grid.size() * trials;
  auto nested = run_jobs<std::vector<ResultRow>>(jobs, cfg.workers, [&](std::size_t job) {
    const std::size_t n_index = job / trials;
    const int trial = static_cast<int>(job % trials);
    const std::size_t n = cfg.n_grid[n_index];
    const PerN& setup = per_n[n_index];
    const std::uint64_t seed = derive_seed(cfg.master_seed, {kExp2, n_index, static_cast<std::uint64_t>(trial)});

    std::vector<ResultRow> rows;
    static const char* names[2] = {"eta1", "eta2"};
    for (int e = 0; e < 2; ++e) {
      const SyntheticProblem& problem = setup.problems[e];
      // Both regression functions share covariates and uniforms.
      const LabeledDataset train = generate(problem, n, derive_seed(seed, {kTrainData}));
      const LabeledDataset test = generate(problem, cfg.test_size, derive_seed(seed, {kTestData}));
      const KnnModeld model(train.covariates, train.labels, setup.k);

      BoundInputs bound_in;
      bound_in.n = n;
      bound_in.k = setup.k;
      bound_in.r = e == 0 ? setup.r : 1.0;
      bound_in.lipschitz = e == 0 ? 1.0 : 1.0 / setup.r;
      std::optional<double> linf_bound;
      try {
        linf_bound = uniform_error_bound(bound_in).value;
      } catch (const RegimeError&) {
      }

      const auto train_samples = score_rows(model, train);
      const auto test_samples = score_rows(model, test);
      const auto grid_th = grid_threshold(train_samples, cfg.metric, cfg.threshold_grid);
      const auto stochastic = optimize_threshold(train_samples, cfg.metric);

      const auto push = [&](const std::string& name, double value, std::optional<double> bound) {
        ResultRow row;
        row.trial = trial;
        row.seed = seed;
        row.n = n;
        row.k = setup.k;
        row.r = setup.r;
        row.method = names[e];
        row.metric = name;
        row.value = value;
        row.bound = bound;
        rows.push_back(row);
      };
      push("linf", uniform_error(model, problem.eta, cfg.error_grid), linf_bound);
      push("l1", average_error(model, problem.eta, cfg.error_grid), std::nullopt);
      push(metric + "_regret", setup.optimum[e] - test_metric(cfg.metric, grid_th, test_samples), std::nullopt);
      push(metric + "_regret_stochastic", setup.optimum[e] - test_metric(cfg.metric, stochastic.threshold, test_samples),
           std::nullopt);
    }
    return rows;
  });

  ResultTable table;
  table.metadata = base_metadata(cfg);
  table.metadata.emplace_back("test_size", std::to_string(cfg.test_size));
  table.metadata.emplace_back("error_grid", std::to_string(cfg.error_grid) + "+knots");
  table.rows = flatten(std::move(nested));
  return table;
}

// ---------------------------------------------------------------------------
// Fraud-detection style pipeline

ResultTable run_fraud_pipeline(const ExperimentConfig& cfg) {
  cfg.validate();
  const LabeledDataset data = load_csv(cfg.dataset, cfg.label_column);
  data.validate();
  const std::string metric = metric_label(cfg.metric);

  auto nested = run_jobs<std::vector<ResultRow>>(static_cast<std::size_t>(cfg.trials), cfg.workers, [&](std::size_t job) {
    const int trial = static_cast<int>(job);
    const std::uint64_t seed = derive_seed(cfg.master_seed, {kFraud, job});

    SplitSpec spec;
    spec.seed = derive_seed(seed, {kSplit});
    spec.downsample_negative_ratio = cfg.downsample_negative_ratio;
    const DatasetSplit parts = split(data, spec);

    const std::size_t kept_pos = parts.train.positives() + parts.validation.positives() + parts.test.positives();
    const std::size_t kept = parts.train.rows() + parts.validation.rows() + parts.test.rows();
    const std::optional<double> imbalance =
        kept_pos > 0 ? std::optional<double>(static_cast<double>(kept - kept_pos) / static_cast<double>(kept_pos))
                     : std::nullopt;

    const ZScoreResult standardized = zscore(parts.train);
    const LabeledDataset& train = standardized.data;
    LabeledDataset validation = standardized.transform.apply(parts.validation);
    LabeledDataset test = standardized.transform.apply(parts.test);
    {
      UniformStream draws(derive_seed(seed, {kValidationDraws}));
      validation.draws.resize(validation.rows());
      for (auto& z : validation.draws) z = draws.next();
    }
    {
      UniformStream draws(derive_seed(seed, {kTestDraws}));
      test.draws.resize(test.rows());
      for (auto& z : test.draws) z = draws.next();
    }

    std::size_t k_max = 1;
    for (auto k : cfg.k_values) k_max = std::max(k_max, std::min(k, train.rows()));
    const KnnModeld model(train.covariates, train.labels, k_max);
    const auto neighbor_table = [&](const LabeledDataset& ds) {
      std::vector<std::vector<int>> out(ds.rows());
      for (std::size_t i = 0; i < ds.rows(); ++i) {
        out[i] = model.neighbor_labels(ds.covariates.row(static_cast<Eigen::Index>(i)).transpose(), k_max);
      }
      return out;
    };
    const auto validation_neighbors = neighbor_table(validation);
    const auto test_neighbors = neighbor_table(test);
    const auto scores_for = [](const std::vector<std::vector<int>>& neighbors, std::size_t k) {
      std::vector<double> out(neighbors.size());
      for (std::size_t i = 0; i < neighbors.size(); ++i) {
        std::size_t sum = 0;
        for (std::size_t j = 0; j < k; ++j) sum += static_cast<std::size_t>(neighbors[i][j]);
        out[i] = static_cast<double>(sum) / static_cast<double>(k);
      }
      return out;
    };

    std::vector<ResultRow> rows;
    for (std::size_t k_requested : cfg.k_values) {
      const std::size_t k = std::min(k_requested, train.rows());
      const auto validation_samples = validation.scored(scores_for(validation_neighbors, k));
      const auto test_samples = test.scored(scores_for(test_neighbors, k));
      const auto stochastic = optimize_threshold(validation_samples, cfg.metric);
      const auto deterministic = optimize_threshold_deterministic(validation_samples, cfg.metric);
      for (const auto& [method, result] :
           {std::pair{"stochastic", stochastic}, std::pair{"deterministic", deterministic}}) {
        ResultRow row;
        row.trial = trial;
        row.seed = seed;
        row.n = train.rows();
        row.k = k;
        row.imbalance_ratio = imbalance;
        row.method = method;
        row.metric = metric;
        row.value = test_metric(cfg.metric, result.threshold, test_samples);
        rows.push_back(row);
      }
    }
    return rows;
  });

  ResultTable table;
  table.metadata = base_metadata(cfg);
  table.metadata.emplace_back("dataset", cfg.dataset);
  table.metadata.emplace_back("zscore", "population_sd_fit_on_train");
  table.metadata.emplace_back("split", "0.6/0.2/0.2 stratified");
  table.rows = flatten(std::move(nested));
  return table;
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment == "exp1") return run_experiment1(cfg);
  if (cfg.experiment == "exp2") return run_experiment2(cfg);
  if (cfg.experiment == "fraud_pipeline") return run_fraud_pipeline(cfg);
  throw DomainError("unknown experiment '" + cfg.experiment + "'");
}

}  // namespace rtc
