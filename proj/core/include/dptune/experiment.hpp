// Copyright 2026 The dptune Authors.
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dptune/bootstrap.hpp"
#include "dptune/dataset.hpp"
#include "dptune/importance.hpp"
#include "dptune/measures.hpp"
#include "dptune/optimizers.hpp"
#include "dptune/preprocess.hpp"
#include "dptune/stats.hpp"

namespace dptune {

struct DatasetSource {
  std::string name;  // defaults to the file stem or the generator name
  // CSV input
  std::filesystem::path path;
  std::string label_column = "bug";
  std::string id_column;
  // Generated input: "separable" or "nonlinear"
  std::string generator;
  std::size_t rows = 600;
  std::size_t features = 10;     // nonlinear: total metrics
  std::size_t informative = 3;   // separable
  std::size_t noise = 3;         // separable
  double label_noise = 0.05;     // nonlinear
  std::uint64_t seed = 0;
};

struct OptimizerSpec {
  Technique technique = Technique::grid;
  std::size_t grid_budget = 5;
  RandomSearchConfig random;
  GeneticConfig genetic;
  DifferentialEvolutionConfig evolution;
  bool seed_given = false;  // otherwise derived from the master seed
};

struct ExperimentConfig {
  std::vector<DatasetSource> datasets;
  std::vector<std::string> classifiers;
  // The first entry drives the default-vs-optimized analyses.
  std::vector<OptimizerSpec> optimizers;
  Measure measure = Measure::auc;
  std::size_t repetitions = 100;
  // Repetitions per objective evaluation during tuning; 0 = `repetitions`.
  std::size_t optimization_repetitions = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::filesystem::path output_dir = "dptune-out";
  bool skip_inclusion_check = false;
  bool log_transform = true;
  double correlation_threshold = 0.7;
  double redundancy_threshold = 0.9;
  bool importance = true;
  bool cross_application = true;
};

// Throws ConfigError with the offending key; relative dataset paths resolve
// against `base_dir`.
ExperimentConfig parse_config(const std::string& json_text,
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

struct Failure {
  std::string dataset;
  std::string classifier;  // empty for dataset-level failures
  std::string stage;
  std::string message;
};

struct DatasetSummary {
  std::string name;
  std::size_t rows = 0;
  std::size_t metrics_in = 0;
  std::vector<std::string> metrics_kept;
  InclusionVerdict inclusion;
  RemovalLog removed;
};

struct MeasureAnalysis {
  Measure measure = Measure::auc;
  PerformanceDelta delta;
  StabilityReport stability;
};

struct CombinationReport {
  std::string dataset;
  std::string classifier;
  ParameterSetting default_setting;
  ParameterSetting optimized_setting;
  std::vector<OptimizationResult> optimizations;  // one per configured technique
  BootstrapResult default_eval;
  BootstrapResult optimized_eval;
  std::vector<MeasureAnalysis> analyses;  // all_measures() order
  std::optional<ImportanceScores> importance_default;
  std::optional<ImportanceScores> importance_optimized;
  RankTable importance_ranks_default;
  RankTable importance_ranks_optimized;
  std::optional<RankShiftTable> rank_shift;
};

struct ClassifierTransferability {
  std::string classifier;
  TransferabilityReport report;
};

struct RunReport {
  Measure measure = Measure::auc;
  std::size_t repetitions = 0;
  std::vector<DatasetSummary> datasets;
  std::vector<CombinationReport> combinations;
  std::vector<Failure> failures;
  std::vector<ClassifierTransferability> transferability;
  DoubleScottKnottResult ranks_default;
  DoubleScottKnottResult ranks_optimized;
  // Default and optimized variants ranked together ("<id>:default", "<id>:optimized").
  DoubleScottKnottResult ranks_joint;

  bool all_failed() const { return combinations.empty() && !failures.empty(); }
};

// Runs the whole pipeline. Dataset-level and combination-level failures are
// recorded in the report; only configuration problems throw.
RunReport run_experiment(const ExperimentConfig& config);

// Writes performance.csv, deltas.csv, effects.csv, stability.csv,
// importance.csv, rankshift.csv, transferability.csv, timings.csv,
// ranks_default.csv, ranks_optimized.csv. Missing data yields header-only files.
void emit_plot_data(const RunReport& report, const std::filesystem::path& dir);

// summary.json: everything above plus the optimization traces.
void write_summary(const RunReport& report, const std::filesystem::path& dir);

struct ComparisonRow {
  std::string dataset;
  std::string classifier;
  Technique technique = Technique::grid;
  Measure measure = Measure::auc;
  double mean = 0.0;
  double grid_mean = 0.0;
  double ratio = 1.0;  // mean / grid_mean
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  std::vector<CombinationReport> combinations;  // optimizations only, no evaluations
  std::vector<Failure> failures;

  bool all_failed() const { return rows.empty() && !failures.empty(); }
};

// Throws ConfigError unless grid and at least one other technique are selected.
ComparisonReport compare_optimizers(const ExperimentConfig& config);

// comparison.csv, timings.csv and summary.json.
void write_comparison(const ComparisonReport& report, const std::filesystem::path& dir);

}  // namespace dptune
