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

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dptune/error.hpp"
#include "dptune/experiment.hpp"
#include "dptune/synthetic.hpp"

namespace {

constexpr int kSuccess = 0;
constexpr int kPartialFailure = 1;
constexpr int kTotalFailure = 2;

void print_failures(const std::vector<dptune::Failure>& failures) {
  for (const auto& f : failures) {
    std::cerr << "failed: dataset=" << (f.dataset.empty() ? "-" : f.dataset)
              << " classifier=" << (f.classifier.empty() ? "-" : f.classifier) << " stage=" << f.stage
              << ": " << f.message << '\n';
  }
}

dptune::ExperimentConfig configure(const std::string& path, const std::string& out, unsigned threads,
                                   bool skip_inclusion) {
  dptune::ExperimentConfig cfg = dptune::load_config(path);
  if (!out.empty()) cfg.output_dir = out;
  if (threads > 0) cfg.threads = threads;
  if (skip_inclusion) cfg.skip_inclusion_check = true;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dptune: hyperparameter optimization workbench for defect prediction models"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  unsigned threads = 0;
  bool skip_inclusion = false;

  auto* run = app.add_subcommand("run", "Tune, evaluate and analyse every dataset/classifier pair");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  run->add_option("--threads", threads, "Worker threads (overrides threads)")->check(CLI::PositiveNumber);
  run->add_flag("--skip-inclusion-check", skip_inclusion, "Keep datasets that fail the EPV/defective-rate check");

  auto* compare = app.add_subcommand("compare", "Ratio of each optimizer's result to grid search");
  compare->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  compare->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  compare->add_option("--threads", threads, "Worker threads (overrides threads)")->check(CLI::PositiveNumber);

  std::string kind;
  std::string csv_path;
  std::size_t rows = 600;
  std::size_t features = 10;
  std::uint64_t seed = 0;
  auto* generate = app.add_subcommand("generate", "Write a synthetic dataset as CSV");
  generate->add_option("kind", kind, "separable or nonlinear")
      ->required()
      ->check(CLI::IsMember({"separable", "nonlinear"}));
  generate->add_option("--out", csv_path, "CSV path")->required();
  generate->add_option("--rows", rows, "Number of modules")->check(CLI::Range(2, 1 << 24));
  generate->add_option("--features", features, "Number of metrics")->check(CLI::Range(2, 10000));
  generate->add_option("--seed", seed, "Generator seed")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kTotalFailure;
  }

  try {
    if (*run) {
      const auto cfg = configure(config_path, out_dir, threads, skip_inclusion);
      const auto report = dptune::run_experiment(cfg);
      dptune::emit_plot_data(report, cfg.output_dir);
      dptune::write_summary(report, cfg.output_dir);
      print_failures(report.failures);
      if (report.combinations.empty()) return kTotalFailure;
      return report.failures.empty() ? kSuccess : kPartialFailure;
    }
    if (*compare) {
      const auto cfg = configure(config_path, out_dir, threads, false);
      const auto report = dptune::compare_optimizers(cfg);
      dptune::write_comparison(report, cfg.output_dir);
      print_failures(report.failures);
      if (report.rows.empty()) return kTotalFailure;
      return report.failures.empty() ? kSuccess : kPartialFailure;
    }
    if (*generate) {
      const dptune::Dataset d = kind == "separable"
                                    ? dptune::make_separable(rows, features / 2, features - features / 2, seed)
                                    : dptune::make_nonlinear(rows, features, seed);
      dptune::save_dataset(d, csv_path);
      return kSuccess;
    }
  } catch (const dptune::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kTotalFailure;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return kTotalFailure;
  }
  return kTotalFailure;
}
