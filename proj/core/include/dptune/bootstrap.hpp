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
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "dptune/classifiers.hpp"
#include "dptune/dataset.hpp"
#include "dptune/measures.hpp"
#include "dptune/parameters.hpp"

namespace dptune {

struct BootstrapSplit {
  std::vector<std::size_t> train;  // N draws with replacement
  std::vector<std::size_t> test;   // rows never drawn, ascending
  std::size_t attempts = 1;
};

inline constexpr std::size_t kMaxBootstrapAttempts = 100;

// Redraws (same engine) while the out-of-bag set is empty; throws Error after
// kMaxBootstrapAttempts. Requires n >= 2.
BootstrapSplit draw_bootstrap(std::size_t n, std::uint64_t seed);
inline BootstrapSplit draw_bootstrap(const Dataset& d, std::uint64_t seed) {
  return draw_bootstrap(d.size(), seed);
}

struct PerformanceDistribution {
  std::string classifier_id;
  ParameterSetting setting;
  std::string dataset;
  Measure measure = Measure::auc;
  std::vector<double> values;  // indexed by repetition

  double mean() const;
  // Sample standard deviation; 0 for fewer than two values.
  double sd() const;
};

struct StabilityReport {
  double sigma_optimized = 0.0;
  double sigma_default = 0.0;
  double ratio = 1.0;     // sigma_optimized / sigma_default
  bool infinite = false;  // sigma_default == 0 < sigma_optimized
};

// Throws Error when the two distributions describe different
// (dataset, classifier, measure) triples.
StabilityReport stability_ratio(const PerformanceDistribution& optimized,
                                const PerformanceDistribution& defaults);

struct BootstrapOptions {
  std::size_t repetitions = 100;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;
};

struct RepetitionContext {
  std::size_t repetition;
  const TrainedModel& model;
  const Dataset& train;
  const Dataset& test;
  std::uint64_t seed;  // per-repetition seed reserved for the hook
};

// Called once per repetition, possibly from several threads at once.
using RepetitionHook = std::function<void(const RepetitionContext&)>;

struct BootstrapResult {
  std::vector<PerformanceDistribution> distributions;  // all_measures() order
  std::vector<PerformanceVector> per_repetition;
  std::size_t redraws = 0;  // splits rejected for a single-class side

  const PerformanceDistribution& at(Measure m) const {
    return distributions[static_cast<std::size_t>(m)];
  }
};

// Seed of split attempt `attempt` of repetition `repetition`.
std::uint64_t split_seed(std::uint64_t master_seed, std::size_t repetition, std::size_t attempt);
// Seed handed to the classifier in repetition `repetition`.
std::uint64_t training_seed(std::uint64_t master_seed, std::size_t repetition);

// Out-of-sample bootstrap: each repetition trains on a bootstrap resample and
// scores all measures on the rows left out of it. Splits where either side
// holds a single class are redrawn with the next attempt seed.
BootstrapResult out_of_sample_bootstrap(const Dataset& dataset, std::string_view classifier_id,
                                        const ParameterSetting& setting,
                                        const BootstrapOptions& options,
                                        const RepetitionHook& hook = {});

}  // namespace dptune
