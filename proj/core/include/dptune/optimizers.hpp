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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dptune/dataset.hpp"
#include "dptune/measures.hpp"
#include "dptune/parameters.hpp"

namespace dptune {

enum class Technique { grid, random, ga, de };

const char* to_string(Technique t);
Technique technique_from_string(std::string_view name);

enum class Direction { maximize, minimize };

// Scores parameter settings. Scores are cached by setting id, so asking for
// the same setting twice returns the identical value without recomputation.
class Objective {
 public:
  using ScoreFn = std::function<double(const ParameterSetting&)>;

  Objective(ScoreFn fn, Direction direction);

  double evaluate(const ParameterSetting& setting, bool* was_cached = nullptr);
  // True when `candidate` is strictly better than `incumbent`.
  bool better(double candidate, double incumbent) const;
  Direction direction() const { return direction_; }
  std::size_t distinct_evaluations() const { return cache_.size(); }

 private:
  ScoreFn fn_;
  Direction direction_;
  std::map<std::string, double> cache_;
};

struct BootstrapObjectiveConfig {
  Measure measure = Measure::auc;
  std::size_t repetitions = 100;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;
};

// Mean out-of-sample bootstrap score of `measure`. Every setting is scored on
// the same splits (same master seed), so comparisons reflect the setting only.
Objective bootstrap_objective(const Dataset& dataset, std::string classifier_id,
                              const BootstrapObjectiveConfig& config);

struct Evaluation {
  ParameterSetting setting;
  double score = 0.0;
  bool cached = false;
};

struct OptimizationResult {
  Technique technique = Technique::grid;
  std::string config_json;  // technique parameters as a JSON object
  ParameterSetting best_setting;
  double best_score = 0.0;
  std::vector<Evaluation> evaluations;  // in request order
  std::size_t generations = 0;          // GA / DE only
  double wall_clock_seconds = 0.0;

  std::string to_json() const;
};

// Cartesian product of each parameter's first min(budget, |candidates|)
// values; the first parameter varies slowest.
std::vector<ParameterSetting> grid_candidates(const ParameterSpace& space, std::size_t budget = 5);

OptimizationResult grid_search(const ParameterSpace& space, Objective& objective,
                               std::size_t budget = 5);

struct RandomSearchConfig {
  std::size_t iterations = 20;
  std::uint64_t seed = 0;
  // Sample without replacement from the full candidate product instead of
  // drawing each parameter independently.
  bool distinct = false;
};

OptimizationResult random_search(const ParameterSpace& space, Objective& objective,
                                 const RandomSearchConfig& config);

// One gene in [0,1] per parameter.
using Genome = std::vector<double>;

// Gene x selects candidates[min(floor(x * C), C - 1)].
ParameterSetting decode_genome(const ParameterSpace& space, const Genome& genome);

struct GeneticConfig {
  std::size_t population_size = 20;
  double crossover_prob = 0.8;
  double mutation_prob = 0.1;
  std::size_t elitism = 2;
  std::size_t stall_generations = 5;
  std::size_t max_generations = 50;
  std::uint64_t seed = 0;
  std::vector<Genome> initial_population;  // optional, population_size genomes
};

OptimizationResult genetic_search(const ParameterSpace& space, Objective& objective,
                                  const GeneticConfig& config);

enum class DeStrategy { rand1bin };

struct DifferentialEvolutionConfig {
  std::size_t population_size = 20;
  double crossover_prob = 0.9;
  double differential_weight = 0.8;
  DeStrategy strategy = DeStrategy::rand1bin;
  std::size_t stall_generations = 5;
  std::size_t max_generations = 50;
  std::uint64_t seed = 0;
  std::vector<Genome> initial_population;  // optional, population_size genomes
};

OptimizationResult differential_evolution(const ParameterSpace& space, Objective& objective,
                                          const DifferentialEvolutionConfig& config);

}  // namespace dptune
