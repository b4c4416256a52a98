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

#include "dptune/optimizers.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <numeric>

#include "dptune/bootstrap.hpp"
#include "dptune/error.hpp"
#include "dptune/rng.hpp"

namespace dptune {
namespace {

using Clock = std::chrono::steady_clock;

nlohmann::json setting_json(const ParameterSetting& s) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, value] : s.entries()) {
    std::visit([&](const auto& v) { j[name] = v; }, value);
  }
  return j;
}

// Keeps the evaluation trace and the incumbent; first strictly better wins.
class Tracker {
 public:
  Tracker(Objective& objective, Technique technique) : objective_(objective) {
    result_.technique = technique;
  }

  double score(const ParameterSetting& setting) {
    bool cached = false;
    double s = 0.0;
    try {
      s = objective_.evaluate(setting, &cached);
    } catch (const std::exception& e) {
      throw Error(std::string(to_string(result_.technique)) + ": evaluating setting '" +
                  setting.id() + "' failed: " + e.what());
    }
    if (result_.evaluations.empty() || objective_.better(s, result_.best_score)) {
      result_.best_score = s;
      result_.best_setting = setting;
    }
    result_.evaluations.push_back({setting, s, cached});
    return s;
  }

  double best() const { return result_.best_score; }

  OptimizationResult finish(nlohmann::json config, Clock::time_point start) {
    result_.config_json = config.dump();
    result_.wall_clock_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return std::move(result_);
  }

  OptimizationResult& result() { return result_; }

 private:
  Objective& objective_;
  OptimizationResult result_;
};

Genome random_genome(std::size_t dims, Engine& engine) {
  Genome g(dims);
  for (auto& x : g) x = uniform01(engine);
  return g;
}

std::vector<Genome> initial_population(const std::vector<Genome>& given, std::size_t size,
                                       std::size_t dims, Engine& engine) {
  if (!given.empty()) {
    if (given.size() != size) throw Error("initial population size does not match population_size");
    for (const auto& g : given) {
      if (g.size() != dims) throw Error("initial genome length does not match the space");
    }
    return given;
  }
  std::vector<Genome> pop;
  pop.reserve(size);
  for (std::size_t i = 0; i < size; ++i) pop.push_back(random_genome(dims, engine));
  return pop;
}

}  // namespace

const char* to_string(Technique t) {
  switch (t) {
    case Technique::grid:
      return "grid";
    case Technique::random:
      return "random";
    case Technique::ga:
      return "ga";
    case Technique::de:
      return "de";
  }
  return "?";
}

Technique technique_from_string(std::string_view name) {
  for (Technique t : {Technique::grid, Technique::random, Technique::ga, Technique::de}) {
    if (name == to_string(t)) return t;
  }
  throw ConfigError("unknown optimization technique '" + std::string(name) + "'");
}

Objective::Objective(ScoreFn fn, Direction direction) : fn_(std::move(fn)), direction_(direction) {}

double Objective::evaluate(const ParameterSetting& setting, bool* was_cached) {
  const std::string key = setting.id();
  if (const auto it = cache_.find(key); it != cache_.end()) {
    if (was_cached) *was_cached = true;
    return it->second;
  }
  const double s = fn_(setting);
  cache_.emplace(key, s);
  if (was_cached) *was_cached = false;
  return s;
}

bool Objective::better(double candidate, double incumbent) const {
  return direction_ == Direction::maximize ? candidate > incumbent : candidate < incumbent;
}

Objective bootstrap_objective(const Dataset& dataset, std::string classifier_id,
                              const BootstrapObjectiveConfig& config) {
  auto data = std::make_shared<const Dataset>(dataset);
  auto fn = [data, id = std::move(classifier_id), config](const ParameterSetting& setting) {
    BootstrapOptions options;
    options.repetitions = config.repetitions;
    options.master_seed = config.master_seed;
    options.threads = config.threads;
    return out_of_sample_bootstrap(*data, id, setting, options).at(config.measure).mean();
  };
  return Objective(std::move(fn), higher_is_better(config.measure) ? Direction::maximize
                                                                    : Direction::minimize);
}

std::string OptimizationResult::to_json() const {
  nlohmann::json j;
  j["technique"] = to_string(technique);
  j["config"] = nlohmann::json::parse(config_json.empty() ? "{}" : config_json);
  j["best_setting"] = setting_json(best_setting);
  j["best_setting_id"] = best_setting.id();
  j["best_score"] = best_score;
  j["generations"] = generations;
  j["wall_clock_seconds"] = wall_clock_seconds;
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& e : evaluations) {
    trace.push_back({{"setting", e.setting.id()}, {"score", e.score}, {"cached", e.cached}});
  }
  j["evaluations"] = std::move(trace);
  return j.dump();
}

std::vector<ParameterSetting> grid_candidates(const ParameterSpace& space, std::size_t budget) {
  if (budget == 0) throw Error("grid budget must be at least 1");
  const auto& specs = space.specs();
  std::vector<std::size_t> limits;
  for (const auto& s : specs) limits.push_back(std::min(budget, s.candidates.size()));
  std::vector<ParameterSetting> out;
  std::vector<std::size_t> idx(specs.size(), 0);
  while (true) {
    out.push_back(space.setting_at(idx));
    // odometer: last parameter turns fastest
    std::size_t k = specs.size();
    while (k > 0) {
      --k;
      if (++idx[k] < limits[k]) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
    if (specs.empty()) return out;
  }
}

OptimizationResult grid_search(const ParameterSpace& space, Objective& objective,
                               std::size_t budget) {
  const auto start = Clock::now();
  Tracker tracker(objective, Technique::grid);
  for (const auto& s : grid_candidates(space, budget)) tracker.score(s);
  return tracker.finish({{"budget", budget}}, start);
}

OptimizationResult random_search(const ParameterSpace& space, Objective& objective,
                                 const RandomSearchConfig& config) {
  if (config.iterations == 0) throw Error("random search needs at least one iteration");
  const auto start = Clock::now();
  Tracker tracker(objective, Technique::random);
  Engine engine(config.seed);
  const auto& specs = space.specs();
  if (config.distinct) {
    // budget larger than any list keeps the full product
    auto all = grid_candidates(space, static_cast<std::size_t>(-1));
    shuffle(all.begin(), all.end(), engine);
    const std::size_t take = std::min(config.iterations, all.size());
    for (std::size_t i = 0; i < take; ++i) tracker.score(all[i]);
  } else {
    std::vector<std::size_t> idx(specs.size());
    for (std::size_t it = 0; it < config.iterations; ++it) {
      for (std::size_t k = 0; k < specs.size(); ++k) {
        idx[k] = uniform_index(engine, specs[k].candidates.size());
      }
      tracker.score(space.setting_at(idx));
    }
  }
  return tracker.finish({{"iterations", config.iterations},
                         {"seed", config.seed},
                         {"distinct", config.distinct}},
                        start);
}

ParameterSetting decode_genome(const ParameterSpace& space, const Genome& genome) {
  const auto& specs = space.specs();
  if (genome.size() != specs.size()) throw Error("genome length does not match the space");
  std::vector<std::size_t> idx(specs.size());
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const std::size_t c = specs[k].candidates.size();
    const double x = std::clamp(genome[k], 0.0, 1.0);
    idx[k] = std::min(static_cast<std::size_t>(std::floor(x * static_cast<double>(c))), c - 1);
  }
  return space.setting_at(idx);
}

OptimizationResult genetic_search(const ParameterSpace& space, Objective& objective,
                                  const GeneticConfig& config) {
  if (config.population_size < 2) throw Error("GA population must hold at least two genomes");
  if (config.elitism > config.population_size) throw Error("GA elitism exceeds the population");
  const auto start = Clock::now();
  const nlohmann::json cfg = {{"population_size", config.population_size},
                              {"crossover_prob", config.crossover_prob},
                              {"mutation_prob", config.mutation_prob},
                              {"elitism", config.elitism},
                              {"stall_generations", config.stall_generations},
                              {"max_generations", config.max_generations},
                              {"seed", config.seed}};
  Tracker tracker(objective, Technique::ga);
  Engine engine(config.seed);
  const std::size_t dims = space.dimensions();
  const std::size_t size = config.population_size;

  std::vector<Genome> pop = initial_population(config.initial_population, size, dims, engine);
  std::vector<double> fitness(size);
  for (std::size_t i = 0; i < size; ++i) fitness[i] = tracker.score(decode_genome(space, pop[i]));

  const bool maximize = objective.direction() == Direction::maximize;
  std::size_t stall = 0;
  std::size_t generation = 0;
  while (generation < config.max_generations && stall < config.stall_generations) {
    ++generation;
    const double best_before = tracker.best();

    std::vector<std::size_t> order(size);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return objective.better(fitness[a], fitness[b]);
    });

    // fitness-proportional weights on the oriented score, shifted to start at 0
    std::vector<double> weight(size);
    double lowest = INFINITY;
    for (std::size_t i = 0; i < size; ++i) {
      weight[i] = maximize ? fitness[i] : -fitness[i];
      lowest = std::min(lowest, weight[i]);
    }
    double total = 0.0;
    for (auto& w : weight) {
      w -= lowest;
      total += w;
    }
    auto pick_parent = [&]() -> std::size_t {
      if (!(total > 0.0)) return uniform_index(engine, size);
      double u = uniform01(engine) * total;
      for (std::size_t i = 0; i < size; ++i) {
        if (u < weight[i]) return i;
        u -= weight[i];
      }
      return order.front();
    };

    std::vector<Genome> next;
    std::vector<double> next_fitness;
    next.reserve(size);
    for (std::size_t e = 0; e < config.elitism; ++e) {
      next.push_back(pop[order[e]]);
      next_fitness.push_back(fitness[order[e]]);
    }
    while (next.size() < size) {
      const Genome& a = pop[pick_parent()];
      const Genome& b = pop[pick_parent()];
      Genome child(dims);
      for (std::size_t g = 0; g < dims; ++g) {
        child[g] = uniform01(engine) < config.crossover_prob ? b[g] : a[g];
        if (uniform01(engine) < config.mutation_prob) child[g] = uniform01(engine);
      }
      next_fitness.push_back(tracker.score(decode_genome(space, child)));
      next.push_back(std::move(child));
    }
    pop = std::move(next);
    fitness = std::move(next_fitness);
    stall = objective.better(tracker.best(), best_before) ? 0 : stall + 1;
  }
  tracker.result().generations = generation;
  return tracker.finish(cfg, start);
}

OptimizationResult differential_evolution(const ParameterSpace& space, Objective& objective,
                                          const DifferentialEvolutionConfig& config) {
  if (config.population_size < 4) throw Error("DE/rand/1/bin needs a population of at least four");
  const auto start = Clock::now();
  const nlohmann::json cfg = {{"population_size", config.population_size},
                              {"crossover_prob", config.crossover_prob},
                              {"differential_weight", config.differential_weight},
                              {"strategy", "rand/1/bin"},
                              {"stall_generations", config.stall_generations},
                              {"max_generations", config.max_generations},
                              {"seed", config.seed}};
  Tracker tracker(objective, Technique::de);
  Engine engine(config.seed);
  const std::size_t dims = space.dimensions();
  const std::size_t size = config.population_size;

  std::vector<Genome> pop = initial_population(config.initial_population, size, dims, engine);
  std::vector<double> fitness(size);
  for (std::size_t i = 0; i < size; ++i) fitness[i] = tracker.score(decode_genome(space, pop[i]));

  std::size_t stall = 0;
  std::size_t generation = 0;
  while (dims > 0 && generation < config.max_generations && stall < config.stall_generations) {
    ++generation;
    const double best_before = tracker.best();
    std::vector<Genome> next = pop;
    std::vector<double> next_fitness = fitness;
    for (std::size_t i = 0; i < size; ++i) {
      std::size_t a, b, c;
      do a = uniform_index(engine, size); while (a == i);
      do b = uniform_index(engine, size); while (b == i || b == a);
      do c = uniform_index(engine, size); while (c == i || c == a || c == b);
      const std::size_t forced = uniform_index(engine, dims);
      Genome trial = pop[i];
      for (std::size_t g = 0; g < dims; ++g) {
        if (g == forced || uniform01(engine) < config.crossover_prob) {
          const double v = pop[a][g] + config.differential_weight * (pop[b][g] - pop[c][g]);
          trial[g] = std::clamp(v, 0.0, 1.0);
        }
      }
      const double s = tracker.score(decode_genome(space, trial));
      if (!objective.better(fitness[i], s)) {
        next[i] = std::move(trial);
        next_fitness[i] = s;
      }
    }
    pop = std::move(next);
    fitness = std::move(next_fitness);
    stall = objective.better(tracker.best(), best_before) ? 0 : stall + 1;
  }
  tracker.result().generations = generation;
  return tracker.finish(cfg, start);
}

}  // namespace dptune
