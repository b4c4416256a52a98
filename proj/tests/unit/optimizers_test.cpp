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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <json.hpp>
#include <set>

#include "dptune/classifiers.hpp"
#include "dptune/error.hpp"
#include "dptune/optimizers.hpp"
#include "dptune/synthetic.hpp"

using namespace dptune;

namespace {

std::size_t candidate_index(const ParameterSpec& spec, const ParamValue& v) {
  for (std::size_t i = 0; i < spec.candidates.size(); ++i) {
    if (spec.candidates[i] == v) return i;
  }
  throw std::logic_error("value not in candidates");
}

// Noise-free landscape with a unique maximum at `target` (candidate indices).
Objective landscape(const ParameterSpace& space, std::vector<std::size_t> target, int* calls = nullptr) {
  return Objective(
      [space, target, calls](const ParameterSetting& s) {
        if (calls) ++*calls;
        double score = 0.0;
        for (std::size_t k = 0; k < space.specs().size(); ++k) {
          const auto idx = candidate_index(space.specs()[k], s.at(space.specs()[k].name));
          score -= std::abs(static_cast<double>(idx) - static_cast<double>(target[k])) * (1.0 + 0.1 * k);
        }
        return score;
      },
      Direction::maximize);
}

double oracle_best(const ParameterSpace& space, Objective& obj) {
  double best = -INFINITY;
  for (const auto& s : grid_candidates(space, 1000)) best = std::max(best, obj.evaluate(s));
  return best;
}

void check_trace(const OptimizationResult& r, Direction dir) {
  REQUIRE_FALSE(r.evaluations.empty());
  double ext = r.evaluations.front().score;
  for (const auto& e : r.evaluations) {
    ext = dir == Direction::maximize ? std::max(ext, e.score) : std::min(ext, e.score);
  }
  CHECK(r.best_score == ext);
  // first setting reaching the extremum wins
  for (const auto& e : r.evaluations) {
    if (e.score == ext) {
      CHECK(e.setting == r.best_setting);
      break;
    }
  }
  CHECK(r.wall_clock_seconds >= 0.0);
}

}  // namespace

TEST_CASE("grid candidates follow the budget") {
  const auto boost = grid_candidates(parameter_space("boost"), 5);
  CHECK(boost.size() == 20);
  std::set<double> iters;
  for (const auto& s : boost) iters.insert(s.numeric("iterations"));
  CHECK(iters == std::set<double>{1, 10, 20, 30, 40});
  CHECK(boost.front().id() == "iterations=1;winnow=FALSE;model_type=rules");
  CHECK(boost[1].id() == "iterations=1;winnow=FALSE;model_type=tree");
  CHECK(grid_candidates(parameter_space("rf"), 5).size() == 5);
  const auto one = grid_candidates(parameter_space("nnet"), 1);
  REQUIRE(one.size() == 1);
  CHECK(one.front().numeric("hidden_units") == 1.0);
  CHECK(grid_candidates(parameter_space("nnet"), 3).size() == 9);
  const auto empty = grid_candidates(parameter_space("glm"));
  REQUIRE(empty.size() == 1);
  CHECK(empty.front().empty());
}

TEST_CASE("objective caches by setting") {
  int calls = 0;
  const auto space = parameter_space("rf");
  Objective obj = landscape(space, {2}, &calls);
  const auto s = default_setting("rf");
  bool cached = true;
  const double a = obj.evaluate(s, &cached);
  CHECK_FALSE(cached);
  const double b = obj.evaluate(s, &cached);
  CHECK(cached);
  CHECK(a == b);
  CHECK(calls == 1);
  CHECK(obj.distinct_evaluations() == 1);
  CHECK(obj.better(2.0, 1.0));
  CHECK_FALSE(obj.better(1.0, 1.0));
  Objective min([](const ParameterSetting&) { return 0.0; }, Direction::minimize);
  CHECK(min.better(1.0, 2.0));
}

TEST_CASE("grid search finds the extreme of a monotone objective") {
  const auto space = parameter_space("rf");
  Objective obj([](const ParameterSetting& s) { return s.numeric("trees"); }, Direction::maximize);
  const auto r = grid_search(space, obj);
  CHECK(r.best_setting.numeric("trees") == 50.0);
  CHECK(r.evaluations.size() == 5);
  check_trace(r, Direction::maximize);

  Objective lower([](const ParameterSetting& s) { return s.numeric("trees"); }, Direction::minimize);
  CHECK(grid_search(space, lower).best_setting.numeric("trees") == 10.0);

  Objective flat([](const ParameterSetting&) { return 1.0; }, Direction::maximize);
  const auto glm = grid_search(parameter_space("glm"), flat);
  CHECK(glm.evaluations.size() == 1);
  CHECK(glm.best_setting.empty());
}

TEST_CASE("ties keep the first evaluated setting") {
  Objective flat([](const ParameterSetting&) { return 0.5; }, Direction::maximize);
  const auto r = grid_search(parameter_space("boost"), flat);
  CHECK(r.best_setting == grid_candidates(parameter_space("boost")).front());
}

TEST_CASE("evaluation failures name the setting") {
  Objective broken(
      [](const ParameterSetting& s) -> double {
        if (s.numeric("trees") == 30.0) throw std::runtime_error("boom");
        return 0.0;
      },
      Direction::maximize);
  CHECK_THROWS_WITH(grid_search(parameter_space("rf"), broken),
                    Catch::Matchers::ContainsSubstring("trees=30") && Catch::Matchers::ContainsSubstring("boom"));
}

TEST_CASE("random search behaviour") {
  const auto space = parameter_space("boost");
  Objective obj = landscape(space, {3, 1, 0});
  RandomSearchConfig cfg;
  cfg.iterations = 1;
  cfg.seed = 4;
  const auto single = random_search(space, obj, cfg);
  REQUIRE(single.evaluations.size() == 1);
  CHECK(single.best_setting == single.evaluations.front().setting);

  cfg.iterations = 20;
  const auto a = random_search(space, obj, cfg);
  const auto b = random_search(space, obj, cfg);
  REQUIRE(a.evaluations.size() == 20);
  for (std::size_t i = 0; i < 20; ++i) CHECK(a.evaluations[i].setting == b.evaluations[i].setting);
  CHECK(a.best_score <= grid_search(space, obj).best_score);
  check_trace(a, Direction::maximize);

  cfg.distinct = true;
  const auto d = random_search(space, obj, cfg);
  std::set<std::string> ids;
  for (const auto& e : d.evaluations) ids.insert(e.setting.id());
  CHECK(ids.size() == 20);
  CHECK(d.best_score == oracle_best(space, obj));
}

TEST_CASE("decode_genome maps genes to candidate bins") {
  const auto space = parameter_space("boost");
  CHECK(decode_genome(space, {0.0, 0.0, 0.0}) == space.default_setting());
  const auto last = decode_genome(space, {0.999, 0.999, 0.999});
  CHECK(last.numeric("iterations") == 40.0);
  CHECK(last.logical("winnow"));
  CHECK(last.factor("model_type") == "tree");
  CHECK(decode_genome(space, {0.5, 0.0, 0.0}).numeric("iterations") == 20.0);
  CHECK(decode_genome(space, {1.0, 1.0, 1.0}).numeric("iterations") == 40.0);
  CHECK_THROWS_AS(decode_genome(space, {0.5}), Error);

  // monotone and surjective for a numeric parameter
  std::set<double> seen;
  double previous = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double v = decode_genome(space, {i / 1000.0, 0.0, 0.0}).numeric("iterations");
    CHECK(v >= previous);
    previous = v;
    seen.insert(v);
  }
  CHECK(seen.size() == 5);
}

TEST_CASE("GA finds a single-parameter optimum within ten generations") {
  const auto space = parameter_space("rf");
  Objective obj = landscape(space, {3});
  GeneticConfig cfg;
  cfg.seed = 8;
  cfg.max_generations = 10;
  const auto r = genetic_search(space, obj, cfg);
  CHECK(r.best_setting.numeric("trees") == 40.0);
  CHECK(r.generations <= 10);
  check_trace(r, Direction::maximize);
}

TEST_CASE("GA without variation returns the best initial individual") {
  const auto space = parameter_space("boost");
  Objective obj = landscape(space, {4, 1, 1});
  GeneticConfig cfg;
  cfg.population_size = 4;
  cfg.crossover_prob = 0.0;
  cfg.mutation_prob = 0.0;
  cfg.elitism = 4;
  cfg.initial_population = {{0.1, 0.1, 0.1}, {0.5, 0.9, 0.1}, {0.3, 0.2, 0.8}, {0.0, 0.0, 0.0}};
  const auto r = genetic_search(space, obj, cfg);
  double best = -INFINITY;
  ParameterSetting arg;
  for (const auto& g : cfg.initial_population) {
    const auto s = decode_genome(space, g);
    if (obj.evaluate(s) > best) {
      best = obj.evaluate(s);
      arg = s;
    }
  }
  CHECK(r.best_setting == arg);
  CHECK(r.best_score == best);
  CHECK(r.generations == cfg.stall_generations);
}

TEST_CASE("GA and DE runs are reproducible") {
  const auto space = parameter_space("nnet");
  Objective obj = landscape(space, {2, 3});
  GeneticConfig g;
  g.seed = 3;
  const auto g1 = genetic_search(space, obj, g);
  const auto g2 = genetic_search(space, obj, g);
  REQUIRE(g1.evaluations.size() == g2.evaluations.size());
  for (std::size_t i = 0; i < g1.evaluations.size(); ++i) {
    CHECK(g1.evaluations[i].setting == g2.evaluations[i].setting);
  }
  DifferentialEvolutionConfig d;
  d.seed = 3;
  const auto d1 = differential_evolution(space, obj, d);
  const auto d2 = differential_evolution(space, obj, d);
  REQUIRE(d1.evaluations.size() == d2.evaluations.size());
  for (std::size_t i = 0; i < d1.evaluations.size(); ++i) {
    CHECK(d1.evaluations[i].setting == d2.evaluations[i].setting);
  }
  check_trace(d1, Direction::maximize);
}

TEST_CASE("DE finds the optimum of a two-parameter landscape") {
  const auto space = parameter_space("nnet");
  Objective obj = landscape(space, {4, 2});
  DifferentialEvolutionConfig cfg;
  cfg.seed = 21;
  const auto r = differential_evolution(space, obj, cfg);
  CHECK(r.best_score == oracle_best(space, obj));
}

TEST_CASE("DE with an identical population stagnates") {
  const auto space = parameter_space("boost");
  Objective obj = landscape(space, {4, 1, 1});
  DifferentialEvolutionConfig cfg;
  cfg.population_size = 5;
  cfg.initial_population.assign(5, Genome{0.3, 0.3, 0.3});
  const auto r = differential_evolution(space, obj, cfg);
  for (const auto& e : r.evaluations) CHECK(e.setting == decode_genome(space, {0.3, 0.3, 0.3}));
  CHECK_THROWS_AS(differential_evolution(space, obj, DifferentialEvolutionConfig{3}), Error);
}

TEST_CASE("optimization results serialize to JSON") {
  const auto space = parameter_space("rf");
  Objective obj = landscape(space, {1});
  const auto r = grid_search(space, obj);
  const auto j = nlohmann::json::parse(r.to_json());
  CHECK(j.at("technique") == "grid");
  CHECK(j.at("evaluations").size() == 5);
  CHECK(j.at("best_setting").at("trees") == 20.0);
  CHECK(j.at("wall_clock_seconds").get<double>() >= 0.0);
  CHECK(technique_from_string("de") == Technique::de);
  CHECK_THROWS_AS(technique_from_string("bayes"), Error);
}

TEST_CASE("grid-optimized boost beats its default on the interaction dataset") {
  const Dataset d = make_nonlinear(300, 4, 2);
  BootstrapObjectiveConfig cfg;
  cfg.repetitions = 5;
  cfg.master_seed = 11;
  Objective obj = bootstrap_objective(d, "boost", cfg);
  const auto r = grid_search(parameter_space("boost"), obj);
  CHECK(r.best_setting.numeric("iterations") > 1.0);
  CHECK(r.best_score >= obj.evaluate(default_setting("boost")));
}
