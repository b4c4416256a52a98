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

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "dptune/bootstrap.hpp"
#include "dptune/classifiers.hpp"
#include "dptune/learners.hpp"
#include "dptune/measures.hpp"
#include "dptune/rng.hpp"
#include "dptune/stats.hpp"
#include "dptune/synthetic.hpp"

namespace {

using namespace dptune;

PredictionVector random_predictions(std::size_t n) {
  std::mt19937_64 gen(n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PredictionVector v;
  for (std::size_t i = 0; i < n; ++i) {
    v.p.push_back(u(gen));
    v.y.push_back(static_cast<int>(i % 3 == 0));
  }
  return v;
}

void BM_Auc(benchmark::State& state) {
  const auto v = random_predictions(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(auc(v));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Auc)->RangeMultiplier(8)->Range(64, 32768)->Complexity();

void BM_AllMeasures(benchmark::State& state) {
  const auto v = random_predictions(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(v));
}
BENCHMARK(BM_AllMeasures)->Arg(1000);

void BM_ScottKnottEsd(benchmark::State& state) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> z(0.0, 1.0);
  Treatments t;
  for (int k = 0; k < state.range(0); ++k) {
    std::vector<double> values(100);
    for (auto& x : values) x = 0.1 * k + z(gen);
    t.push_back({"t" + std::to_string(k), values});
  }
  for (auto _ : state) benchmark::DoNotOptimize(scott_knott_esd(t));
}
BENCHMARK(BM_ScottKnottEsd)->Arg(4)->Arg(16)->Arg(64);

void BM_MannWhitney(benchmark::State& state) {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> z(0.0, 1.0);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> a(n), b(n);
  for (auto& x : a) x = z(gen);
  for (auto& x : b) x = z(gen) + 0.2;
  for (auto _ : state) benchmark::DoNotOptimize(mann_whitney(a, b));
}
BENCHMARK(BM_MannWhitney)->Arg(10)->Arg(100)->Arg(1000);

void BM_GrowTree(benchmark::State& state) {
  const Dataset d = make_nonlinear(static_cast<std::size_t>(state.range(0)), 10, 1);
  TreeParams params;
  for (auto _ : state) {
    Engine rng(0);
    benchmark::DoNotOptimize(grow_tree(d.features(), d.labels(), {}, params, rng));
  }
}
BENCHMARK(BM_GrowTree)->Arg(600)->Arg(5000);

void BM_DrawBootstrap(benchmark::State& state) {
  std::size_t r = 0;
  for (auto _ : state) benchmark::DoNotOptimize(draw_bootstrap(static_cast<std::size_t>(state.range(0)), r++));
}
BENCHMARK(BM_DrawBootstrap)->Arg(1000)->Arg(100000);

void BM_OutOfSampleBootstrap(benchmark::State& state) {
  const Dataset d = make_nonlinear(600, 10, 2);
  const std::string id = state.range(0) == 0 ? "cart" : "boost";
  BootstrapOptions opts;
  opts.repetitions = 10;
  for (auto _ : state) benchmark::DoNotOptimize(out_of_sample_bootstrap(d, id, default_setting(id), opts));
  state.SetLabel(id);
}
BENCHMARK(BM_OutOfSampleBootstrap)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
