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

#include "dptune/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dptune/error.hpp"
#include "dptune/parallel.hpp"
#include "dptune/rng.hpp"

namespace dptune {
namespace {

bool has_both_classes(const std::vector<int>& labels, std::span<const std::size_t> rows) {
  bool pos = false, neg = false;
  for (std::size_t r : rows) {
    (labels[r] == 1 ? pos : neg) = true;
    if (pos && neg) return true;
  }
  return false;
}

}  // namespace

BootstrapSplit draw_bootstrap(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw Error("bootstrap needs at least two rows");
  Engine engine(seed);
  BootstrapSplit split;
  split.train.resize(n);
  std::vector<unsigned char> drawn(n);
  for (std::size_t attempt = 1; attempt <= kMaxBootstrapAttempts; ++attempt) {
    std::fill(drawn.begin(), drawn.end(), 0);
    for (auto& r : split.train) {
      r = uniform_index(engine, n);
      drawn[r] = 1;
    }
    split.test.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (!drawn[i]) split.test.push_back(i);
    }
    if (!split.test.empty()) {
      split.attempts = attempt;
      return split;
    }
  }
  throw Error("bootstrap: out-of-bag set empty after " + std::to_string(kMaxBootstrapAttempts) +
              " attempts");
}

double PerformanceDistribution::mean() const {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double PerformanceDistribution::sd() const {
  if (values.size() < 2) return 0.0;
  const double m = mean();
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

StabilityReport stability_ratio(const PerformanceDistribution& optimized,
                                const PerformanceDistribution& defaults) {
  if (optimized.dataset != defaults.dataset || optimized.classifier_id != defaults.classifier_id ||
      optimized.measure != defaults.measure) {
    throw Error("stability_ratio: distributions differ in dataset, classifier or measure");
  }
  StabilityReport r;
  r.sigma_optimized = optimized.sd();
  r.sigma_default = defaults.sd();
  if (r.sigma_default > 0.0) {
    r.ratio = r.sigma_optimized / r.sigma_default;
  } else if (r.sigma_optimized > 0.0) {
    r.ratio = INFINITY;
    r.infinite = true;
  } else {
    r.ratio = 1.0;
  }
  return r;
}

std::uint64_t split_seed(std::uint64_t master_seed, std::size_t repetition, std::size_t attempt) {
  return derive_seed(master_seed, stream_key("split"), repetition, attempt);
}

std::uint64_t training_seed(std::uint64_t master_seed, std::size_t repetition) {
  return derive_seed(master_seed, stream_key("train"), repetition);
}

BootstrapResult out_of_sample_bootstrap(const Dataset& dataset, std::string_view classifier_id,
                                        const ParameterSetting& setting,
                                        const BootstrapOptions& options,
                                        const RepetitionHook& hook) {
  if (options.repetitions == 0) throw Error("bootstrap needs at least one repetition");
  const std::size_t reps = options.repetitions;
  std::vector<PerformanceVector> per_rep(reps);
  std::vector<std::size_t> redraws(reps, 0);

  parallel_for(reps, options.threads, [&](std::size_t r) {
    try {
      BootstrapSplit split;
      std::size_t attempt = 0;
      while (true) {
        if (attempt == kMaxBootstrapAttempts) {
          throw Error("no split with both classes on each side after " +
                      std::to_string(kMaxBootstrapAttempts) + " attempts");
        }
        split = draw_bootstrap(dataset, split_seed(options.master_seed, r, attempt));
        if (has_both_classes(dataset.labels(), split.train) &&
            has_both_classes(dataset.labels(), split.test)) {
          break;
        }
        ++attempt;
      }
      redraws[r] = attempt;
      const Dataset train_set = dataset.subset(split.train);
      const Dataset test_set = dataset.subset(split.test);
      const TrainedModel model =
          train(classifier_id, setting, train_set, training_seed(options.master_seed, r));
      PredictionVector v{model.predict_proba(test_set), test_set.labels()};
      per_rep[r] = evaluate(v);
      if (hook) {
        hook({r, model, train_set, test_set,
              derive_seed(options.master_seed, stream_key("hook"), r)});
      }
    } catch (const std::exception& e) {
      throw Error("bootstrap repetition " + std::to_string(r) + " (" + std::string(classifier_id) +
                  ", " + setting.id() + "): " + e.what());
    }
  });

  BootstrapResult result;
  result.per_repetition = std::move(per_rep);
  result.redraws = std::accumulate(redraws.begin(), redraws.end(), std::size_t{0});
  for (Measure m : all_measures()) {
    PerformanceDistribution d;
    d.classifier_id = std::string(classifier_id);
    d.setting = setting;
    d.dataset = dataset.name();
    d.measure = m;
    d.values.reserve(reps);
    for (const auto& pv : result.per_repetition) d.values.push_back(pv[m]);
    result.distributions.push_back(std::move(d));
  }
  return result;
}

}  // namespace dptune
