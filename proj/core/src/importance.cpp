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

#include "dptune/importance.hpp"

#include <algorithm>
#include <set>

#include "dptune/error.hpp"
#include "dptune/measures.hpp"
#include "dptune/rng.hpp"

namespace dptune {

double misclassification_rate(std::span<const double> p, std::span<const int> y) {
  if (p.size() != y.size() || p.empty()) throw Error("misclassification_rate: bad input lengths");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const int predicted = p[i] > kDefaultThreshold ? 1 : 0;
    wrong += predicted != y[i] ? 1 : 0;
  }
  return static_cast<double>(wrong) / static_cast<double>(p.size());
}

std::vector<double> permutation_importance(const TrainedModel& model, const Dataset& test,
                                           std::uint64_t seed) {
  if (test.size() == 0) throw Error("permutation importance needs a non-empty test set");
  if (test.columns() != model.feature_names()) {
    throw ClassifierError("permutation importance: test columns do not match the model");
  }
  const double base = misclassification_rate(model.predict_proba(test.features()), test.labels());
  std::vector<double> scores(test.num_features());
  for (std::size_t j = 0; j < test.num_features(); ++j) {
    Matrix permuted = test.features();
    std::vector<double> column = permuted.column(j);
    Engine engine(derive_seed(seed, j));
    shuffle(column.begin(), column.end(), engine);
    permuted.set_column(j, column);
    scores[j] = misclassification_rate(model.predict_proba(permuted), test.labels()) - base;
  }
  return scores;
}

ImportanceScores::ImportanceScores(std::vector<std::string> names)
    : variables(std::move(names)), values(variables.size()) {}

void ImportanceScores::add_repetition(std::span<const double> per_variable) {
  if (per_variable.size() != variables.size()) {
    throw Error("importance repetition has the wrong number of variables");
  }
  for (std::size_t j = 0; j < per_variable.size(); ++j) values[j].push_back(per_variable[j]);
}

RankTable rank_variables(const ImportanceScores& scores) {
  Treatments t;
  for (std::size_t j = 0; j < scores.variables.size(); ++j) {
    t.emplace_back(scores.variables[j], scores.values[j]);
  }
  return scott_knott_esd(t, true);
}

RankShiftTable rank_shift(const RankTable& optimized, const RankTable& defaults) {
  const auto opt = optimized.entries();
  const auto def = defaults.entries();
  std::set<std::string> a, b;
  for (const auto& e : opt) a.insert(e.treatment);
  for (const auto& e : def) b.insert(e.treatment);
  if (a != b) throw Error("rank_shift: tables rank different variables");

  RankShiftTable out;
  for (const auto& e : opt) {
    const int d = defaults.rank_of(e.treatment);
    out.entries.push_back({e.treatment, e.rank, d, e.rank - d});
  }
  for (const auto& group : optimized.groups()) {
    RankOverlap o;
    o.rank = group.front().rank;
    o.variables = group.size();
    std::size_t same = 0;
    for (const auto& e : group) same += defaults.rank_of(e.treatment) == o.rank ? 1 : 0;
    o.fraction = static_cast<double>(same) / static_cast<double>(group.size());
    out.overlap.push_back(o);
  }
  return out;
}

}  // namespace dptune
