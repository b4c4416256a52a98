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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dptune/classifiers.hpp"
#include "dptune/dataset.hpp"
#include "dptune/stats.hpp"

namespace dptune {

// Fraction of rows misclassified at the strict 0.5 cut-off.
double misclassification_rate(std::span<const double> p, std::span<const int> y);

// For each variable j: shuffle column j of `test` (seed derive_seed(seed, j)),
// and report misclassification(permuted) - misclassification(original).
std::vector<double> permutation_importance(const TrainedModel& model, const Dataset& test,
                                           std::uint64_t seed);

// Importance values per variable, one per repetition.
struct ImportanceScores {
  std::vector<std::string> variables;
  std::vector<std::vector<double>> values;  // [variable][repetition]

  explicit ImportanceScores(std::vector<std::string> names = {});
  void add_repetition(std::span<const double> per_variable);
  std::size_t repetitions() const { return values.empty() ? 0 : values.front().size(); }
};

// Scott-Knott ESD over the per-variable distributions; rank 1 = most important.
RankTable rank_variables(const ImportanceScores& scores);

struct RankShiftEntry {
  std::string variable;
  int rank_optimized = 0;
  int rank_default = 0;
  int shift = 0;  // rank_optimized - rank_default; rank 1 vs rank 3 gives -2
};

struct RankOverlap {
  int rank = 0;
  std::size_t variables = 0;  // variables at this rank in the optimized table
  double fraction = 0.0;      // of those, share also at this rank by default
};

struct RankShiftTable {
  std::vector<RankShiftEntry> entries;  // optimized-table order
  std::vector<RankOverlap> overlap;
};

// Throws Error when the two tables rank different variable sets.
RankShiftTable rank_shift(const RankTable& optimized, const RankTable& defaults);

}  // namespace dptune
