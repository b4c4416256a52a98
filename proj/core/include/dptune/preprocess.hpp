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

#include <span>
#include <string>
#include <vector>

#include "dptune/dataset.hpp"
#include "dptune/matrix.hpp"

namespace dptune {

struct CorrelationMatrix {
  std::vector<std::string> names;
  Matrix rho;  // symmetric, unit diagonal
  // Columns with zero rank variance; their off-diagonal entries are 0.
  std::vector<std::string> constant_columns;
};

enum class RemovalReason { correlated, redundant };

const char* to_string(RemovalReason reason);

struct RemovalEntry {
  std::string column;
  RemovalReason reason;
  double statistic;  // rho of the triggering pair, or the preliminary-model R^2
};

using RemovalLog = std::vector<RemovalEntry>;

struct PruneResult {
  Dataset dataset;
  RemovalLog log;
};

// Spearman rho between two equally long samples; 0 when either is constant.
double spearman_rho(std::span<const double> a, std::span<const double> b);

CorrelationMatrix spearman_matrix(const Dataset& dataset);

// Repeatedly takes the surviving pair with the largest |rho| >= threshold and
// drops the member whose mean |rho| to the other survivors is larger (ties drop
// the later column). Stops once every surviving pair has |rho| < threshold.
PruneResult remove_correlated(const Dataset& dataset, double threshold = 0.7);

// R^2 of an ordinary least-squares fit (with intercept) of column `target`
// on `predictors`. Rank-deficient designs use the minimum-norm solution. A
// constant target counts as fully explained (R^2 = 1).
double preliminary_r2(const Matrix& x, std::size_t target,
                      std::span<const std::size_t> predictors);

// Repeatedly drops the variable best explained by all other survivors while
// its R^2 >= r2_threshold, unless the drop would leave some previously dropped
// variable with R^2 < r2_threshold against the remaining survivors.
PruneResult remove_redundant(const Dataset& dataset, double r2_threshold = 0.9);

}  // namespace dptune
