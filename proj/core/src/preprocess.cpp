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

#include "dptune/preprocess.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dptune/ranking.hpp"

namespace dptune {
namespace {

double pearson(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(n);
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

bool is_constant(std::span<const double> v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

}  // namespace

const char* to_string(RemovalReason reason) {
  return reason == RemovalReason::correlated ? "correlated" : "redundant";
}

double spearman_rho(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) return 0.0;
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  return pearson(ra, rb);
}

CorrelationMatrix spearman_matrix(const Dataset& dataset) {
  const std::size_t p = dataset.num_features();
  const Matrix& x = dataset.features();
  std::vector<std::vector<double>> ranks(p);
  CorrelationMatrix out;
  out.names = dataset.columns();
  out.rho = Matrix(p, p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    const auto col = x.column(j);
    if (is_constant(col)) out.constant_columns.push_back(dataset.columns()[j]);
    ranks[j] = average_ranks(col);
  }
  for (std::size_t i = 0; i < p; ++i) {
    out.rho(i, i) = 1.0;
    for (std::size_t j = i + 1; j < p; ++j) {
      const double r = pearson(ranks[i], ranks[j]);
      out.rho(i, j) = r;
      out.rho(j, i) = r;
    }
  }
  return out;
}

PruneResult remove_correlated(const Dataset& dataset, double threshold) {
  const CorrelationMatrix cm = spearman_matrix(dataset);
  std::vector<std::size_t> survivors(dataset.num_features());
  std::iota(survivors.begin(), survivors.end(), std::size_t{0});
  RemovalLog log;

  auto mean_abs = [&](std::size_t v) {
    double sum = 0.0;
    for (std::size_t k : survivors) {
      if (k != v) sum += std::abs(cm.rho(v, k));
    }
    return sum / static_cast<double>(survivors.size() - 1);
  };

  while (survivors.size() >= 2) {
    double best = -1.0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t a = 0; a < survivors.size(); ++a) {
      for (std::size_t b = a + 1; b < survivors.size(); ++b) {
        const double r = std::abs(cm.rho(survivors[a], survivors[b]));
        if (r > best) {
          best = r;
          bi = a;
          bj = b;
        }
      }
    }
    if (best < threshold) break;
    const std::size_t ci = survivors[bi];
    const std::size_t cj = survivors[bj];
    const std::size_t victim_pos = mean_abs(ci) > mean_abs(cj) ? bi : bj;
    log.push_back({dataset.columns()[survivors[victim_pos]], RemovalReason::correlated,
                   cm.rho(ci, cj)});
    survivors.erase(survivors.begin() + static_cast<std::ptrdiff_t>(victim_pos));
  }
  return {dataset.select_columns(survivors), std::move(log)};
}

double preliminary_r2(const Matrix& x, std::size_t target,
                      std::span<const std::size_t> predictors) {
  const auto n = static_cast<Eigen::Index>(x.rows());
  Eigen::VectorXd y(n);
  for (Eigen::Index r = 0; r < n; ++r) y(r) = x(static_cast<std::size_t>(r), target);
  const double mean = y.mean();
  const double sst = (y.array() - mean).square().sum();
  if (sst == 0.0) return 1.0;

  Eigen::MatrixXd design(n, static_cast<Eigen::Index>(predictors.size()) + 1);
  design.col(0).setOnes();
  for (std::size_t k = 0; k < predictors.size(); ++k) {
    for (Eigen::Index r = 0; r < n; ++r) {
      design(r, static_cast<Eigen::Index>(k) + 1) = x(static_cast<std::size_t>(r), predictors[k]);
    }
  }
  const Eigen::VectorXd beta = design.completeOrthogonalDecomposition().solve(y);
  const double sse = (y - design * beta).squaredNorm();
  return std::clamp(1.0 - sse / sst, 0.0, 1.0);
}

PruneResult remove_redundant(const Dataset& dataset, double r2_threshold) {
  const Matrix& x = dataset.features();
  std::vector<std::size_t> survivors(dataset.num_features());
  std::iota(survivors.begin(), survivors.end(), std::size_t{0});
  std::vector<std::size_t> dropped;
  RemovalLog log;

  auto others = [](const std::vector<std::size_t>& set, std::size_t skip) {
    std::vector<std::size_t> out;
    for (std::size_t v : set) {
      if (v != skip) out.push_back(v);
    }
    return out;
  };

  while (survivors.size() >= 2) {
    // Near-ties (round-off level) go to the later column.
    constexpr double kTieTolerance = 1e-12;
    double best = -1.0;
    std::size_t best_pos = 0;
    for (std::size_t k = 0; k < survivors.size(); ++k) {
      const auto preds = others(survivors, survivors[k]);
      const double r2 = preliminary_r2(x, survivors[k], preds);
      if (r2 >= best - kTieTolerance) {
        best = r2;
        best_pos = k;
      }
    }
    if (best < r2_threshold) break;

    const std::size_t candidate = survivors[best_pos];
    const auto remaining = others(survivors, candidate);
    const bool orphans_previous = std::any_of(dropped.begin(), dropped.end(), [&](std::size_t d) {
      return preliminary_r2(x, d, remaining) < r2_threshold;
    });
    if (orphans_previous) break;

    log.push_back({dataset.columns()[candidate], RemovalReason::redundant, best});
    dropped.push_back(candidate);
    survivors.erase(survivors.begin() + static_cast<std::ptrdiff_t>(best_pos));
  }
  return {dataset.select_columns(survivors), std::move(log)};
}

}  // namespace dptune
