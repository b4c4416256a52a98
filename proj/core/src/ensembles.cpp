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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dptune/learners.hpp"

namespace dptune {
namespace {

class TreeModel final : public Model {
 public:
  explicit TreeModel(DecisionTree tree) : tree_(std::move(tree)) {}
  std::vector<double> predict(const Matrix& rows) const override { return tree_.predict(rows); }

 private:
  DecisionTree tree_;
};

class ForestModel final : public Model {
 public:
  explicit ForestModel(std::vector<DecisionTree> trees) : trees_(std::move(trees)) {}

  // Fraction of trees voting defective (leaf fraction > 0.5).
  std::vector<double> predict(const Matrix& rows) const override {
    std::vector<double> out(rows.rows(), 0.0);
    for (std::size_t r = 0; r < rows.rows(); ++r) {
      std::size_t votes = 0;
      for (const auto& t : trees_) votes += t.predict_row(rows.row(r)) > 0.5 ? 1 : 0;
      out[r] = static_cast<double>(votes) / static_cast<double>(trees_.size());
    }
    return out;
  }

 private:
  std::vector<DecisionTree> trees_;
};

class BoostedModel final : public Model {
 public:
  BoostedModel(std::vector<std::size_t> features, std::vector<DecisionTree> learners,
               std::vector<double> alphas)
      : features_(std::move(features)), learners_(std::move(learners)), alphas_(std::move(alphas)) {}

  // Alpha-weighted mean of the base learners' leaf probabilities; a single
  // learner is returned unchanged.
  std::vector<double> predict(const Matrix& rows) const override {
    const Matrix sel = rows.select_cols(features_);
    if (learners_.size() == 1) return learners_.front().predict(sel);
    const double total = std::accumulate(alphas_.begin(), alphas_.end(), 0.0);
    std::vector<double> out(sel.rows(), 0.0);
    for (std::size_t r = 0; r < sel.rows(); ++r) {
      double acc = 0.0;
      for (std::size_t t = 0; t < learners_.size(); ++t) {
        acc += alphas_[t] * learners_[t].predict_row(sel.row(r));
      }
      out[r] = std::clamp(acc / total, 0.0, 1.0);
    }
    return out;
  }

 private:
  std::vector<std::size_t> features_;
  std::vector<DecisionTree> learners_;
  std::vector<double> alphas_;
};

}  // namespace

ModelPtr train_cart(const CartOptions& options, const Matrix& x, std::span<const int> y) {
  TreeParams params;
  params.max_depth = 30;
  params.min_split = 20;
  params.min_bucket = 1;
  params.complexity = options.complexity;
  Engine unused(0);
  return std::make_shared<TreeModel>(grow_tree(x, y, {}, params, unused));
}

ModelPtr train_random_forest(const ForestOptions& options, const Matrix& x,
                             std::span<const int> y, std::uint64_t seed) {
  const std::size_t p = x.cols();
  TreeParams params;
  params.max_depth = x.rows();
  params.min_split = 2;
  params.min_bucket = 1;
  params.complexity = 0.0;
  params.mtry = options.mtry > 0
                    ? std::min(options.mtry, p)
                    : std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(p)))));

  std::vector<DecisionTree> trees;
  trees.reserve(options.trees);
  std::vector<int> sample_y(x.rows());
  for (std::size_t t = 0; t < std::max<std::size_t>(1, options.trees); ++t) {
    const auto rows = bootstrap_rows(x.rows(), derive_seed(seed, t));
    const Matrix sample_x = x.select_rows(rows);
    for (std::size_t i = 0; i < rows.size(); ++i) sample_y[i] = y[rows[i]];
    Engine rng(derive_seed(seed, t, 1));
    trees.push_back(grow_tree(sample_x, sample_y, {}, params, rng));
  }
  return std::make_shared<ForestModel>(std::move(trees));
}

// AdaBoost.M1 over depth-limited weighted trees.
ModelPtr train_boosted_trees(const BoostOptions& options, const Matrix& x,
                             std::span<const int> y) {
  std::vector<std::size_t> features(x.cols());
  std::iota(features.begin(), features.end(), std::size_t{0});
  if (options.winnow) {
    const auto gains = univariate_gini_gains(x, y);
    const double top = *std::max_element(gains.begin(), gains.end());
    if (top > 0.0) {
      features.clear();
      for (std::size_t f = 0; f < gains.size(); ++f) {
        if (gains[f] >= 0.01 * top) features.push_back(f);
      }
    }
  }
  const Matrix sel = x.select_cols(features);
  const std::size_t n = sel.rows();

  TreeParams params;
  params.max_depth = std::max<std::size_t>(1, options.depth);
  params.min_split = 2;
  params.min_bucket = 1;
  params.complexity = 0.0;
  Engine unused(0);

  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  std::vector<DecisionTree> learners;
  std::vector<double> alphas;
  constexpr double kMinError = 1e-10;
  const std::size_t rounds = std::max<std::size_t>(1, options.rounds);
  std::vector<unsigned char> miss(n);
  for (std::size_t t = 0; t < rounds; ++t) {
    DecisionTree tree = grow_tree(sel, y, w, params, unused);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const int pred = tree.predict_row(sel.row(i)) > 0.5 ? 1 : 0;
      miss[i] = pred != y[i] ? 1 : 0;
      if (miss[i]) err += w[i];
    }
    if (t > 0 && err >= 0.5) break;
    const double e = std::clamp(err, kMinError, 1.0 - kMinError);
    const double alpha = err < 0.5 ? std::log((1.0 - e) / e) : 1.0;
    learners.push_back(std::move(tree));
    alphas.push_back(alpha);
    if (err <= kMinError || err >= 0.5) break;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (miss[i]) w[i] *= std::exp(alpha);
      total += w[i];
    }
    for (auto& wi : w) wi /= total;
  }
  return std::make_shared<BoostedModel>(std::move(features), std::move(learners), std::move(alphas));
}

}  // namespace dptune
