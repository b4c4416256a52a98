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
#include <memory>
#include <span>
#include <vector>

#include "dptune/matrix.hpp"
#include "dptune/rng.hpp"

namespace dptune {

// A fitted probability model over a fixed column layout.
class Model {
 public:
  virtual ~Model() = default;
  // P(defective) for each row of `rows`.
  virtual std::vector<double> predict(const Matrix& rows) const = 0;
};

using ModelPtr = std::shared_ptr<const Model>;

// ---------------------------------------------------------------------------
// CART

struct TreeParams {
  std::size_t max_depth = 30;
  std::size_t min_split = 20;   // nodes with fewer rows become leaves
  std::size_t min_bucket = 1;   // minimum rows on each side of a split
  double complexity = 0.0;      // minimum impurity decrease relative to the root
  std::size_t mtry = 0;         // features tried per node; 0 = all
};

// Binary Gini tree over weighted rows. Leaves hold the weighted fraction of
// defective rows.
class DecisionTree final : public Model {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
    double probability = 0.0;
  };

  explicit DecisionTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

  double predict_row(std::span<const double> row) const;
  std::vector<double> predict(const Matrix& rows) const override;

  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t leaf_count() const;
  std::size_t depth() const;

 private:
  std::vector<Node> nodes_;
};

// `weights` may be empty (unit weights). `rng` is only consulted when
// params.mtry selects a strict subset of features.
DecisionTree grow_tree(const Matrix& x, std::span<const int> y, std::span<const double> weights,
                       const TreeParams& params, Engine& rng);

// Best single-split Gini decrease of each feature on unit-weighted rows,
// per row (parent impurity minus size-weighted child impurities).
std::vector<double> univariate_gini_gains(const Matrix& x, std::span<const int> y);

// Row indices of a with-replacement resample of size n.
std::vector<std::size_t> bootstrap_rows(std::size_t n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Learners behind the classifier registry.

struct KnnOptions {
  std::size_t k = 1;
};
ModelPtr train_knn(const KnnOptions& options, const Matrix& x, std::span<const int> y);

struct NaiveBayesOptions {
  double laplace = 0.0;
  bool kernel = false;
};
ModelPtr train_naive_bayes(const NaiveBayesOptions& options, const Matrix& x,
                           std::span<const int> y);

struct LogisticOptions {
  double ridge = 1e-4;
  std::size_t max_iterations = 100;
  double tolerance = 1e-10;
};
ModelPtr train_logistic(const LogisticOptions& options, const Matrix& x, std::span<const int> y);

struct CartOptions {
  double complexity = 0.01;
};
ModelPtr train_cart(const CartOptions& options, const Matrix& x, std::span<const int> y);

struct ForestOptions {
  std::size_t trees = 10;
  std::size_t mtry = 0;  // 0 = floor(sqrt(P))
};
// Tree t is grown on bootstrap_rows(n, derive_seed(seed, t)) with feature
// sampling from Engine(derive_seed(seed, t, 1)).
ModelPtr train_random_forest(const ForestOptions& options, const Matrix& x,
                             std::span<const int> y, std::uint64_t seed);

struct BoostOptions {
  std::size_t rounds = 1;
  bool winnow = false;
  std::size_t depth = 1;
};
ModelPtr train_boosted_trees(const BoostOptions& options, const Matrix& x,
                             std::span<const int> y);

struct NnetOptions {
  std::size_t hidden_units = 1;
  double weight_decay = 0.0;
  std::size_t epochs = 200;
  double learning_rate = 0.1;
};
ModelPtr train_nnet(const NnetOptions& options, const Matrix& x, std::span<const int> y,
                    std::uint64_t seed);

// Per-column mean / standard deviation learned on training rows; constant
// columns get unit scale.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const Matrix& x);
  Matrix apply(const Matrix& x) const;
};

}  // namespace dptune
