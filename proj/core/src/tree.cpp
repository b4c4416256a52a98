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

#include "dptune/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dptune {
namespace {

// Sum of weights times Gini impurity, 2 * w_pos * w_neg / w.
double weighted_gini(double w, double w_pos) {
  if (w <= 0.0) return 0.0;
  return 2.0 * w_pos * (w - w_pos) / w;
}

double split_threshold(double lo, double hi) {
  const double mid = lo + 0.5 * (hi - lo);
  return mid < hi ? mid : lo;
}

class TreeGrower {
 public:
  TreeGrower(const Matrix& x, std::span<const int> y, std::span<const double> w,
             const TreeParams& params, Engine& rng)
      : x_(x), y_(y), params_(params), rng_(rng), n_(x.rows()), p_(x.cols()) {
    weights_.assign(n_, 1.0);
    if (!w.empty()) std::copy(w.begin(), w.end(), weights_.begin());
    sorted_.resize(p_);
    for (std::size_t f = 0; f < p_; ++f) {
      auto& order = sorted_[f];
      order.resize(n_);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return x_(a, f) < x_(b, f); });
    }
    go_left_.assign(n_, 0);
    scratch_.resize(n_);
    features_.resize(p_);
    std::iota(features_.begin(), features_.end(), std::size_t{0});
  }

  DecisionTree grow() {
    double w = 0.0, wp = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      w += weights_[i];
      if (y_[i] == 1) wp += weights_[i];
    }
    root_impurity_ = weighted_gini(w, wp);
    build(0, n_, 0);
    return DecisionTree(std::move(nodes_));
  }

 private:
  struct Split {
    std::size_t feature = 0;
    double threshold = 0.0;
    double decrease = 0.0;
    bool found = false;
  };

  std::size_t build(std::size_t begin, std::size_t end, std::size_t depth) {
    const std::size_t id = nodes_.size();
    nodes_.emplace_back();

    double w = 0.0, wp = 0.0;
    const auto& rows = sorted_[0];
    for (std::size_t k = begin; k < end; ++k) {
      w += weights_[rows[k]];
      if (y_[rows[k]] == 1) wp += weights_[rows[k]];
    }
    nodes_[id].probability = w > 0.0 ? std::clamp(wp / w, 0.0, 1.0) : 0.0;

    const std::size_t count = end - begin;
    const bool pure = wp <= 0.0 || wp >= w;
    if (pure || depth >= params_.max_depth || count < params_.min_split || count < 2) return id;

    const Split split = best_split(begin, end, w, wp);
    const double min_decrease =
        std::max(params_.complexity * root_impurity_, 1e-12 * std::max(root_impurity_, 1e-300));
    if (!split.found || split.decrease < min_decrease || split.decrease <= 0.0) return id;

    const std::size_t mid = partition(begin, end, split);
    nodes_[id].feature = static_cast<int>(split.feature);
    nodes_[id].threshold = split.threshold;
    const std::size_t left = build(begin, mid, depth + 1);
    const std::size_t right = build(mid, end, depth + 1);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  Split best_split(std::size_t begin, std::size_t end, double w, double wp) {
    std::size_t tries = p_;
    if (params_.mtry > 0 && params_.mtry < p_) {
      tries = params_.mtry;
      for (std::size_t i = 0; i < tries; ++i) {
        const std::size_t j = i + uniform_index(rng_, p_ - i);
        std::swap(features_[i], features_[j]);
      }
    }
    const double parent = weighted_gini(w, wp);
    const std::size_t count = end - begin;
    Split best;
    for (std::size_t t = 0; t < tries; ++t) {
      const std::size_t f = features_[t];
      const auto& order = sorted_[f];
      double wl = 0.0, wlp = 0.0;
      for (std::size_t k = begin; k + 1 < end; ++k) {
        const std::size_t r = order[k];
        wl += weights_[r];
        if (y_[r] == 1) wlp += weights_[r];
        const double lo = x_(r, f);
        const double hi = x_(order[k + 1], f);
        if (!(lo < hi)) continue;
        const std::size_t n_left = k + 1 - begin;
        if (n_left < params_.min_bucket || count - n_left < params_.min_bucket) continue;
        const double decrease =
            parent - weighted_gini(wl, wlp) - weighted_gini(w - wl, wp - wlp);
        if (decrease > best.decrease) {
          best.found = true;
          best.decrease = decrease;
          best.feature = f;
          best.threshold = split_threshold(lo, hi);
        }
      }
    }
    if (params_.mtry > 0 && params_.mtry < p_) {
      // keep the feature cycle independent of previous nodes' draws
      std::sort(features_.begin(), features_.end());
    }
    return best;
  }

  std::size_t partition(std::size_t begin, std::size_t end, const Split& split) {
    std::size_t n_left = 0;
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t r = sorted_[0][k];
      go_left_[r] = x_(r, split.feature) <= split.threshold ? 1 : 0;
      n_left += go_left_[r];
    }
    for (std::size_t f = 0; f < p_; ++f) {
      auto& order = sorted_[f];
      std::size_t l = begin, r = begin + n_left;
      for (std::size_t k = begin; k < end; ++k) {
        const std::size_t row = order[k];
        if (go_left_[row]) {
          scratch_[l++] = row;
        } else {
          scratch_[r++] = row;
        }
      }
      std::copy(scratch_.begin() + static_cast<std::ptrdiff_t>(begin),
                scratch_.begin() + static_cast<std::ptrdiff_t>(end),
                order.begin() + static_cast<std::ptrdiff_t>(begin));
    }
    return begin + n_left;
  }

  const Matrix& x_;
  std::span<const int> y_;
  const TreeParams& params_;
  Engine& rng_;
  std::size_t n_;
  std::size_t p_;
  std::vector<double> weights_;
  std::vector<std::vector<std::size_t>> sorted_;
  std::vector<unsigned char> go_left_;
  std::vector<std::size_t> scratch_;
  std::vector<std::size_t> features_;
  std::vector<DecisionTree::Node> nodes_;
  double root_impurity_ = 0.0;
};

}  // namespace

double DecisionTree::predict_row(std::span<const double> row) const {
  std::size_t id = 0;
  while (nodes_[id].feature >= 0) {
    const Node& node = nodes_[id];
    id = row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
  }
  return nodes_[id].probability;
}

std::vector<double> DecisionTree::predict(const Matrix& rows) const {
  std::vector<double> out(rows.rows());
  for (std::size_t r = 0; r < rows.rows(); ++r) out[r] = predict_row(rows.row(r));
  return out;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.feature < 0; }));
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> level(nodes_.size(), 0);
  std::size_t deepest = 0;
  // children are always created after their parent
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (nodes_[i].feature >= 0) {
      level[nodes_[i].left] = level[i] + 1;
      level[nodes_[i].right] = level[i] + 1;
    }
  }
  return deepest;
}

DecisionTree grow_tree(const Matrix& x, std::span<const int> y, std::span<const double> weights,
                       const TreeParams& params, Engine& rng) {
  TreeGrower grower(x, y, weights, params, rng);
  return grower.grow();
}

std::vector<double> univariate_gini_gains(const Matrix& x, std::span<const int> y) {
  TreeParams stump;
  stump.max_depth = 1;
  stump.min_split = 2;
  std::vector<double> gains(x.cols(), 0.0);
  Engine unused(0);
  std::vector<std::size_t> one(1);
  for (std::size_t f = 0; f < x.cols(); ++f) {
    one[0] = f;
    const Matrix col = x.select_cols(one);
    const DecisionTree t = grow_tree(col, y, {}, stump, unused);
    if (t.nodes().size() < 3) continue;
    const auto& nodes = t.nodes();
    // recompute the decrease from the leaf fractions
    double n_left = 0.0, n_right = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
      (col(r, 0) <= nodes[0].threshold ? n_left : n_right) += 1.0;
    }
    const double n = n_left + n_right;
    const auto g = [](double w, double p) { return 2.0 * w * p * (1.0 - p); };
    gains[f] = (g(n, nodes[0].probability) - g(n_left, nodes[nodes[0].left].probability) -
                g(n_right, nodes[nodes[0].right].probability)) /
               n;
  }
  return gains;
}

std::vector<std::size_t> bootstrap_rows(std::size_t n, std::uint64_t seed) {
  Engine engine(seed);
  std::vector<std::size_t> rows(n);
  for (auto& r : rows) r = uniform_index(engine, n);
  return rows;
}

}  // namespace dptune
