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
#include <numbers>
#include <random>

#include "dptune/learners.hpp"
#include "oracles.hpp"

using namespace dptune;
using Catch::Approx;

namespace {

Matrix column_matrix(const std::vector<double>& v) {
  Matrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

struct Sample {
  Matrix x;
  std::vector<int> y;
};

// Two Gaussian blobs in `p` dimensions, shifted by `gap` along every axis.
Sample blobs(std::size_t n, std::size_t p, double gap, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  Sample s{Matrix(n, p), std::vector<int>(n)};
  for (std::size_t r = 0; r < n; ++r) {
    s.y[r] = r % 3 == 0 ? 1 : 0;
    for (std::size_t c = 0; c < p; ++c) s.x(r, c) = z(gen) + (s.y[r] ? gap : 0.0);
  }
  return s;
}

double train_auc(const Model& m, const Sample& s) {
  return oracle::pairwise_auc(m.predict(s.x), s.y);
}

// Best single-threshold Gini decrease, by trying every midpoint.
double stump_gain(const std::vector<double>& x, const std::vector<int>& y) {
  auto gini = [](double pos, double n) {
    if (n == 0) return 0.0;
    const double q = pos / n;
    return 2.0 * q * (1.0 - q);
  };
  const double n = static_cast<double>(x.size());
  double pos = 0;
  for (int v : y) pos += v;
  double best = 0.0;
  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    if (sorted[i] == sorted[i + 1]) continue;
    const double thr = 0.5 * (sorted[i] + sorted[i + 1]);
    double nl = 0, pl = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k] <= thr) {
        nl += 1;
        pl += y[k];
      }
    }
    const double dec = gini(pos, n) - (nl / n) * gini(pl, nl) - ((n - nl) / n) * gini(pos - pl, n - nl);
    best = std::max(best, dec);
  }
  return best;
}

}  // namespace

TEST_CASE("a tree splits 1-D separable data at the midpoint") {
  const Matrix x = column_matrix({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  const std::vector<int> y{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  TreeParams params;
  params.min_split = 2;
  Engine rng(0);
  const DecisionTree tree = grow_tree(x, y, {}, params, rng);
  REQUIRE(tree.nodes().size() == 3);
  CHECK(tree.nodes()[0].feature == 0);
  CHECK(tree.nodes()[0].threshold == 5.5);
  CHECK(tree.leaf_count() == 2);
  CHECK(tree.depth() == 1);
  const auto p = tree.predict(x);
  for (std::size_t i = 0; i < 10; ++i) CHECK(p[i] == static_cast<double>(y[i]));
  const std::vector<double> at_threshold{5.5};
  CHECK(tree.predict_row(at_threshold) == 0.0);
}

TEST_CASE("tree leaves hold the weighted defective fraction") {
  const Matrix x = column_matrix({1, 1, 1, 1});
  const std::vector<int> y{1, 0, 0, 0};
  const std::vector<double> w{3.0, 1.0, 1.0, 1.0};
  TreeParams params;
  params.min_split = 2;
  Engine rng(0);
  const DecisionTree tree = grow_tree(x, y, w, params, rng);
  CHECK(tree.leaf_count() == 1);
  const std::vector<double> row{1.0};
  CHECK(tree.predict_row(row) == Approx(0.5));
}

TEST_CASE("min_split and complexity limit growth") {
  const Sample s = blobs(200, 3, 1.0, 2);
  Engine rng(0);
  TreeParams loose;
  loose.min_split = 2;
  TreeParams coarse = loose;
  coarse.complexity = 0.2;
  TreeParams tiny = loose;
  tiny.min_split = 1000;
  const auto deep = grow_tree(s.x, s.y, {}, loose, rng);
  const auto pruned = grow_tree(s.x, s.y, {}, coarse, rng);
  const auto stump = grow_tree(s.x, s.y, {}, tiny, rng);
  CHECK(pruned.leaf_count() < deep.leaf_count());
  CHECK(stump.leaf_count() == 1);
  const std::vector<double> row{0.0, 0.0, 0.0};
  CHECK(stump.predict_row(row) == Approx(67.0 / 200.0));
  TreeParams shallow = loose;
  shallow.max_depth = 2;
  CHECK(grow_tree(s.x, s.y, {}, shallow, rng).depth() <= 2);
}

TEST_CASE("univariate_gini_gains equals brute-force stump search") {
  const Sample s = blobs(80, 4, 0.8, 3);
  const auto gains = univariate_gini_gains(s.x, s.y);
  REQUIRE(gains.size() == 4);
  for (std::size_t f = 0; f < 4; ++f) {
    std::vector<double> col(80);
    for (std::size_t r = 0; r < 80; ++r) col[r] = s.x(r, f);
    CHECK(gains[f] == Approx(stump_gain(col, s.y)).margin(1e-12));
  }
}

TEST_CASE("bootstrap_rows draws n indices below n, reproducibly") {
  const auto a = bootstrap_rows(500, 42);
  const auto b = bootstrap_rows(500, 42);
  CHECK(a == b);
  CHECK(a.size() == 500);
  CHECK(*std::max_element(a.begin(), a.end()) < 500);
  CHECK(bootstrap_rows(500, 43) != a);
}

TEST_CASE("1-nearest neighbour reproduces training labels") {
  const Sample s = blobs(60, 3, 0.5, 4);
  const auto model = train_knn({1}, s.x, s.y);
  const auto p = model->predict(s.x);
  for (std::size_t i = 0; i < s.y.size(); ++i) CHECK(p[i] == static_cast<double>(s.y[i]));
  const auto all = train_knn({60}, s.x, s.y)->predict(s.x);
  for (double v : all) CHECK(v == Approx(20.0 / 60.0));
}

TEST_CASE("Gaussian naive Bayes matches the closed-form posterior") {
  const Sample s = blobs(40, 2, 1.5, 5);
  const auto model = train_naive_bayes({0.0, false}, s.x, s.y);
  const auto p = model->predict(s.x);

  auto stats = [&](int cls, std::size_t f) {
    std::vector<double> v;
    for (std::size_t r = 0; r < 40; ++r) {
      if (s.y[r] == cls) v.push_back(s.x(r, f));
    }
    return std::pair{oracle::mean(v), oracle::sample_sd(v)};
  };
  auto pdf = [](double x, double m, double sd) {
    return std::exp(-0.5 * (x - m) * (x - m) / (sd * sd)) / (sd * std::sqrt(2 * std::numbers::pi));
  };
  const double prior1 = 14.0 / 40.0;  // rows 0, 3, ..., 39
  for (std::size_t r = 0; r < 40; ++r) {
    double l1 = prior1, l0 = 1.0 - prior1;
    for (std::size_t f = 0; f < 2; ++f) {
      const auto [m1, s1] = stats(1, f);
      const auto [m0, s0] = stats(0, f);
      l1 *= pdf(s.x(r, f), m1, s1);
      l0 *= pdf(s.x(r, f), m0, s0);
    }
    CHECK(p[r] == Approx(l1 / (l1 + l0)).margin(1e-10));
  }
}

TEST_CASE("kernel naive Bayes and Laplace smoothing") {
  const Sample s = blobs(90, 2, 2.0, 6);
  const auto kde = train_naive_bayes({0.0, true}, s.x, s.y);
  CHECK(train_auc(*kde, s) > 0.9);

  // A constant metric gives both classes the same density, leaving only the
  // smoothed prior (2 + 2) / (6 + 4).
  const Matrix x = column_matrix({3, 3, 3, 3, 3, 3});
  const std::vector<int> y{1, 1, 0, 0, 0, 0};
  const auto smoothed = train_naive_bayes({2.0, false}, x, y);
  Matrix one(1, 1);
  one(0, 0) = 3.0;
  CHECK(smoothed->predict(one)[0] == Approx(0.4).margin(1e-9));
}

TEST_CASE("logistic regression on a binary feature recovers group frequencies") {
  // Group x=0: 3 of 10 defective; group x=1: 7 of 10 defective.
  std::vector<double> xs;
  std::vector<int> y;
  for (int i = 0; i < 10; ++i) {
    xs.push_back(0.0);
    y.push_back(i < 3 ? 1 : 0);
  }
  for (int i = 0; i < 10; ++i) {
    xs.push_back(1.0);
    y.push_back(i < 7 ? 1 : 0);
  }
  const Matrix x = column_matrix(xs);
  const auto model = train_logistic({}, x, y);
  const auto p = model->predict(column_matrix({0.0, 1.0}));
  CHECK(p[0] == Approx(0.3).margin(1e-3));
  CHECK(p[1] == Approx(0.7).margin(1e-3));
}

TEST_CASE("logistic regression stays finite on separable data") {
  const Matrix x = column_matrix({1, 2, 3, 4, 5, 6});
  const std::vector<int> y{0, 0, 0, 1, 1, 1};
  const auto p = train_logistic({}, x, y)->predict(x);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(std::isfinite(p[i]));
    CHECK((p[i] > 0.5) == (y[i] == 1));
  }
}

TEST_CASE("a single-tree forest is a tree on the documented bootstrap sample") {
  const Sample s = blobs(120, 4, 0.7, 7);
  const std::uint64_t seed = 99;
  const auto forest = train_random_forest({1, 0}, s.x, s.y, seed);

  const auto rows = bootstrap_rows(120, derive_seed(seed, 0));
  const Matrix bx = s.x.select_rows(rows);
  std::vector<int> by;
  for (auto r : rows) by.push_back(s.y[r]);
  TreeParams params;
  params.max_depth = 120;
  params.min_split = 2;
  params.mtry = 2;  // floor(sqrt(4))
  Engine rng(derive_seed(seed, 0, 1));
  const DecisionTree tree = grow_tree(bx, by, {}, params, rng);

  const auto pf = forest->predict(s.x);
  const auto pt = tree.predict(s.x);
  for (std::size_t i = 0; i < 120; ++i) CHECK(pf[i] == (pt[i] > 0.5 ? 1.0 : 0.0));
}

TEST_CASE("forests are reproducible and vote fractions lie on the tree grid") {
  const Sample s = blobs(100, 3, 1.0, 8);
  const auto a = train_random_forest({10, 0}, s.x, s.y, 5)->predict(s.x);
  const auto b = train_random_forest({10, 0}, s.x, s.y, 5)->predict(s.x);
  CHECK(a == b);
  for (double v : a) CHECK(std::abs(v * 10 - std::round(v * 10)) < 1e-12);
}

TEST_CASE("one boosting round is the plain base learner") {
  const Sample s = blobs(100, 3, 0.8, 9);
  const auto boosted = train_boosted_trees({1, false, 1}, s.x, s.y)->predict(s.x);
  TreeParams params;
  params.max_depth = 1;
  params.min_split = 2;
  Engine rng(0);
  const std::vector<double> w(100, 0.01);
  const auto base = grow_tree(s.x, s.y, w, params, rng).predict(s.x);
  for (std::size_t i = 0; i < 100; ++i) CHECK(boosted[i] == Approx(base[i]).margin(1e-12));
}

TEST_CASE("more boosting rounds fit an interaction that one stump cannot") {
  std::mt19937_64 gen(10);
  std::uniform_real_distribution<double> u(0, 1);
  Sample s{Matrix(300, 2), std::vector<int>(300)};
  for (std::size_t r = 0; r < 300; ++r) {
    s.x(r, 0) = u(gen);
    s.x(r, 1) = u(gen);
    s.y[r] = (s.x(r, 0) > 0.5) != (s.x(r, 1) > 0.5) ? 1 : 0;
  }
  const double one = train_auc(*train_boosted_trees({1, false, 1}, s.x, s.y), s);
  const double many = train_auc(*train_boosted_trees({40, false, 3}, s.x, s.y), s);
  CHECK(one < 0.7);
  CHECK(many > 0.95);
}

TEST_CASE("winnowing drops features without signal") {
  const Sample s = blobs(200, 2, 3.0, 11);
  Matrix x(200, 3);
  for (std::size_t r = 0; r < 200; ++r) {
    x(r, 0) = s.x(r, 0);
    x(r, 1) = s.x(r, 1);
    x(r, 2) = 7.0;  // constant: zero gain
  }
  const auto a = train_boosted_trees({10, true, 1}, x, s.y)->predict(x);
  for (double v : a) CHECK(std::isfinite(v));
}

TEST_CASE("neural network learns separable blobs reproducibly") {
  const Sample s = blobs(150, 2, 3.0, 12);
  const auto a = train_nnet({3, 0.0, 200, 0.1}, s.x, s.y, 1)->predict(s.x);
  const auto b = train_nnet({3, 0.0, 200, 0.1}, s.x, s.y, 1)->predict(s.x);
  CHECK(a == b);
  CHECK(oracle::pairwise_auc(a, s.y) > 0.95);
  for (double v : a) CHECK((v > 0.0 && v < 1.0));
}

TEST_CASE("standardizer centers and scales, leaving constants at unit scale") {
  Matrix x(4, 2);
  for (std::size_t r = 0; r < 4; ++r) {
    x(r, 0) = static_cast<double>(r);
    x(r, 1) = 5.0;
  }
  const auto st = Standardizer::fit(x);
  CHECK(st.mean[0] == 1.5);
  CHECK(st.scale[1] == 1.0);
  const Matrix z = st.apply(x);
  double sum = 0.0;
  for (std::size_t r = 0; r < 4; ++r) sum += z(r, 0);
  CHECK(sum == Approx(0.0).margin(1e-12));
  CHECK(z(0, 1) == 0.0);
}
