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
#include <random>
#include <set>

#include "dptune/preprocess.hpp"
#include "oracles.hpp"

using namespace dptune;

namespace {

std::vector<double> column(const Dataset& d, std::size_t c) {
  std::vector<double> v(d.size());
  for (std::size_t r = 0; r < d.size(); ++r) v[r] = d.features()(r, c);
  return v;
}

Dataset from_columns(const std::vector<std::vector<double>>& cols, std::vector<std::string> names = {}) {
  const std::size_t n = cols.front().size();
  Matrix x(n, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t r = 0; r < n; ++r) x(r, c) = cols[c][r];
  }
  if (names.empty()) {
    for (std::size_t c = 0; c < cols.size(); ++c) names.push_back("v" + std::to_string(c));
  }
  std::vector<int> y(n);
  for (std::size_t r = 0; r < n; ++r) y[r] = static_cast<int>(r % 2);
  return Dataset("d", std::move(names), std::move(x), std::move(y));
}

std::vector<double> gaussian(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> z;
  std::vector<double> v(n);
  for (auto& x : v) x = z(gen);
  return v;
}

// Reference rule written from the description: repeatedly take the pair with
// the largest |rho| >= thr; drop the one with larger mean |rho| to the other
// survivors (later column on ties).
std::vector<std::size_t> reference_correlated(const Dataset& d, double thr) {
  std::vector<std::vector<double>> cols;
  for (std::size_t c = 0; c < d.num_features(); ++c) cols.push_back(column(d, c));
  const std::size_t p = cols.size();
  std::vector<std::vector<double>> rho(p, std::vector<double>(p, 1.0));
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      if (i != j) rho[i][j] = oracle::spearman(cols[i], cols[j]);
    }
  }
  std::vector<std::size_t> alive(p);
  std::iota(alive.begin(), alive.end(), std::size_t{0});
  while (true) {
    double best = -1.0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t a = 0; a < alive.size(); ++a) {
      for (std::size_t b = a + 1; b < alive.size(); ++b) {
        const double r = std::abs(rho[alive[a]][alive[b]]);
        if (r > best) {
          best = r;
          bi = a;
          bj = b;
        }
      }
    }
    if (best < thr) break;
    auto mean_abs = [&](std::size_t k) {
      double s = 0.0;
      for (std::size_t o : alive) {
        if (o != alive[k]) s += std::abs(rho[alive[k]][o]);
      }
      return s / static_cast<double>(alive.size() - 1);
    };
    const std::size_t victim = mean_abs(bi) > mean_abs(bj) ? bi : bj;
    alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(victim));
  }
  return alive;
}

}  // namespace

TEST_CASE("spearman_rho on monotone and tied samples") {
  const std::vector<double> x{1, 2, 3};
  CHECK(spearman_rho(x, std::vector<double>{3, 6, 9}) == Catch::Approx(1.0));
  CHECK(spearman_rho(x, std::vector<double>{9, 6, 3}) == Catch::Approx(-1.0));

  const std::vector<double> a{1, 1, 2, 3};
  const std::vector<double> b{2, 3, 1, 4};
  CHECK(spearman_rho(a, b) == Catch::Approx(oracle::spearman(a, b)).margin(1e-12));

  CHECK(spearman_rho(std::vector<double>{5, 5, 5}, x) == 0.0);
}

TEST_CASE("spearman_rho matches the rank oracle on random tied data") {
  std::mt19937_64 gen(5);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> a(30), b(30);
    for (auto& v : a) v = static_cast<double>(gen() % 6);
    for (auto& v : b) v = static_cast<double>(gen() % 9);
    CHECK(spearman_rho(a, b) == Catch::Approx(oracle::spearman(a, b)).margin(1e-12));
  }
}

TEST_CASE("spearman_matrix is symmetric, unit-diagonal and flags constants") {
  std::mt19937_64 gen(8);
  auto a = gaussian(gen, 40), b = gaussian(gen, 40);
  std::vector<double> c(40, 2.0);
  const auto m = spearman_matrix(from_columns({a, b, c}, {"a", "b", "c"}));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(m.rho(i, i) == 1.0);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(m.rho(i, j) == m.rho(j, i));
      CHECK(std::abs(m.rho(i, j)) <= 1.0);
    }
  }
  CHECK(m.rho(0, 2) == 0.0);
  CHECK(m.constant_columns == std::vector<std::string>{"c"});
}

TEST_CASE("spearman_matrix is invariant under strictly monotone transforms") {
  std::mt19937_64 gen(9);
  auto a = gaussian(gen, 25), b = gaussian(gen, 25);
  std::vector<double> a_exp(a.size()), b_cube(b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a_exp[i] = std::exp(a[i]);
    b_cube[i] = b[i] * b[i] * b[i];
  }
  const auto m1 = spearman_matrix(from_columns({a, b}));
  const auto m2 = spearman_matrix(from_columns({a_exp, b_cube}));
  CHECK(m1.rho(0, 1) == Catch::Approx(m2.rho(0, 1)).margin(1e-12));
}

TEST_CASE("remove_correlated drops one of two duplicated columns") {
  std::mt19937_64 gen(1);
  auto a = gaussian(gen, 50), n1 = gaussian(gen, 50);
  const auto result = remove_correlated(from_columns({a, n1, a}, {"a", "noise", "a_copy"}));
  REQUIRE(result.log.size() == 1);
  CHECK(result.log[0].column == "a_copy");
  CHECK(result.log[0].reason == RemovalReason::correlated);
  CHECK(result.log[0].statistic == Catch::Approx(1.0));
  CHECK(result.dataset.columns() == std::vector<std::string>{"a", "noise"});
}

TEST_CASE("remove_correlated keeps uncorrelated noise") {
  std::mt19937_64 gen(2);
  std::vector<std::vector<double>> cols;
  for (int c = 0; c < 6; ++c) cols.push_back(gaussian(gen, 200));
  const auto result = remove_correlated(from_columns(cols));
  CHECK(result.log.empty());
  CHECK(result.dataset.num_features() == 6);
}

TEST_CASE("remove_correlated on a tight cluster of three keeps one") {
  std::mt19937_64 gen(3);
  const auto z = gaussian(gen, 300);
  std::vector<std::vector<double>> cols(3, z);
  std::normal_distribution<double> e(0.0, 0.35);
  for (auto& c : cols) {
    for (auto& v : c) v += e(gen);
  }
  const Dataset d = from_columns(cols);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      REQUIRE(std::abs(oracle::spearman(cols[i], cols[j])) > 0.8);
    }
  }
  // Exhaustive search: the largest column subset whose pairs all stay
  // below the threshold.
  std::size_t largest = 0;
  for (unsigned mask = 1; mask < 8; ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = i + 1; j < 3; ++j) {
        if ((mask >> i & 1) && (mask >> j & 1) && std::abs(oracle::spearman(cols[i], cols[j])) >= 0.7) ok = false;
      }
    }
    if (ok) largest = std::max<std::size_t>(largest, static_cast<std::size_t>(__builtin_popcount(mask)));
  }
  const auto result = remove_correlated(d);
  CHECK(result.log.size() == 2);
  CHECK(result.dataset.num_features() == largest);
}

TEST_CASE("remove_correlated agrees with a reference implementation") {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 25; ++trial) {
    const auto base1 = gaussian(gen, 60), base2 = gaussian(gen, 60);
    std::vector<std::vector<double>> cols;
    std::normal_distribution<double> e(0.0, 0.2 + 0.1 * (trial % 5));
    for (int c = 0; c < 7; ++c) {
      auto v = (c % 3 == 0) ? gaussian(gen, 60) : (c % 3 == 1 ? base1 : base2);
      for (auto& x : v) x += e(gen);
      cols.push_back(v);
    }
    const Dataset d = from_columns(cols);
    const auto expected = reference_correlated(d, 0.7);
    std::vector<std::string> names;
    for (auto k : expected) names.push_back(d.columns()[k]);
    const auto result = remove_correlated(d, 0.7);
    CHECK(result.dataset.columns() == names);

    const auto m = spearman_matrix(result.dataset);
    for (std::size_t i = 0; i < m.names.size(); ++i) {
      for (std::size_t j = i + 1; j < m.names.size(); ++j) CHECK(std::abs(m.rho(i, j)) < 0.7);
    }
  }
}

TEST_CASE("preliminary_r2 matches a normal-equations OLS oracle") {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 10; ++trial) {
    auto a = gaussian(gen, 40), b = gaussian(gen, 40), c = gaussian(gen, 40);
    for (std::size_t i = 0; i < 40; ++i) c[i] += 0.5 * a[i] - 0.3 * b[i];
    const Dataset d = from_columns({a, b, c});
    const std::vector<std::size_t> preds{0, 1};
    CHECK(preliminary_r2(d.features(), 2, preds) ==
          Catch::Approx(oracle::ols_r2({a, b}, c)).margin(1e-10));
  }
}

TEST_CASE("preliminary_r2 handles degenerate designs") {
  std::mt19937_64 gen(7);
  auto a = gaussian(gen, 20);
  std::vector<double> k(20, 3.0);
  const Dataset d = from_columns({a, a, k});
  const std::vector<std::size_t> dup{0, 1};
  // Rank-deficient predictors still give a finite fit.
  const std::vector<std::size_t> one{0};
  CHECK(preliminary_r2(d.features(), 1, one) == Catch::Approx(1.0));
  const std::vector<std::size_t> none{};
  CHECK(preliminary_r2(d.features(), 2, dup) == 1.0);  // constant target
  CHECK(preliminary_r2(d.features(), 0, none) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("remove_redundant drops an exact linear combination") {
  std::mt19937_64 gen(10);
  auto a = gaussian(gen, 80), b = gaussian(gen, 80);
  std::vector<double> c(80);
  for (std::size_t i = 0; i < 80; ++i) c[i] = a[i] + b[i];
  const auto result = remove_redundant(from_columns({a, b, c}, {"A", "B", "C"}));
  REQUIRE(result.log.size() == 1);
  CHECK(result.log[0].column == "C");
  CHECK(result.log[0].reason == RemovalReason::redundant);
  CHECK(result.log[0].statistic == Catch::Approx(1.0));
  CHECK(result.dataset.columns() == std::vector<std::string>{"A", "B"});
}

TEST_CASE("remove_redundant keeps independent columns") {
  std::mt19937_64 gen(11);
  std::vector<std::vector<double>> cols;
  for (int c = 0; c < 5; ++c) cols.push_back(gaussian(gen, 100));
  for (std::size_t t = 0; t < cols.size(); ++t) {
    std::vector<std::vector<double>> others;
    for (std::size_t o = 0; o < cols.size(); ++o) {
      if (o != t) others.push_back(cols[o]);
    }
    REQUIRE(oracle::ols_r2(others, cols[t]) < 0.9);
  }
  const auto result = remove_redundant(from_columns(cols));
  CHECK(result.log.empty());
}

TEST_CASE("remove_redundant postcondition and idempotence") {
  std::mt19937_64 gen(12);
  auto a = gaussian(gen, 60), b = gaussian(gen, 60), c = gaussian(gen, 60);
  std::vector<double> d1(60), d2(60);
  std::normal_distribution<double> e(0.0, 0.05);
  for (std::size_t i = 0; i < 60; ++i) {
    d1[i] = a[i] - 2 * b[i] + e(gen);
    d2[i] = b[i] + c[i] + e(gen);
  }
  const auto result = remove_redundant(from_columns({a, b, c, d1, d2}));
  const Dataset& kept = result.dataset;
  for (std::size_t t = 0; t < kept.num_features(); ++t) {
    std::vector<std::size_t> preds;
    for (std::size_t o = 0; o < kept.num_features(); ++o) {
      if (o != t) preds.push_back(o);
    }
    CHECK(preliminary_r2(kept.features(), t, preds) < 0.9);
  }
  CHECK(remove_redundant(kept).log.empty());

  // Duplicates handled by the correlation step leave nothing redundant.
  const auto corr = remove_correlated(from_columns({a, a, b}));
  CHECK(remove_redundant(corr.dataset).log.empty());
}
