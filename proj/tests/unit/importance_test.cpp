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

#include <numeric>

#include "dptune/classifiers.hpp"
#include "dptune/error.hpp"
#include "dptune/importance.hpp"
#include "dptune/rng.hpp"
#include "dptune/synthetic.hpp"
#include "oracles.hpp"

using namespace dptune;

namespace {

RankTable table(std::vector<std::vector<std::string>> groups) {
  std::vector<std::vector<RankEntry>> out;
  int rank = 0;
  for (auto& g : groups) {
    ++rank;
    std::vector<RankEntry> entries;
    for (auto& name : g) entries.push_back({name, rank, 0.0});
    out.push_back(std::move(entries));
  }
  return RankTable(std::move(out));
}

}  // namespace

TEST_CASE("misclassification uses the strict 0.5 cut-off") {
  const std::vector<double> p{0.5, 0.51, 0.2, 0.9};
  const std::vector<int> y{1, 1, 0, 0};
  CHECK(misclassification_rate(p, y) == 0.5);
}

TEST_CASE("a variable the model ignores has zero importance") {
  const Dataset base = make_separable(150, 2, 0, 3);
  Matrix x(base.size(), 3);
  for (std::size_t r = 0; r < base.size(); ++r) {
    x(r, 0) = base.features()(r, 0);
    x(r, 1) = 4.0;  // constant during training
    x(r, 2) = base.features()(r, 1);
  }
  const Dataset train_set("t", {"a", "flat", "b"}, x, base.labels());
  const auto model = train("cart", default_setting("cart"), train_set, 0);
  const Dataset test = append_noise_column(make_separable(60, 2, 0, 4), 5, "flat");
  // reorder the test columns to a, flat, b with varying values in flat
  Matrix tx(test.size(), 3);
  for (std::size_t r = 0; r < test.size(); ++r) {
    tx(r, 0) = test.features()(r, 0);
    tx(r, 1) = test.features()(r, 2);
    tx(r, 2) = test.features()(r, 1);
  }
  const Dataset probe("p", {"a", "flat", "b"}, tx, test.labels());
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CHECK(permutation_importance(model, probe, seed)[1] == 0.0);
  }
}

TEST_CASE("a derangement of a perfect single feature is scored by hand") {
  Matrix x(6, 1);
  for (std::size_t i = 0; i < 6; ++i) x(i, 0) = static_cast<double>(i + 1);
  const std::vector<int> y{0, 0, 0, 1, 1, 1};
  const Dataset d("six", {"m"}, x, y);
  const auto model = train("knn", default_setting("knn"), d, 0);
  REQUIRE(misclassification_rate(model.predict_proba(d), y) == 0.0);

  bool found = false;
  for (std::uint64_t seed = 0; seed < 500 && !found; ++seed) {
    std::vector<std::size_t> perm(6);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Engine engine(derive_seed(seed, 0));
    shuffle(perm.begin(), perm.end(), engine);
    bool derangement = true;
    for (std::size_t i = 0; i < 6; ++i) derangement = derangement && perm[i] != i;
    if (!derangement) continue;
    found = true;
    // Row i now carries the value of row perm[i], so 1-NN predicts y[perm[i]].
    double wrong = 0.0;
    for (std::size_t i = 0; i < 6; ++i) wrong += y[perm[i]] != y[i] ? 1.0 : 0.0;
    CHECK(permutation_importance(model, d, seed)[0] == wrong / 6.0);
  }
  CHECK(found);
}

TEST_CASE("permutation importance is seed-determined and checks columns") {
  const Dataset d = make_separable(100, 2, 2, 6);
  const auto model = train("rf", default_setting("rf"), d, 1);
  CHECK(permutation_importance(model, d, 9) == permutation_importance(model, d, 9));
  const std::vector<std::size_t> cols{0, 1, 2};
  CHECK_THROWS_AS(permutation_importance(model, d.select_columns(cols), 9), ClassifierError);
}

TEST_CASE("rank_variables separates a dominant variable") {
  ImportanceScores scores({"big", "n1", "n2"});
  for (int r = 0; r < 20; ++r) {
    const double jitter = 0.001 * (r % 5);
    const double shifted = 0.001 * ((r + 2) % 5);  // same values as jitter, other order
    const std::vector<double> rep{0.3 + jitter, 0.01 + jitter, 0.01 + shifted};
    scores.add_repetition(rep);
  }
  CHECK(scores.repetitions() == 20);
  const auto ranks = rank_variables(scores);
  REQUIRE(ranks.groups().size() >= 2);
  CHECK(ranks.groups()[0].size() == 1);
  CHECK(ranks.rank_of("big") == 1);
  CHECK(ranks.rank_of("n1") == ranks.rank_of("n2"));
  const std::vector<double> wrong{1.0};
  CHECK_THROWS_AS(scores.add_repetition(wrong), Error);
}

TEST_CASE("noise-only importance forms a single rank") {
  ImportanceScores scores({"a", "b", "c"});
  for (int r = 0; r < 30; ++r) {
    const double v = 0.01 * (r % 3);
    const std::vector<double> rep{v, v, v};
    scores.add_repetition(rep);
  }
  CHECK(rank_variables(scores).num_ranks() == 1);
}

TEST_CASE("rank shift sign and overlap") {
  const auto same = rank_shift(table({{"a"}, {"b", "c"}}), table({{"a"}, {"b", "c"}}));
  for (const auto& e : same.entries) CHECK(e.shift == 0);
  for (const auto& o : same.overlap) CHECK(o.fraction == 1.0);

  const auto moved = rank_shift(table({{"v"}, {"w"}, {"x"}}), table({{"w"}, {"x"}, {"v"}}));
  CHECK(moved.entries[0].variable == "v");
  CHECK(moved.entries[0].rank_optimized == 1);
  CHECK(moved.entries[0].rank_default == 3);
  CHECK(moved.entries[0].shift == -2);
  CHECK(moved.overlap[0].fraction == 0.0);

  CHECK_THROWS_AS(rank_shift(table({{"a"}}), table({{"b"}})), Error);
}
