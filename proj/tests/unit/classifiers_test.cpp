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

#include "dptune/classifiers.hpp"
#include "dptune/error.hpp"
#include "dptune/synthetic.hpp"

using namespace dptune;

namespace {

std::vector<double> as_numbers(const ParameterSpec& spec) {
  std::vector<double> out;
  for (const auto& v : spec.candidates) out.push_back(std::get<double>(v));
  return out;
}

}  // namespace

TEST_CASE("registry lists the seven classifiers") {
  CHECK(classifier_ids() == std::vector<std::string>{"knn", "nb", "glm", "cart", "rf", "boost", "nnet"});
  CHECK(is_classifier("rf"));
  CHECK_FALSE(is_classifier("svm"));
  CHECK_THROWS_AS(parameter_space("svm"), ClassifierError);
  CHECK_THROWS_AS(default_setting("svm"), ClassifierError);
}

TEST_CASE("boost space follows the tuning table") {
  const auto space = parameter_space("boost");
  REQUIRE(space.specs().size() == 3);
  CHECK(space.specs()[0].name == "iterations");
  CHECK(as_numbers(space.specs()[0]) == std::vector<double>{1, 10, 20, 30, 40});
  CHECK(space.specs()[1].kind == ParamKind::logical);
  CHECK(space.specs()[2].kind == ParamKind::factor);
  CHECK(space.cartesian_size() == 20);
  const auto d = default_setting("boost");
  CHECK(d.numeric("iterations") == 1.0);
  CHECK_FALSE(d.logical("winnow"));
  CHECK(d.factor("model_type") == "rules");
}

TEST_CASE("defaults and candidate lists of the other classifiers") {
  CHECK(as_numbers(parameter_space("rf").specs()[0]) == std::vector<double>{10, 20, 30, 40, 50});
  CHECK(default_setting("rf").numeric("trees") == 10.0);
  CHECK(parameter_space("glm").specs().empty());
  CHECK(parameter_space("glm").cartesian_size() == 1);
  CHECK(default_setting("glm").id() == "none");
  CHECK(default_setting("cart").numeric("complexity") == 0.01);
  CHECK(as_numbers(parameter_space("cart").specs()[0]) ==
        std::vector<double>{0.0001, 0.001, 0.01, 0.1, 0.5});
  CHECK(default_setting("knn").numeric("clusters") == 1.0);
  CHECK(as_numbers(parameter_space("knn").specs()[0]) == std::vector<double>{1, 5, 9, 13, 17});
  CHECK(default_setting("nnet").numeric("hidden_units") == 1.0);
  CHECK(default_setting("nnet").numeric("weight_decay") == 0.0);
  CHECK(as_numbers(parameter_space("nnet").specs()[1]) == std::vector<double>{0, 0.0001, 0.001, 0.01, 0.1});
  for (const auto& id : classifier_ids()) CHECK_NOTHROW(parameter_space(id).validate(default_setting(id)));
}

TEST_CASE("every classifier trains, predicts in [0,1] and is deterministic") {
  const Dataset d = make_separable(150, 2, 2, 3);
  for (const auto& id : classifier_ids()) {
    const auto setting = default_setting(id);
    const auto m1 = train(id, setting, d, 7);
    const auto m2 = train(id, setting, d, 7);
    const auto p1 = m1.predict_proba(d);
    const auto p2 = m2.predict_proba(d);
    INFO(id);
    CHECK(p1 == p2);
    REQUIRE(p1.size() == d.size());
    for (double p : p1) CHECK((p >= 0.0 && p <= 1.0));
    CHECK(m1.classifier_id() == id);
    CHECK(m1.feature_names() == d.columns());
  }
}

TEST_CASE("kNN probabilities are multiples of 1/k") {
  const Dataset d = make_separable(100, 2, 2, 4);
  ParameterSetting k5({{"clusters", 5.0}});
  for (double p : train("knn", k5, d, 0).predict_proba(d)) {
    CHECK(std::abs(p * 5 - std::round(p * 5)) < 1e-12);
  }
}

TEST_CASE("all grid settings of every classifier train") {
  const Dataset d = make_nonlinear(120, 4, 5);
  for (const auto& id : classifier_ids()) {
    const auto space = parameter_space(id);
    std::vector<std::size_t> idx(space.specs().size(), 0);
    // Walk the last candidate of each parameter as well as the default.
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = space.specs()[k].candidates.size() - 1;
    const auto setting = space.setting_at(idx);
    INFO(id << " " << setting.id());
    CHECK_NOTHROW(train(id, setting, d, 1).predict_proba(d));
  }
}

TEST_CASE("train rejects invalid input") {
  const Dataset d = make_separable(60, 2, 1, 6);
  CHECK_THROWS_AS(train("rf", ParameterSetting({{"trees", ParamValue{true}}}), d, 0), ClassifierError);
  CHECK_THROWS_AS(train("rf", ParameterSetting({{"bogus", 10.0}}), d, 0), Error);
  CHECK_THROWS_AS(train("svm", ParameterSetting{}, d, 0), ClassifierError);

  std::vector<std::size_t> clean_rows;
  for (std::size_t r = 0; r < d.size(); ++r) {
    if (d.labels()[r] == 0) clean_rows.push_back(r);
  }
  CHECK_THROWS_AS(train("glm", ParameterSetting{}, d.subset(clean_rows), 0), ClassifierError);
}

TEST_CASE("predict_proba checks columns and accepts empty input") {
  const Dataset d = make_separable(60, 2, 1, 7);
  const auto m = train("cart", default_setting("cart"), d, 0);
  CHECK(m.predict_proba(Matrix(0, 3)).empty());
  CHECK_THROWS_AS(m.predict_proba(Matrix(2, 2)), ClassifierError);
  const std::vector<std::size_t> first_two{0, 1};
  CHECK_THROWS_AS(m.predict_proba(d.select_columns(first_two)), ClassifierError);
}

TEST_CASE("logistic probabilities follow the separating direction") {
  Matrix x(8, 1);
  std::vector<int> y(8);
  for (std::size_t i = 0; i < 8; ++i) {
    x(i, 0) = static_cast<double>(i);
    y[i] = i >= 4 ? 1 : 0;
  }
  const Dataset d("toy", {"loc"}, x, y);
  const auto p = train("glm", ParameterSetting{}, d, 0).predict_proba(d);
  for (std::size_t i = 1; i < 8; ++i) CHECK(p[i] > p[i - 1]);
}

TEST_CASE("model_type selects tree depth") {
  const Dataset d = make_nonlinear(300, 3, 8);
  ParameterSetting rules({{"iterations", 1.0}, {"winnow", false}, {"model_type", std::string("rules")}});
  ParameterSetting tree({{"iterations", 1.0}, {"winnow", false}, {"model_type", std::string("tree")}});
  auto distinct = [](std::vector<double> p) {
    std::sort(p.begin(), p.end());
    return static_cast<std::size_t>(std::unique(p.begin(), p.end()) - p.begin());
  };
  CHECK(distinct(train("boost", rules, d, 0).predict_proba(d)) <= 2);
  CHECK(distinct(train("boost", tree, d, 0).predict_proba(d)) > 2);
}
