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

#include "dptune/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "dptune/error.hpp"

namespace dptune {
namespace {

ParameterSpec numeric(std::string name, double def, std::vector<double> values) {
  ParameterSpec s;
  s.name = std::move(name);
  s.kind = ParamKind::numeric;
  s.default_value = def;
  for (double v : values) s.candidates.emplace_back(v);
  return s;
}

ParameterSpec logical(std::string name, bool def, std::vector<bool> values) {
  ParameterSpec s;
  s.name = std::move(name);
  s.kind = ParamKind::logical;
  s.default_value = def;
  for (bool v : values) s.candidates.emplace_back(v);
  return s;
}

ParameterSpec factor(std::string name, std::string def, std::vector<std::string> values) {
  ParameterSpec s;
  s.name = std::move(name);
  s.kind = ParamKind::factor;
  s.default_value = std::move(def);
  for (auto& v : values) s.candidates.emplace_back(std::move(v));
  return s;
}

std::size_t as_count(double v) { return static_cast<std::size_t>(std::llround(std::max(1.0, v))); }

using Trainer = std::function<ModelPtr(const ParameterSetting&, const Matrix&,
                                       std::span<const int>, std::uint64_t)>;

struct Entry {
  std::string id;
  std::vector<ParameterSpec> specs;
  Trainer trainer;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = [] {
    std::vector<Entry> e;
    e.push_back({"knn",
                 {numeric("clusters", 1, {1, 5, 9, 13, 17})},
                 [](const ParameterSetting& s, const Matrix& x, std::span<const int> y,
                    std::uint64_t) { return train_knn({as_count(s.numeric("clusters"))}, x, y); }});
    e.push_back({"nb",
                 {numeric("laplace", 0, {0}), logical("kernel", false, {true, false})},
                 [](const ParameterSetting& s, const Matrix& x, std::span<const int> y,
                    std::uint64_t) {
                   return train_naive_bayes({s.numeric("laplace"), s.logical("kernel")}, x, y);
                 }});
    e.push_back({"glm", {},
                 [](const ParameterSetting&, const Matrix& x, std::span<const int> y,
                    std::uint64_t) { return train_logistic({}, x, y); }});
    e.push_back({"cart",
                 {numeric("complexity", 0.01, {0.0001, 0.001, 0.01, 0.1, 0.5})},
                 [](const ParameterSetting& s, const Matrix& x, std::span<const int> y,
                    std::uint64_t) { return train_cart({s.numeric("complexity")}, x, y); }});
    e.push_back({"rf",
                 {numeric("trees", 10, {10, 20, 30, 40, 50})},
                 [](const ParameterSetting& s, const Matrix& x, std::span<const int> y,
                    std::uint64_t seed) {
                   return train_random_forest({as_count(s.numeric("trees")), 0}, x, y, seed);
                 }});
    e.push_back({"boost",
                 {numeric("iterations", 1, {1, 10, 20, 30, 40}),
                  logical("winnow", false, {false, true}),
                  factor("model_type", "rules", {"rules", "tree"})},
                 [](const ParameterSetting& s, const Matrix& x, std::span<const int> y,
                    std::uint64_t) {
                   BoostOptions o;
                   o.rounds = as_count(s.numeric("iterations"));
                   o.winnow = s.logical("winnow");
                   o.depth = s.factor("model_type") == "tree" ? 3 : 1;
                   return train_boosted_trees(o, x, y);
                 }});
    e.push_back({"nnet",
                 {numeric("hidden_units", 1, {1, 3, 5, 7, 9}),
                  numeric("weight_decay", 0, {0, 0.0001, 0.001, 0.01, 0.1})},
                 [](const ParameterSetting& s, const Matrix& x, std::span<const int> y,
                    std::uint64_t seed) {
                   NnetOptions o;
                   o.hidden_units = as_count(s.numeric("hidden_units"));
                   o.weight_decay = s.numeric("weight_decay");
                   return train_nnet(o, x, y, seed);
                 }});
    return e;
  }();
  return entries;
}

const Entry& lookup(std::string_view id) {
  for (const auto& e : registry()) {
    if (e.id == id) return e;
  }
  throw ClassifierError("unknown classifier '" + std::string(id) + "'");
}

}  // namespace

TrainedModel::TrainedModel(std::string classifier_id, ParameterSetting setting,
                           std::vector<std::string> feature_names, ModelPtr model)
    : classifier_id_(std::move(classifier_id)),
      setting_(std::move(setting)),
      feature_names_(std::move(feature_names)),
      model_(std::move(model)) {}

std::vector<double> TrainedModel::predict_proba(const Matrix& rows) const {
  if (rows.rows() == 0) return {};
  if (rows.cols() != feature_names_.size()) {
    throw ClassifierError("model '" + classifier_id_ + "' expects " +
                          std::to_string(feature_names_.size()) + " columns, got " +
                          std::to_string(rows.cols()));
  }
  auto p = model_->predict(rows);
  for (auto& v : p) v = std::clamp(v, 0.0, 1.0);
  return p;
}

std::vector<double> TrainedModel::predict_proba(const Dataset& rows) const {
  if (rows.columns() != feature_names_) {
    throw ClassifierError("model '" + classifier_id_ + "': prediction columns do not match training columns");
  }
  return predict_proba(rows.features());
}

const std::vector<std::string>& classifier_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& e : registry()) out.push_back(e.id);
    return out;
  }();
  return ids;
}

bool is_classifier(std::string_view id) {
  const auto& ids = classifier_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

ParameterSpace parameter_space(std::string_view classifier_id) {
  const Entry& e = lookup(classifier_id);
  return ParameterSpace(e.id, e.specs);
}

ParameterSetting default_setting(std::string_view classifier_id) {
  return parameter_space(classifier_id).default_setting();
}

TrainedModel train(std::string_view classifier_id, const ParameterSetting& setting,
                   const Dataset& train_set, std::uint64_t seed) {
  const Entry& e = lookup(classifier_id);
  ParameterSpace(e.id, e.specs).validate(setting);
  const std::size_t defective = train_set.defective_count();
  if (defective == 0 || defective == train_set.size()) {
    throw ClassifierError("classifier '" + e.id + "' needs both classes in the training data");
  }
  ModelPtr model = e.trainer(setting, train_set.features(), train_set.labels(), seed);
  return TrainedModel(e.id, setting, train_set.columns(), std::move(model));
}

}  // namespace dptune
