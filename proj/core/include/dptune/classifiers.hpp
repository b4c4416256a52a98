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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dptune/dataset.hpp"
#include "dptune/learners.hpp"
#include "dptune/parameters.hpp"

namespace dptune {

// A fitted classifier bound to the columns it was trained on. Immutable and
// safe to share between threads.
class TrainedModel {
 public:
  TrainedModel(std::string classifier_id, ParameterSetting setting,
               std::vector<std::string> feature_names, ModelPtr model);

  const std::string& classifier_id() const { return classifier_id_; }
  const ParameterSetting& setting() const { return setting_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }

  // Rows must have the training column count; throws ClassifierError.
  std::vector<double> predict_proba(const Matrix& rows) const;
  // Columns must match the training columns by name and order.
  std::vector<double> predict_proba(const Dataset& rows) const;

 private:
  std::string classifier_id_;
  ParameterSetting setting_;
  std::vector<std::string> feature_names_;
  ModelPtr model_;
};

// Stable registry ids: knn, nb, glm, cart, rf, boost, nnet.
const std::vector<std::string>& classifier_ids();
bool is_classifier(std::string_view id);

ParameterSpace parameter_space(std::string_view classifier_id);
ParameterSetting default_setting(std::string_view classifier_id);

// Deterministic in (inputs, seed). Throws ClassifierError for unknown ids,
// settings outside the space, or single-class training data.
TrainedModel train(std::string_view classifier_id, const ParameterSetting& setting,
                   const Dataset& train_set, std::uint64_t seed);

}  // namespace dptune
