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

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace dptune {

enum class ParamKind { numeric, logical, factor };

const char* to_string(ParamKind kind);

// numeric -> double, logical -> bool, factor -> level name.
using ParamValue = std::variant<double, bool, std::string>;

ParamKind kind_of(const ParamValue& value);

// Shortest round-trip decimal for numerics, TRUE/FALSE for logicals.
std::string format_value(const ParamValue& value);

struct ParameterSpec {
  std::string name;
  ParamKind kind = ParamKind::numeric;
  ParamValue default_value;
  std::vector<ParamValue> candidates;

  std::size_t default_index() const;
};

// One concrete assignment, kept in the declaring space's parameter order.
class ParameterSetting {
 public:
  ParameterSetting() = default;
  explicit ParameterSetting(std::vector<std::pair<std::string, ParamValue>> entries)
      : entries_(std::move(entries)) {}

  const std::vector<std::pair<std::string, ParamValue>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  bool contains(std::string_view name) const;
  const ParamValue& at(std::string_view name) const;
  double numeric(std::string_view name) const;
  bool logical(std::string_view name) const;
  const std::string& factor(std::string_view name) const;

  // "name=value;name=value", or "none" for the empty setting. Stable and
  // unique per setting within a space; used as cache and report key.
  std::string id() const;

  friend bool operator==(const ParameterSetting&, const ParameterSetting&) = default;

 private:
  std::vector<std::pair<std::string, ParamValue>> entries_;
};

class ParameterSpace {
 public:
  ParameterSpace() = default;
  // Throws ClassifierError when a spec violates its invariants.
  ParameterSpace(std::string classifier_id, std::vector<ParameterSpec> specs);

  const std::string& classifier_id() const { return classifier_id_; }
  const std::vector<ParameterSpec>& specs() const { return specs_; }
  bool empty() const { return specs_.empty(); }
  std::size_t dimensions() const { return specs_.size(); }

  // Product of candidate-list sizes (1 for the empty space).
  std::size_t cartesian_size() const;

  ParameterSetting default_setting() const;

  // Builds the setting choosing candidates[indices[k]] for spec k.
  ParameterSetting setting_at(const std::vector<std::size_t>& indices) const;

  // Throws ClassifierError when names or kinds do not match the space.
  void validate(const ParameterSetting& setting) const;

 private:
  std::string classifier_id_;
  std::vector<ParameterSpec> specs_;
};

}  // namespace dptune
