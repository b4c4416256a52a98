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

#include "dptune/parameters.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "dptune/error.hpp"

namespace dptune {

const char* to_string(ParamKind kind) {
  switch (kind) {
    case ParamKind::numeric:
      return "numeric";
    case ParamKind::logical:
      return "logical";
    case ParamKind::factor:
      return "factor";
  }
  return "?";
}

ParamKind kind_of(const ParamValue& value) {
  switch (value.index()) {
    case 0:
      return ParamKind::numeric;
    case 1:
      return ParamKind::logical;
    default:
      return ParamKind::factor;
  }
}

std::string format_value(const ParamValue& value) {
  if (const double* d = std::get_if<double>(&value)) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), *d);
    return std::string(buf, ptr);
  }
  if (const bool* b = std::get_if<bool>(&value)) return *b ? "TRUE" : "FALSE";
  return std::get<std::string>(value);
}

std::size_t ParameterSpec::default_index() const {
  const auto it = std::find(candidates.begin(), candidates.end(), default_value);
  return static_cast<std::size_t>(it - candidates.begin());
}

bool ParameterSetting::contains(std::string_view name) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const auto& e) { return e.first == name; });
}

const ParamValue& ParameterSetting::at(std::string_view name) const {
  for (const auto& [n, v] : entries_) {
    if (n == name) return v;
  }
  throw ClassifierError("parameter '" + std::string(name) + "' is not part of the setting");
}

double ParameterSetting::numeric(std::string_view name) const {
  const auto* v = std::get_if<double>(&at(name));
  if (!v) throw ClassifierError("parameter '" + std::string(name) + "' is not numeric");
  return *v;
}

bool ParameterSetting::logical(std::string_view name) const {
  const auto* v = std::get_if<bool>(&at(name));
  if (!v) throw ClassifierError("parameter '" + std::string(name) + "' is not logical");
  return *v;
}

const std::string& ParameterSetting::factor(std::string_view name) const {
  const auto* v = std::get_if<std::string>(&at(name));
  if (!v) throw ClassifierError("parameter '" + std::string(name) + "' is not a factor");
  return *v;
}

std::string ParameterSetting::id() const {
  if (entries_.empty()) return "none";
  std::string out;
  for (const auto& [n, v] : entries_) {
    if (!out.empty()) out += ';';
    out += n;
    out += '=';
    out += format_value(v);
  }
  return out;
}

ParameterSpace::ParameterSpace(std::string classifier_id, std::vector<ParameterSpec> specs)
    : classifier_id_(std::move(classifier_id)), specs_(std::move(specs)) {
  std::set<std::string_view> names;
  for (const auto& s : specs_) {
    const std::string where = classifier_id_ + "." + s.name;
    if (s.name.empty() || !names.insert(s.name).second) {
      throw ClassifierError("parameter names must be unique and non-empty: " + where);
    }
    if (s.candidates.empty()) throw ClassifierError("no candidates for " + where);
    for (std::size_t i = 0; i < s.candidates.size(); ++i) {
      if (kind_of(s.candidates[i]) != s.kind) {
        throw ClassifierError("candidate of wrong kind for " + where);
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (s.candidates[i] == s.candidates[j]) {
          throw ClassifierError("duplicate candidate for " + where);
        }
      }
      if (s.kind == ParamKind::numeric && i > 0 &&
          !(std::get<double>(s.candidates[i - 1]) < std::get<double>(s.candidates[i]))) {
        throw ClassifierError("numeric candidates must be strictly increasing for " + where);
      }
    }
    if (s.default_index() == s.candidates.size()) {
      throw ClassifierError("default value is not a candidate for " + where);
    }
  }
}

std::size_t ParameterSpace::cartesian_size() const {
  std::size_t n = 1;
  for (const auto& s : specs_) n *= s.candidates.size();
  return n;
}

ParameterSetting ParameterSpace::default_setting() const {
  std::vector<std::pair<std::string, ParamValue>> entries;
  for (const auto& s : specs_) entries.emplace_back(s.name, s.default_value);
  return ParameterSetting(std::move(entries));
}

ParameterSetting ParameterSpace::setting_at(const std::vector<std::size_t>& indices) const {
  if (indices.size() != specs_.size()) {
    throw ClassifierError("setting_at: index count does not match the space");
  }
  std::vector<std::pair<std::string, ParamValue>> entries;
  for (std::size_t k = 0; k < specs_.size(); ++k) {
    entries.emplace_back(specs_[k].name, specs_[k].candidates.at(indices[k]));
  }
  return ParameterSetting(std::move(entries));
}

void ParameterSpace::validate(const ParameterSetting& setting) const {
  if (setting.size() != specs_.size()) {
    throw ClassifierError("setting '" + setting.id() + "' does not match the parameter space of '" +
                          classifier_id_ + "'");
  }
  for (std::size_t k = 0; k < specs_.size(); ++k) {
    const auto& [name, value] = setting.entries()[k];
    if (name != specs_[k].name || kind_of(value) != specs_[k].kind) {
      throw ClassifierError("setting '" + setting.id() + "' does not match the parameter space of '" +
                            classifier_id_ + "'");
    }
  }
}

}  // namespace dptune
