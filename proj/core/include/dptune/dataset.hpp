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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dptune/matrix.hpp"

namespace dptune {

// A defect dataset: N modules described by P real-valued metrics and a
// binary outcome (1 = defective). Immutable once constructed.
class Dataset {
 public:
  Dataset() = default;

  // Validates shape, label values and column names; throws DatasetError.
  Dataset(std::string name, std::vector<std::string> columns, Matrix features,
          std::vector<int> labels, std::vector<std::string> row_ids = {});

  const std::string& name() const { return name_; }
  const std::vector<std::string>& columns() const { return columns_; }
  const Matrix& features() const { return features_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<std::string>& row_ids() const { return row_ids_; }

  std::size_t size() const { return labels_.size(); }
  std::size_t num_features() const { return columns_.size(); }
  std::size_t defective_count() const;
  std::size_t clean_count() const { return size() - defective_count(); }
  double defective_rate() const;

  // Index of a column by name, or npos.
  std::size_t column_index(std::string_view column) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  // Rows may repeat (bootstrap samples).
  Dataset subset(std::span<const std::size_t> rows) const;
  Dataset select_columns(std::span<const std::size_t> cols) const;
  Dataset with_features(Matrix features) const;
  Dataset with_name(std::string name) const;

 private:
  std::string name_;
  std::vector<std::string> columns_;
  Matrix features_;
  std::vector<int> labels_;
  std::vector<std::string> row_ids_;
};

struct InclusionVerdict {
  double epv = 0.0;
  double defective_rate = 0.0;
  bool passes_epv = false;
  bool passes_rate = false;
  bool included = false;
};

// Strict bound: EPV must exceed this value.
inline constexpr double kMinEventsPerVariable = 10.0;
// Inclusive bound on the defective rate.
inline constexpr double kMaxDefectiveRate = 0.5;

// Parses a header-first CSV. Label cells accept 0/1/true/false/yes/no in any
// case; every other column except `id_column` must parse as a real number.
Dataset load_dataset(const std::filesystem::path& path, std::string_view label_column,
                     std::string_view id_column = {});

// Writes metrics at shortest round-trip precision, label column last.
void save_dataset(const Dataset& dataset, const std::filesystem::path& path,
                  std::string_view label_column = "bug");

// min(#defective, #clean) / P.
double compute_epv(const Dataset& dataset);

InclusionVerdict check_inclusion(const Dataset& dataset);

// ln(x + 1) on every metric cell; negative cells are rejected.
Dataset log_transform(const Dataset& dataset);

}  // namespace dptune
