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

#include "dptune/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "dptune/error.hpp"

namespace dptune {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

bool parse_real(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size() && std::isfinite(out);
}

bool parse_label(std::string_view cell, int& out) {
  std::string lower(cell);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "1" || lower == "true" || lower == "yes") {
    out = 1;
    return true;
  }
  if (lower == "0" || lower == "false" || lower == "no") {
    out = 0;
    return true;
  }
  // Defect counts: any positive whole number marks a defective module.
  double count = 0.0;
  if (parse_real(cell, count) && count >= 0.0 && std::floor(count) == count) {
    out = count > 0.0 ? 1 : 0;
    return true;
  }
  return false;
}

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

Dataset::Dataset(std::string name, std::vector<std::string> columns, Matrix features,
                 std::vector<int> labels, std::vector<std::string> row_ids)
    : name_(std::move(name)),
      columns_(std::move(columns)),
      features_(std::move(features)),
      labels_(std::move(labels)),
      row_ids_(std::move(row_ids)) {
  if (labels_.empty()) throw DatasetError("dataset '" + name_ + "' has no rows");
  if (columns_.empty()) throw DatasetError("dataset '" + name_ + "' has no metric columns");
  if (features_.rows() != labels_.size() || features_.cols() != columns_.size()) {
    throw DatasetError("dataset '" + name_ + "': feature matrix shape does not match labels/columns");
  }
  std::set<std::string_view> seen;
  for (const auto& c : columns_) {
    if (c.empty()) throw DatasetError("dataset '" + name_ + "': empty column name");
    if (!seen.insert(c).second) {
      throw DatasetError("dataset '" + name_ + "': duplicate column name '" + c + "'");
    }
  }
  for (int y : labels_) {
    if (y != 0 && y != 1) throw DatasetError("dataset '" + name_ + "': labels must be 0 or 1");
  }
  for (double v : features_.data()) {
    if (!std::isfinite(v)) throw DatasetError("dataset '" + name_ + "': non-finite metric value");
  }
  if (row_ids_.empty()) {
    row_ids_.reserve(labels_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i) row_ids_.push_back(std::to_string(i + 1));
  } else if (row_ids_.size() != labels_.size()) {
    throw DatasetError("dataset '" + name_ + "': row id count does not match rows");
  }
}

std::size_t Dataset::defective_count() const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), 1));
}

double Dataset::defective_rate() const {
  return static_cast<double>(defective_count()) / static_cast<double>(size());
}

std::size_t Dataset::column_index(std::string_view column) const {
  const auto it = std::find(columns_.begin(), columns_.end(), column);
  return it == columns_.end() ? npos : static_cast<std::size_t>(it - columns_.begin());
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  std::vector<int> labels;
  std::vector<std::string> ids;
  labels.reserve(rows.size());
  ids.reserve(rows.size());
  for (std::size_t r : rows) {
    labels.push_back(labels_.at(r));
    ids.push_back(row_ids_[r]);
  }
  return Dataset(name_, columns_, features_.select_rows(rows), std::move(labels), std::move(ids));
}

Dataset Dataset::select_columns(std::span<const std::size_t> cols) const {
  std::vector<std::string> names;
  names.reserve(cols.size());
  for (std::size_t c : cols) names.push_back(columns_.at(c));
  return Dataset(name_, std::move(names), features_.select_cols(cols), labels_, row_ids_);
}

Dataset Dataset::with_features(Matrix features) const {
  return Dataset(name_, columns_, std::move(features), labels_, row_ids_);
}

Dataset Dataset::with_name(std::string name) const {
  return Dataset(std::move(name), columns_, features_, labels_, row_ids_);
}

Dataset load_dataset(const std::filesystem::path& path, std::string_view label_column,
                     std::string_view id_column) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open dataset file '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line)) throw DatasetError("'" + path.string() + "' is empty");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  const auto header = split_fields(line);
  std::vector<std::string> header_names(header.begin(), header.end());
  {
    std::set<std::string_view> seen;
    for (const auto& h : header_names) {
      if (!seen.insert(h).second) {
        throw DatasetError("'" + path.string() + "': duplicate column name '" + h + "'");
      }
    }
  }
  const auto label_it = std::find(header_names.begin(), header_names.end(), label_column);
  if (label_it == header_names.end()) {
    throw DatasetError("'" + path.string() + "': label column '" + std::string(label_column) +
                       "' not found");
  }
  const std::size_t label_pos = static_cast<std::size_t>(label_it - header_names.begin());
  std::size_t id_pos = Dataset::npos;
  if (!id_column.empty()) {
    const auto id_it = std::find(header_names.begin(), header_names.end(), id_column);
    if (id_it == header_names.end()) {
      throw DatasetError("'" + path.string() + "': id column '" + std::string(id_column) +
                         "' not found");
    }
    id_pos = static_cast<std::size_t>(id_it - header_names.begin());
  }

  std::vector<std::string> columns;
  std::vector<std::size_t> metric_pos;
  for (std::size_t i = 0; i < header_names.size(); ++i) {
    if (i == label_pos || i == id_pos) continue;
    columns.push_back(header_names[i]);
    metric_pos.push_back(i);
  }

  std::vector<double> cells;
  std::vector<int> labels;
  std::vector<std::string> ids;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header_names.size()) {
      std::ostringstream msg;
      msg << "'" << path.string() << "' line " << line_no << ": expected " << header_names.size()
          << " fields, found " << fields.size();
      throw DatasetError(msg.str());
    }
    int y = 0;
    if (!parse_label(fields[label_pos], y)) {
      std::ostringstream msg;
      msg << "'" << path.string() << "' line " << line_no << ", column '" << label_column
          << "': cannot parse label '" << fields[label_pos] << "'";
      throw DatasetError(msg.str());
    }
    labels.push_back(y);
    for (std::size_t k = 0; k < metric_pos.size(); ++k) {
      double v = 0.0;
      if (!parse_real(fields[metric_pos[k]], v)) {
        std::ostringstream msg;
        msg << "'" << path.string() << "' line " << line_no << ", column '" << columns[k]
            << "': cannot parse '" << fields[metric_pos[k]] << "' as a number";
        throw DatasetError(msg.str());
      }
      cells.push_back(v);
    }
    ids.push_back(id_pos == Dataset::npos ? std::to_string(labels.size())
                                          : std::string(fields[id_pos]));
  }

  const std::size_t n = labels.size();
  const std::size_t p = columns.size();
  std::string name = path.stem().string();
  if (n == 0) throw DatasetError("'" + path.string() + "' has no data rows");
  return Dataset(std::move(name), std::move(columns), Matrix(n, p, std::move(cells)),
                 std::move(labels), std::move(ids));
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path,
                  std::string_view label_column) {
  std::ofstream out(path);
  if (!out) throw DatasetError("cannot write dataset file '" + path.string() + "'");
  for (const auto& c : dataset.columns()) out << c << ',';
  out << label_column << '\n';
  const Matrix& x = dataset.features();
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) out << format_real(x(r, c)) << ',';
    out << dataset.labels()[r] << '\n';
  }
}

double compute_epv(const Dataset& dataset) {
  const auto minority = std::min(dataset.defective_count(), dataset.clean_count());
  return static_cast<double>(minority) / static_cast<double>(dataset.num_features());
}

InclusionVerdict check_inclusion(const Dataset& dataset) {
  InclusionVerdict v;
  v.epv = compute_epv(dataset);
  v.defective_rate = dataset.defective_rate();
  v.passes_epv = v.epv > kMinEventsPerVariable;
  v.passes_rate = v.defective_rate <= kMaxDefectiveRate;
  v.included = v.passes_epv && v.passes_rate;
  return v;
}

Dataset log_transform(const Dataset& dataset) {
  Matrix x = dataset.features();
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) {
      if (x(r, c) < 0.0) {
        std::ostringstream msg;
        msg << "dataset '" << dataset.name() << "' row " << (r + 1) << " ("
            << dataset.row_ids()[r] << "), column '" << dataset.columns()[c]
            << "': negative value " << x(r, c) << " cannot be log-transformed";
        throw DatasetError(msg.str());
      }
      x(r, c) = std::log1p(x(r, c));
    }
  }
  return dataset.with_features(std::move(x));
}

}  // namespace dptune
