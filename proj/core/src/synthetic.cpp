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

#include "dptune/synthetic.hpp"

#include "dptune/error.hpp"
#include "dptune/rng.hpp"

#include <cmath>

namespace dptune {
namespace {

std::vector<std::string> metric_names(std::size_t count, std::size_t offset = 0) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < count; ++j) names.push_back("m" + std::to_string(j + 1 + offset));
  return names;
}

}  // namespace

Dataset make_separable(std::size_t rows, std::size_t informative, std::size_t noise,
                       std::uint64_t seed, double margin, std::string name) {
  if (rows < 2 || informative == 0) throw DatasetError("make_separable: need rows >= 2 and informative >= 1");
  Engine engine(seed);
  const std::size_t p = informative + noise;
  Matrix x(rows, p);
  std::vector<int> y(rows);
  constexpr double kBoundary = 6.0;
  for (std::size_t r = 0; r < rows; ++r) {
    double score = 0.0;
    do {
      score = 0.0;
      for (std::size_t j = 0; j < informative; ++j) {
        x(r, j) = 10.0 * uniform01(engine);
        score += x(r, j);
      }
      score /= static_cast<double>(informative);
    } while (std::abs(score - kBoundary) < margin);
    y[r] = score > kBoundary ? 1 : 0;
    for (std::size_t j = informative; j < p; ++j) x(r, j) = 10.0 * uniform01(engine);
  }
  return Dataset(std::move(name), metric_names(p), std::move(x), std::move(y));
}

Dataset make_nonlinear(std::size_t rows, std::size_t features, std::uint64_t seed,
                       double label_noise, std::string name) {
  if (rows < 2 || features < 2) throw DatasetError("make_nonlinear: need rows >= 2 and features >= 2");
  Engine engine(seed);
  Matrix x(rows, features);
  std::vector<int> y(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < features; ++j) x(r, j) = 10.0 * uniform01(engine);
    int label = (x(r, 0) > 8.0) != (x(r, 1) > 7.0) ? 1 : 0;
    if (uniform01(engine) < label_noise) label = 1 - label;
    y[r] = label;
  }
  return Dataset(std::move(name), metric_names(features), std::move(x), std::move(y));
}

Dataset append_noise_column(const Dataset& d, std::uint64_t seed, std::string column) {
  Engine engine(seed);
  const Matrix& src = d.features();
  Matrix x(src.rows(), src.cols() + 1);
  for (std::size_t r = 0; r < src.rows(); ++r) {
    for (std::size_t c = 0; c < src.cols(); ++c) x(r, c) = src(r, c);
    x(r, src.cols()) = 10.0 * uniform01(engine);
  }
  auto names = d.columns();
  names.push_back(std::move(column));
  return Dataset(d.name(), std::move(names), std::move(x), d.labels(), d.row_ids());
}

}  // namespace dptune
