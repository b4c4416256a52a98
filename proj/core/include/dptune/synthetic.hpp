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
#include <cstdint>
#include <string>

#include "dptune/dataset.hpp"

namespace dptune {

// Linearly separable data: the label is whether the mean of the first
// `informative` metrics exceeds 6 (metrics ~ U(0, 10)); rows within `margin`
// of the boundary are redrawn. The remaining `noise` metrics are independent
// U(0, 10) noise.
Dataset make_separable(std::size_t rows, std::size_t informative, std::size_t noise,
                       std::uint64_t seed, double margin = 0.3,
                       std::string name = "separable");

// Interaction data: defective iff (m1 > 8) XOR (m2 > 7), labels flipped with
// probability `label_noise`; all `features` metrics ~ U(0, 10), only the first
// two matter. No single metric threshold separates the classes, so boosting
// rounds and tree depth drive performance.
Dataset make_nonlinear(std::size_t rows, std::size_t features, std::uint64_t seed,
                       double label_noise = 0.05, std::string name = "nonlinear");

// Copy of `d` with one extra U(0, 10) column named `column`.
Dataset append_noise_column(const Dataset& d, std::uint64_t seed, std::string column = "noise");

}  // namespace dptune
