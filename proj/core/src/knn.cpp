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

#include <algorithm>
#include <utility>

#include "dptune/learners.hpp"

namespace dptune {
namespace {

class KnnModel final : public Model {
 public:
  KnnModel(std::size_t k, Standardizer standardizer, Matrix train, std::vector<int> labels)
      : k_(k),
        standardizer_(std::move(standardizer)),
        train_(std::move(train)),
        labels_(std::move(labels)) {}

  std::vector<double> predict(const Matrix& rows) const override {
    const Matrix q = standardizer_.apply(rows);
    const std::size_t n = train_.rows();
    const std::size_t k = std::min(k_, n);
    std::vector<std::pair<double, std::size_t>> dist(n);
    std::vector<double> out(q.rows());
    for (std::size_t r = 0; r < q.rows(); ++r) {
      const auto query = q.row(r);
      for (std::size_t i = 0; i < n; ++i) {
        const auto t = train_.row(i);
        double d = 0.0;
        for (std::size_t c = 0; c < t.size(); ++c) {
          const double diff = t[c] - query[c];
          d += diff * diff;
        }
        dist[i] = {d, i};
      }
      // (distance, row) ordering breaks distance ties by training row order
      std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1), dist.end());
      std::size_t defective = 0;
      for (std::size_t j = 0; j < k; ++j) defective += labels_[dist[j].second] == 1 ? 1 : 0;
      out[r] = static_cast<double>(defective) / static_cast<double>(k);
    }
    return out;
  }

 private:
  std::size_t k_;
  Standardizer standardizer_;
  Matrix train_;
  std::vector<int> labels_;
};

}  // namespace

ModelPtr train_knn(const KnnOptions& options, const Matrix& x, std::span<const int> y) {
  Standardizer s = Standardizer::fit(x);
  Matrix train = s.apply(x);
  return std::make_shared<KnnModel>(std::max<std::size_t>(1, options.k), std::move(s),
                                    std::move(train), std::vector<int>(y.begin(), y.end()));
}

}  // namespace dptune
