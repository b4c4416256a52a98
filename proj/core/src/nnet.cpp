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

#include <cmath>

#include "dptune/learners.hpp"

namespace dptune {
namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Weights laid out per hidden unit as [bias, w_1..w_P], then the output
// layer as [bias, v_1..v_H].
class NnetModel final : public Model {
 public:
  NnetModel(Standardizer s, std::size_t inputs, std::size_t hidden, std::vector<double> weights)
      : standardizer_(std::move(s)), inputs_(inputs), hidden_(hidden), weights_(std::move(weights)) {}

  std::vector<double> predict(const Matrix& rows) const override {
    const Matrix z = standardizer_.apply(rows);
    std::vector<double> out(z.rows());
    std::vector<double> h(hidden_);
    for (std::size_t r = 0; r < z.rows(); ++r) out[r] = forward(z.row(r), h);
    return out;
  }

  double forward(std::span<const double> row, std::vector<double>& h) const {
    const std::size_t stride = inputs_ + 1;
    for (std::size_t j = 0; j < hidden_; ++j) {
      const double* w = weights_.data() + j * stride;
      double a = w[0];
      for (std::size_t c = 0; c < inputs_; ++c) a += w[c + 1] * row[c];
      h[j] = sigmoid(a);
    }
    const double* v = weights_.data() + hidden_ * stride;
    double a = v[0];
    for (std::size_t j = 0; j < hidden_; ++j) a += v[j + 1] * h[j];
    return sigmoid(a);
  }

 private:
  Standardizer standardizer_;
  std::size_t inputs_;
  std::size_t hidden_;
  std::vector<double> weights_;
};

}  // namespace

// Full-batch gradient descent on mean cross-entropy + decay * sum(w^2).
ModelPtr train_nnet(const NnetOptions& options, const Matrix& x, std::span<const int> y,
                    std::uint64_t seed) {
  Standardizer s = Standardizer::fit(x);
  const Matrix z = s.apply(x);
  const std::size_t n = z.rows();
  const std::size_t p = z.cols();
  const std::size_t hidden = std::max<std::size_t>(1, options.hidden_units);
  const std::size_t stride = p + 1;
  const std::size_t total = hidden * stride + hidden + 1;

  Engine engine(seed);
  std::vector<double> w(total);
  for (auto& wi : w) wi = uniform01(engine) - 0.5;

  std::vector<double> grad(total);
  std::vector<double> h(hidden);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    const double* v = w.data() + hidden * stride;
    double* gv = grad.data() + hidden * stride;
    for (std::size_t r = 0; r < n; ++r) {
      const auto row = z.row(r);
      for (std::size_t j = 0; j < hidden; ++j) {
        const double* wj = w.data() + j * stride;
        double a = wj[0];
        for (std::size_t c = 0; c < p; ++c) a += wj[c + 1] * row[c];
        h[j] = sigmoid(a);
      }
      double a = v[0];
      for (std::size_t j = 0; j < hidden; ++j) a += v[j + 1] * h[j];
      const double delta_out = (sigmoid(a) - static_cast<double>(y[r])) * inv_n;
      gv[0] += delta_out;
      for (std::size_t j = 0; j < hidden; ++j) {
        gv[j + 1] += delta_out * h[j];
        const double delta_h = delta_out * v[j + 1] * h[j] * (1.0 - h[j]);
        double* gj = grad.data() + j * stride;
        gj[0] += delta_h;
        for (std::size_t c = 0; c < p; ++c) gj[c + 1] += delta_h * row[c];
      }
    }
    for (std::size_t i = 0; i < total; ++i) {
      w[i] -= options.learning_rate * (grad[i] + 2.0 * options.weight_decay * w[i]);
    }
  }
  return std::make_shared<NnetModel>(std::move(s), p, hidden, std::move(w));
}

}  // namespace dptune
