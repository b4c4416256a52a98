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

#include <Eigen/Dense>

#include <cmath>

#include "dptune/learners.hpp"

namespace dptune {
namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

class LogisticModel final : public Model {
 public:
  LogisticModel(Standardizer s, Eigen::VectorXd beta)
      : standardizer_(std::move(s)), beta_(std::move(beta)) {}

  std::vector<double> predict(const Matrix& rows) const override {
    const Matrix z = standardizer_.apply(rows);
    std::vector<double> out(z.rows());
    for (std::size_t r = 0; r < z.rows(); ++r) {
      double eta = beta_(0);
      for (std::size_t c = 0; c < z.cols(); ++c) eta += beta_(static_cast<Eigen::Index>(c) + 1) * z(r, c);
      out[r] = sigmoid(eta);
    }
    return out;
  }

 private:
  Standardizer standardizer_;
  Eigen::VectorXd beta_;
};

}  // namespace

// Newton-Raphson (IRLS) on the ridge-penalized log-likelihood; the intercept
// is not penalized.
ModelPtr train_logistic(const LogisticOptions& options, const Matrix& x, std::span<const int> y) {
  Standardizer s = Standardizer::fit(x);
  const Matrix z = s.apply(x);
  const auto n = static_cast<Eigen::Index>(z.rows());
  const auto k = static_cast<Eigen::Index>(z.cols()) + 1;
  Eigen::MatrixXd design(n, k);
  Eigen::VectorXd target(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    design(r, 0) = 1.0;
    for (Eigen::Index c = 1; c < k; ++c) design(r, c) = z(static_cast<std::size_t>(r), static_cast<std::size_t>(c - 1));
    target(r) = y[static_cast<std::size_t>(r)];
  }
  Eigen::VectorXd penalty = Eigen::VectorXd::Constant(k, options.ridge);
  penalty(0) = 0.0;

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    const Eigen::VectorXd eta = design * beta;
    Eigen::VectorXd mu(n), w(n);
    for (Eigen::Index r = 0; r < n; ++r) {
      mu(r) = sigmoid(eta(r));
      w(r) = std::max(mu(r) * (1.0 - mu(r)), 1e-12);
    }
    const Eigen::VectorXd grad = design.transpose() * (target - mu) - penalty.cwiseProduct(beta);
    Eigen::MatrixXd hessian = design.transpose() * w.asDiagonal() * design;
    hessian.diagonal() += penalty;
    hessian.diagonal().array() += 1e-12;
    const Eigen::VectorXd step = hessian.ldlt().solve(grad);
    if (!step.allFinite()) break;
    beta += step;
    if (step.cwiseAbs().maxCoeff() < options.tolerance) break;
  }
  return std::make_shared<LogisticModel>(std::move(s), std::move(beta));
}

}  // namespace dptune
