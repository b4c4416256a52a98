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
#include <array>
#include <cmath>
#include <numbers>

#include "dptune/learners.hpp"

namespace dptune {
namespace {

// R's quantile type 7 on sorted data.
double quantile7(const std::vector<double>& sorted, double prob) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// Silverman's rule of thumb (bw.nrd0).
double silverman_bandwidth(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  const double iqr = quantile7(values, 0.75) - quantile7(values, 0.25);
  double lo = std::min(sd, iqr / 1.34);
  if (!(lo > 0.0)) lo = sd;
  if (!(lo > 0.0)) lo = std::abs(values.front());
  if (!(lo > 0.0)) lo = 1.0;
  return 0.9 * lo * std::pow(n, -0.2);
}

struct FeatureDensity {
  double mean = 0.0;
  double variance = 1.0;
  double bandwidth = 1.0;
  std::vector<double> support;
};

class NaiveBayesModel final : public Model {
 public:
  NaiveBayesModel(bool kernel, std::array<double, 2> log_prior,
                  std::array<std::vector<FeatureDensity>, 2> densities)
      : kernel_(kernel), log_prior_(log_prior), densities_(std::move(densities)) {}

  std::vector<double> predict(const Matrix& rows) const override {
    std::vector<double> out(rows.rows());
    for (std::size_t r = 0; r < rows.rows(); ++r) {
      std::array<double, 2> lp = log_prior_;
      for (int c = 0; c < 2; ++c) {
        for (std::size_t f = 0; f < rows.cols(); ++f) {
          lp[c] += log_density(densities_[c][f], rows(r, f));
        }
      }
      out[r] = 1.0 / (1.0 + std::exp(lp[0] - lp[1]));
    }
    return out;
  }

 private:
  double log_density(const FeatureDensity& d, double v) const {
    constexpr double kLogSqrt2Pi = 0.91893853320467274178;
    if (!kernel_) {
      const double z = v - d.mean;
      return -0.5 * z * z / d.variance - 0.5 * std::log(d.variance) - kLogSqrt2Pi;
    }
    double top = -INFINITY;
    for (double s : d.support) {
      const double z = (v - s) / d.bandwidth;
      top = std::max(top, -0.5 * z * z);
    }
    double acc = 0.0;
    for (double s : d.support) {
      const double z = (v - s) / d.bandwidth;
      acc += std::exp(-0.5 * z * z - top);
    }
    return top + std::log(acc) - std::log(static_cast<double>(d.support.size()) * d.bandwidth) -
           kLogSqrt2Pi;
  }

  bool kernel_;
  std::array<double, 2> log_prior_;
  std::array<std::vector<FeatureDensity>, 2> densities_;
};

}  // namespace

ModelPtr train_naive_bayes(const NaiveBayesOptions& options, const Matrix& x,
                           std::span<const int> y) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  std::array<std::vector<std::size_t>, 2> members;
  for (std::size_t i = 0; i < n; ++i) members[y[i] == 1 ? 1 : 0].push_back(i);

  // variance floor relative to the overall spread of each feature
  std::vector<double> floor(p, 1e-9);
  const Standardizer overall = Standardizer::fit(x);
  for (std::size_t f = 0; f < p; ++f) floor[f] = 1e-9 * std::max(1.0, overall.scale[f] * overall.scale[f]);

  std::array<double, 2> log_prior{};
  std::array<std::vector<FeatureDensity>, 2> densities;
  const double laplace = std::max(0.0, options.laplace);
  for (int c = 0; c < 2; ++c) {
    const auto& rows = members[c];
    log_prior[c] = std::log((static_cast<double>(rows.size()) + laplace) /
                            (static_cast<double>(n) + 2.0 * laplace));
    densities[c].resize(p);
    for (std::size_t f = 0; f < p; ++f) {
      FeatureDensity& d = densities[c][f];
      std::vector<double> values;
      values.reserve(rows.size());
      for (std::size_t i : rows) values.push_back(x(i, f));
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= static_cast<double>(values.size());
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      const double var = values.size() > 1 ? ss / static_cast<double>(values.size() - 1) : 0.0;
      d.mean = mean;
      d.variance = std::max(var, floor[f]);
      if (options.kernel) {
        d.bandwidth = std::max(silverman_bandwidth(values), std::sqrt(floor[f]));
        d.support = std::move(values);
      }
    }
  }
  return std::make_shared<NaiveBayesModel>(options.kernel, log_prior, std::move(densities));
}

}  // namespace dptune
