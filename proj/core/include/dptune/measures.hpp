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

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dptune {

// Paired predicted probabilities and observed outcomes of one test set.
struct PredictionVector {
  std::vector<double> p;
  std::vector<int> y;

  // Throws MeasureError on length mismatch, empty input, p outside [0,1] or
  // y outside {0,1}.
  void validate() const;
  std::size_t positives() const;
  std::size_t negatives() const { return y.size() - positives(); }
};

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

inline constexpr double kDefaultThreshold = 0.5;

// A row is predicted defective iff p > threshold.
ConfusionMatrix confusion_at_threshold(const PredictionVector& v,
                                       double threshold = kDefaultThreshold);

// Bits of ThresholdMeasures::degenerate, one per 0/0 denominator.
enum DegenerateBit : unsigned {
  kDegeneratePrecision = 1u << 0,
  kDegenerateRecall = 1u << 1,
  kDegenerateFMeasure = 1u << 2,
  kDegenerateGMeasure = 1u << 3,
  kDegenerateMcc = 1u << 4,
  kDegenerateTnr = 1u << 5,
  kDegenerateFpr = 1u << 6,
};

struct ThresholdMeasures {
  double precision = 0.0;
  double recall = 0.0;
  double fmeasure = 0.0;
  double gmean = 0.0;
  double gmeasure = 0.0;
  double balance = 0.0;
  double mcc = 0.0;
  double tnr = 0.0;
  double fpr = 0.0;
  unsigned degenerate = 0;  // DegenerateBit mask; affected values are 0
};

ThresholdMeasures threshold_measures(const ConfusionMatrix& c);

// Probability that a random defective row outranks a random clean one, ties
// counting one half. Throws MeasureError for single-class vectors.
double auc(const PredictionVector& v);

double brier(const PredictionVector& v);

inline constexpr double kLogLossEpsilon = 1e-15;
double logloss(const PredictionVector& v);

enum class Measure {
  precision,
  recall,
  fmeasure,
  gmean,
  gmeasure,
  balance,
  mcc,
  tnr,
  fpr,
  auc,
  brier,
  logloss,
};

inline constexpr std::size_t kMeasureCount = 12;

// Fixed serialization order.
const std::array<Measure, kMeasureCount>& all_measures();
const char* to_string(Measure m);
// Throws MeasureError for unknown names.
Measure measure_from_string(std::string_view name);
// fpr, brier and logloss are minimized; everything else is maximized.
bool higher_is_better(Measure m);

struct PerformanceVector {
  std::array<double, kMeasureCount> values{};
  unsigned degenerate = 0;

  double operator[](Measure m) const { return values[static_cast<std::size_t>(m)]; }
  double& operator[](Measure m) { return values[static_cast<std::size_t>(m)]; }

  // "precision,recall,...,logloss"
  static std::string csv_header();
  std::string csv_row() const;
};

PerformanceVector evaluate(const PredictionVector& v, double threshold = kDefaultThreshold);

}  // namespace dptune
