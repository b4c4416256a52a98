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

#include "dptune/measures.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "dptune/error.hpp"
#include "dptune/ranking.hpp"

namespace dptune {
namespace {

double ratio(double num, double den, unsigned bit, unsigned& flags) {
  if (den == 0.0) {
    flags |= bit;
    return 0.0;
  }
  return num / den;
}

}  // namespace

void PredictionVector::validate() const {
  if (p.size() != y.size()) throw MeasureError("prediction vector: p and y differ in length");
  if (p.empty()) throw MeasureError("prediction vector is empty");
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) throw MeasureError("prediction vector: probability outside [0,1]");
  }
  for (int v : y) {
    if (v != 0 && v != 1) throw MeasureError("prediction vector: outcome outside {0,1}");
  }
}

std::size_t PredictionVector::positives() const {
  return static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
}

ConfusionMatrix confusion_at_threshold(const PredictionVector& v, double threshold) {
  v.validate();
  ConfusionMatrix c;
  for (std::size_t i = 0; i < v.p.size(); ++i) {
    const bool predicted = v.p[i] > threshold;
    if (v.y[i] == 1) {
      (predicted ? c.tp : c.fn)++;
    } else {
      (predicted ? c.fp : c.tn)++;
    }
  }
  return c;
}

ThresholdMeasures threshold_measures(const ConfusionMatrix& c) {
  ThresholdMeasures m;
  const double tp = static_cast<double>(c.tp);
  const double fp = static_cast<double>(c.fp);
  const double tn = static_cast<double>(c.tn);
  const double fn = static_cast<double>(c.fn);
  unsigned& flags = m.degenerate;

  m.precision = ratio(tp, tp + fp, kDegeneratePrecision, flags);
  m.recall = ratio(tp, tp + fn, kDegenerateRecall, flags);
  m.tnr = ratio(tn, tn + fp, kDegenerateTnr, flags);
  m.fpr = ratio(fp, fp + tn, kDegenerateFpr, flags);
  m.fmeasure = ratio(2.0 * m.precision * m.recall, m.precision + m.recall, kDegenerateFMeasure, flags);
  m.gmean = std::sqrt(m.recall * m.tnr);

  const double pd = m.recall;
  const double pf = m.fpr;
  m.gmeasure = ratio(2.0 * pd * (1.0 - pf), pd + (1.0 - pf), kDegenerateGMeasure, flags);
  m.balance = 1.0 - std::sqrt((pf * pf + (1.0 - pd) * (1.0 - pd)) / 2.0);

  const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  m.mcc = den == 0.0 ? (flags |= kDegenerateMcc, 0.0) : (tp * tn - fp * fn) / std::sqrt(den);
  return m;
}

double auc(const PredictionVector& v) {
  v.validate();
  const std::size_t n_pos = v.positives();
  const std::size_t n_neg = v.negatives();
  if (n_pos == 0 || n_neg == 0) throw MeasureError("AUC is undefined for a single-class vector");
  const auto ranks = average_ranks(v.p);
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (v.y[i] == 1) rank_sum += ranks[i];
  }
  const double np = static_cast<double>(n_pos);
  const double u = rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

double brier(const PredictionVector& v) {
  v.validate();
  double sum = 0.0;
  for (std::size_t i = 0; i < v.p.size(); ++i) {
    const double d = v.p[i] - static_cast<double>(v.y[i]);
    sum += d * d;
  }
  return sum / static_cast<double>(v.p.size());
}

double logloss(const PredictionVector& v) {
  v.validate();
  double sum = 0.0;
  for (std::size_t i = 0; i < v.p.size(); ++i) {
    const double p = std::clamp(v.p[i], kLogLossEpsilon, 1.0 - kLogLossEpsilon);
    sum += v.y[i] == 1 ? std::log(p) : std::log1p(-p);
  }
  return -sum / static_cast<double>(v.p.size());
}

const std::array<Measure, kMeasureCount>& all_measures() {
  static constexpr std::array<Measure, kMeasureCount> kAll = {
      Measure::precision, Measure::recall, Measure::fmeasure, Measure::gmean,
      Measure::gmeasure,  Measure::balance, Measure::mcc,     Measure::tnr,
      Measure::fpr,       Measure::auc,     Measure::brier,   Measure::logloss};
  return kAll;
}

const char* to_string(Measure m) {
  static constexpr const char* kNames[kMeasureCount] = {
      "precision", "recall", "fmeasure", "gmean", "gmeasure", "balance",
      "mcc",       "tnr",    "fpr",      "auc",   "brier",    "logloss"};
  return kNames[static_cast<std::size_t>(m)];
}

Measure measure_from_string(std::string_view name) {
  for (Measure m : all_measures()) {
    if (name == to_string(m)) return m;
  }
  throw MeasureError("unknown performance measure '" + std::string(name) + "'");
}

bool higher_is_better(Measure m) {
  return m != Measure::fpr && m != Measure::brier && m != Measure::logloss;
}

std::string PerformanceVector::csv_header() {
  std::string out;
  for (Measure m : all_measures()) {
    if (!out.empty()) out += ',';
    out += to_string(m);
  }
  return out;
}

std::string PerformanceVector::csv_row() const {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < kMeasureCount; ++i) {
    if (i) out += ',';
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), values[i]);
    out.append(buf, ptr);
  }
  return out;
}

PerformanceVector evaluate(const PredictionVector& v, double threshold) {
  const ThresholdMeasures t = threshold_measures(confusion_at_threshold(v, threshold));
  PerformanceVector out;
  out.degenerate = t.degenerate;
  out[Measure::precision] = t.precision;
  out[Measure::recall] = t.recall;
  out[Measure::fmeasure] = t.fmeasure;
  out[Measure::gmean] = t.gmean;
  out[Measure::gmeasure] = t.gmeasure;
  out[Measure::balance] = t.balance;
  out[Measure::mcc] = t.mcc;
  out[Measure::tnr] = t.tnr;
  out[Measure::fpr] = t.fpr;
  out[Measure::auc] = auc(v);
  out[Measure::brier] = brier(v);
  out[Measure::logloss] = logloss(v);
  return out;
}

}  // namespace dptune
