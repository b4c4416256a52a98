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
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dptune/bootstrap.hpp"
#include "dptune/parameters.hpp"

namespace dptune {

enum class Magnitude { negligible, small, medium, large };

const char* to_string(Magnitude m);

// negligible <= 0.2 < small <= 0.5 < medium <= 0.8 < large, on |d|.
Magnitude classify_magnitude(double d);

struct EffectSize {
  double d = 0.0;
  Magnitude magnitude = Magnitude::negligible;
  bool infinite = false;  // zero pooled s.d. with unequal means
};

// (mean(a) - mean(b)) / pooled sample s.d. Both samples need >= 2 values.
EffectSize cohens_d(std::span<const double> a, std::span<const double> b);

struct TestResult {
  double u_statistic = 0.0;  // U of `a`
  double p_value = 1.0;      // two-sided
  double alpha = 0.05;
  bool significant = false;  // p_value < alpha
  bool exact = false;
};

// Samples with n1 + n2 at or below this size get an exact permutation
// p-value; larger ones use the tie-corrected normal approximation with
// continuity correction.
inline constexpr std::size_t kExactMannWhitneyLimit = 20;

TestResult mann_whitney(std::span<const double> a, std::span<const double> b,
                        double alpha = 0.05);

using Treatments = std::vector<std::pair<std::string, std::vector<double>>>;

struct RankEntry {
  std::string treatment;
  int rank = 0;  // 1 = best
  double mean = 0.0;
};

class RankTable {
 public:
  RankTable() = default;
  explicit RankTable(std::vector<std::vector<RankEntry>> groups);

  // Groups best first; entries inside a group ordered best mean first.
  const std::vector<std::vector<RankEntry>>& groups() const { return groups_; }
  std::vector<RankEntry> entries() const;
  std::size_t num_ranks() const { return groups_.size(); }
  // 0 when the treatment is absent.
  int rank_of(std::string_view treatment) const;

  std::string to_csv() const;   // treatment,rank,mean
  std::string to_json() const;  // [{"rank":1,"treatments":[{name,mean},...]},...]

 private:
  std::vector<std::vector<RankEntry>> groups_;
};

// Scott-Knott ESD: sort treatments by mean, split at the cut maximizing the
// between-group sum of squares of treatment means, and keep the split only if
// some cross-group pair has a non-negligible Cohen's d; otherwise merge the
// range. Rank 1 holds the best mean (highest, or lowest when
// higher_is_better is false).
RankTable scott_knott_esd(const Treatments& treatments, bool higher_is_better = true);

using DatasetTreatments = std::vector<std::pair<std::string, Treatments>>;

struct DoubleScottKnottResult {
  std::vector<std::pair<std::string, RankTable>> per_dataset;
  RankTable final_ranks;  // means are mean per-dataset ranks
};

// Ranks per dataset, then ranks the treatments' vectors of per-dataset ranks.
DoubleScottKnottResult double_scott_knott(const DatasetTreatments& per_dataset,
                                          bool higher_is_better = true);

struct PerformanceDelta {
  std::vector<double> deltas;         // optimized - default, per repetition
  std::optional<EffectSize> effect;   // needs >= 2 repetitions
  TestResult test;
};

PerformanceDelta performance_delta(const PerformanceDistribution& optimized,
                                   const PerformanceDistribution& defaults);

struct ValueFrequency {
  std::string parameter;
  std::string value;
  std::size_t count = 0;
  double frequency = 0.0;
};

struct CrossApplication {
  std::string donor;
  std::string recipient;
  std::string donor_setting;
  double donor_mean = 0.0;
  double own_mean = 0.0;
  TestResult test;
  bool significant_drop = false;
};

struct TransferabilityReport {
  std::vector<ValueFrequency> frequencies;
  std::vector<CrossApplication> cross;
};

// Per-repetition scores of `setting` on `dataset`.
using DistributionFactory =
    std::function<std::vector<double>(const std::string& dataset, const ParameterSetting& setting)>;

// Frequency of each optimal value across `group`; when `factory` is set, also
// applies every donor's optimum to every other recipient and tests for a
// significant drop against the recipient's own optimum.
TransferabilityReport transferability(const std::map<std::string, ParameterSetting>& optimal,
                                      const std::vector<std::string>& group,
                                      const DistributionFactory& factory = {},
                                      bool higher_is_better = true, double alpha = 0.05);

}  // namespace dptune
