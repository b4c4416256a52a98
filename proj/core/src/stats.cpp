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

#include "dptune/stats.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "dptune/error.hpp"
#include "dptune/ranking.hpp"

namespace dptune {
namespace {

struct Summary {
  double n = 0.0;
  double mean = 0.0;
  double var = 0.0;  // sample variance, 0 for n < 2
};

Summary summarize(std::span<const double> v) {
  Summary s;
  s.n = static_cast<double>(v.size());
  if (v.empty()) return s;
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / s.n;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.var = ss / (s.n - 1.0);
  }
  return s;
}

EffectSize effect_from(const Summary& a, const Summary& b) {
  EffectSize e;
  const double dof = a.n + b.n - 2.0;
  const double pooled = dof > 0.0 ? std::sqrt(((a.n - 1.0) * a.var + (b.n - 1.0) * b.var) / dof) : 0.0;
  const double diff = a.mean - b.mean;
  if (pooled > 0.0) {
    e.d = diff / pooled;
  } else if (diff == 0.0) {
    e.d = 0.0;
  } else {
    e.d = diff > 0.0 ? INFINITY : -INFINITY;
    e.infinite = true;
  }
  e.magnitude = classify_magnitude(e.d);
  return e;
}

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// Exact two-sided permutation p-value of the rank sum, ties included, by
// counting subsets of doubled (integer) ranks.
double exact_rank_sum_p(std::span<const double> doubled_ranks, std::size_t n1, long observed) {
  const std::size_t n = doubled_ranks.size();
  long total_sum = 0;
  for (double r : doubled_ranks) total_sum += std::lround(r);
  const auto max_sum = static_cast<std::size_t>(total_sum);
  // ways[k][s]: subsets of size k with doubled sum s
  std::vector<std::vector<double>> ways(n1 + 1, std::vector<double>(max_sum + 1, 0.0));
  ways[0][0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(std::lround(doubled_ranks[i]));
    for (std::size_t k = std::min(n1, i + 1); k >= 1; --k) {
      for (std::size_t s = max_sum; s >= r; --s) {
        ways[k][s] += ways[k - 1][s - r];
        if (s == 0) break;
      }
    }
  }
  // centre of the doubled rank-sum distribution: n1 * (n + 1)
  const long centre = static_cast<long>(n1 * (n + 1));
  const long dev = std::labs(observed - centre);
  double hit = 0.0, all = 0.0;
  for (std::size_t s = 0; s <= max_sum; ++s) {
    all += ways[n1][s];
    if (std::labs(static_cast<long>(s) - centre) >= dev) hit += ways[n1][s];
  }
  return std::min(1.0, hit / all);
}

void sk_partition(const std::vector<double>& means, const std::vector<std::vector<EffectSize>>& d,
                  std::size_t lo, std::size_t hi, std::vector<std::pair<std::size_t, std::size_t>>& out) {
  const std::size_t k = hi - lo;
  if (k == 1) {
    out.emplace_back(lo, hi);
    return;
  }
  const double grand = std::accumulate(means.begin() + static_cast<std::ptrdiff_t>(lo),
                                       means.begin() + static_cast<std::ptrdiff_t>(hi), 0.0) /
                       static_cast<double>(k);
  double best = -1.0;
  std::size_t cut = lo + 1;
  double left_sum = 0.0;
  const double total = grand * static_cast<double>(k);
  for (std::size_t s = lo + 1; s < hi; ++s) {
    left_sum += means[s - 1];
    const double nl = static_cast<double>(s - lo);
    const double nr = static_cast<double>(hi - s);
    const double ml = left_sum / nl;
    const double mr = (total - left_sum) / nr;
    const double between = nl * (ml - grand) * (ml - grand) + nr * (mr - grand) * (mr - grand);
    if (between > best) {
      best = between;
      cut = s;
    }
  }
  bool split = false;
  for (std::size_t i = lo; i < cut && !split; ++i) {
    for (std::size_t j = cut; j < hi; ++j) {
      if (d[i][j].magnitude != Magnitude::negligible) {
        split = true;
        break;
      }
    }
  }
  if (!split) {
    out.emplace_back(lo, hi);
    return;
  }
  sk_partition(means, d, lo, cut, out);
  sk_partition(means, d, cut, hi, out);
}

}  // namespace

const char* to_string(Magnitude m) {
  switch (m) {
    case Magnitude::negligible:
      return "negligible";
    case Magnitude::small:
      return "small";
    case Magnitude::medium:
      return "medium";
    case Magnitude::large:
      return "large";
  }
  return "?";
}

Magnitude classify_magnitude(double d) {
  const double a = std::abs(d);
  if (a <= 0.2) return Magnitude::negligible;
  if (a <= 0.5) return Magnitude::small;
  if (a <= 0.8) return Magnitude::medium;
  return Magnitude::large;
}

EffectSize cohens_d(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw StatsError("Cohen's d needs at least two values per sample");
  return effect_from(summarize(a), summarize(b));
}

TestResult mann_whitney(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.empty() || b.empty()) throw StatsError("Mann-Whitney needs non-empty samples");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = average_ranks(pooled);
  const std::size_t n1 = a.size();
  const std::size_t n2 = b.size();
  const std::size_t n = n1 + n2;
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < n1; ++i) rank_sum += ranks[i];

  TestResult t;
  t.alpha = alpha;
  const double dn1 = static_cast<double>(n1);
  const double dn2 = static_cast<double>(n2);
  t.u_statistic = rank_sum - dn1 * (dn1 + 1.0) / 2.0;

  if (n <= kExactMannWhitneyLimit) {
    std::vector<double> doubled(n);
    for (std::size_t i = 0; i < n; ++i) doubled[i] = 2.0 * ranks[i];
    t.p_value = exact_rank_sum_p(doubled, n1, std::lround(2.0 * rank_sum));
    t.exact = true;
  } else {
    const double dn = static_cast<double>(n);
    double ties = 0.0;
    for (std::size_t g : tie_group_sizes(pooled)) {
      const double tg = static_cast<double>(g);
      ties += tg * tg * tg - tg;
    }
    const double var = dn1 * dn2 / 12.0 * ((dn + 1.0) - ties / (dn * (dn - 1.0)));
    const double dev = std::abs(t.u_statistic - dn1 * dn2 / 2.0);
    if (var <= 0.0) {
      t.p_value = 1.0;
    } else {
      const double z = std::max(0.0, dev - 0.5) / std::sqrt(var);
      t.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    }
  }
  t.significant = t.p_value < alpha;
  return t;
}

RankTable::RankTable(std::vector<std::vector<RankEntry>> groups) : groups_(std::move(groups)) {}

std::vector<RankEntry> RankTable::entries() const {
  std::vector<RankEntry> out;
  for (const auto& g : groups_) out.insert(out.end(), g.begin(), g.end());
  return out;
}

int RankTable::rank_of(std::string_view treatment) const {
  for (const auto& g : groups_) {
    for (const auto& e : g) {
      if (e.treatment == treatment) return e.rank;
    }
  }
  return 0;
}

std::string RankTable::to_csv() const {
  std::string out = "treatment,rank,mean\n";
  for (const auto& g : groups_) {
    for (const auto& e : g) {
      out += e.treatment + "," + std::to_string(e.rank) + "," + format_real(e.mean) + "\n";
    }
  }
  return out;
}

std::string RankTable::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& g : groups_) {
    nlohmann::json members = nlohmann::json::array();
    for (const auto& e : g) members.push_back({{"treatment", e.treatment}, {"mean", e.mean}});
    j.push_back({{"rank", g.empty() ? 0 : g.front().rank}, {"treatments", members}});
  }
  return j.dump();
}

RankTable scott_knott_esd(const Treatments& treatments, bool higher_is_better) {
  if (treatments.empty()) throw StatsError("Scott-Knott ESD needs at least one treatment");
  const std::size_t k = treatments.size();
  std::vector<Summary> summaries(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (treatments[i].second.empty()) {
      throw StatsError("treatment '" + treatments[i].first + "' has no observations");
    }
    summaries[i] = summarize(treatments[i].second);
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return higher_is_better ? summaries[a].mean > summaries[b].mean
                            : summaries[a].mean < summaries[b].mean;
  });

  std::vector<double> means(k);
  std::vector<std::vector<EffectSize>> d(k, std::vector<EffectSize>(k));
  for (std::size_t i = 0; i < k; ++i) {
    means[i] = summaries[order[i]].mean;
    for (std::size_t j = 0; j < k; ++j) d[i][j] = effect_from(summaries[order[i]], summaries[order[j]]);
  }

  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  sk_partition(means, d, 0, k, ranges);

  std::vector<std::vector<RankEntry>> groups;
  int rank = 0;
  for (const auto& [lo, hi] : ranges) {
    ++rank;
    std::vector<RankEntry> g;
    for (std::size_t i = lo; i < hi; ++i) g.push_back({treatments[order[i]].first, rank, means[i]});
    groups.push_back(std::move(g));
  }
  return RankTable(std::move(groups));
}

DoubleScottKnottResult double_scott_knott(const DatasetTreatments& per_dataset,
                                          bool higher_is_better) {
  if (per_dataset.empty()) throw StatsError("double Scott-Knott ESD needs at least one dataset");
  const Treatments& reference = per_dataset.front().second;
  for (const auto& [name, treatments] : per_dataset) {
    for (const auto& [t, sample] : reference) {
      const bool present = std::any_of(treatments.begin(), treatments.end(),
                                       [&](const auto& e) { return e.first == t; });
      if (!present) throw StatsError("treatment '" + t + "' missing from dataset '" + name + "'");
    }
  }
  DoubleScottKnottResult result;
  for (const auto& [name, treatments] : per_dataset) {
    result.per_dataset.emplace_back(name, scott_knott_esd(treatments, higher_is_better));
  }
  if (per_dataset.size() == 1) {
    // one rank observation per treatment: keep the single ranking, reporting ranks as means
    std::vector<std::vector<RankEntry>> groups;
    for (const auto& g : result.per_dataset.front().second.groups()) {
      std::vector<RankEntry> out;
      for (const auto& e : g) out.push_back({e.treatment, e.rank, static_cast<double>(e.rank)});
      groups.push_back(std::move(out));
    }
    result.final_ranks = RankTable(std::move(groups));
    return result;
  }
  Treatments rank_vectors;
  for (const auto& [t, sample] : reference) {
    std::vector<double> ranks;
    for (const auto& [name, table] : result.per_dataset) ranks.push_back(table.rank_of(t));
    rank_vectors.emplace_back(t, std::move(ranks));
  }
  result.final_ranks = scott_knott_esd(rank_vectors, false);
  return result;
}

PerformanceDelta performance_delta(const PerformanceDistribution& optimized,
                                   const PerformanceDistribution& defaults) {
  if (optimized.dataset != defaults.dataset || optimized.classifier_id != defaults.classifier_id ||
      optimized.measure != defaults.measure || optimized.values.size() != defaults.values.size()) {
    throw StatsError("performance_delta: distributions differ in provenance or repetition count");
  }
  PerformanceDelta out;
  out.deltas.resize(optimized.values.size());
  for (std::size_t i = 0; i < optimized.values.size(); ++i) {
    out.deltas[i] = optimized.values[i] - defaults.values[i];
  }
  if (optimized.values.size() >= 2) out.effect = cohens_d(optimized.values, defaults.values);
  out.test = mann_whitney(optimized.values, defaults.values);
  return out;
}

TransferabilityReport transferability(const std::map<std::string, ParameterSetting>& optimal,
                                      const std::vector<std::string>& group,
                                      const DistributionFactory& factory, bool higher_is_better,
                                      double alpha) {
  if (group.size() < 2) throw StatsError("transferability needs at least two datasets");
  for (const auto& name : group) {
    if (!optimal.contains(name)) throw StatsError("no optimal setting for dataset '" + name + "'");
  }
  TransferabilityReport report;
  const ParameterSetting& first = optimal.at(group.front());
  for (const auto& [param, unused] : first.entries()) {
    std::vector<std::pair<std::string, std::size_t>> counts;
    for (const auto& name : group) {
      const std::string v = format_value(optimal.at(name).at(param));
      auto it = std::find_if(counts.begin(), counts.end(), [&](const auto& c) { return c.first == v; });
      if (it == counts.end()) {
        counts.emplace_back(v, 1);
      } else {
        ++it->second;
      }
    }
    std::stable_sort(counts.begin(), counts.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    for (const auto& [value, count] : counts) {
      report.frequencies.push_back(
          {param, value, count, static_cast<double>(count) / static_cast<double>(group.size())});
    }
  }
  if (!factory) return report;

  std::map<std::string, std::vector<double>> own;
  for (const auto& recipient : group) own[recipient] = factory(recipient, optimal.at(recipient));
  for (const auto& donor : group) {
    for (const auto& recipient : group) {
      if (donor == recipient) continue;
      const ParameterSetting& setting = optimal.at(donor);
      const std::vector<double> donor_values = setting == optimal.at(recipient)
                                                   ? own[recipient]
                                                   : factory(recipient, setting);
      CrossApplication c;
      c.donor = donor;
      c.recipient = recipient;
      c.donor_setting = setting.id();
      c.donor_mean = summarize(donor_values).mean;
      c.own_mean = summarize(own[recipient]).mean;
      c.test = mann_whitney(donor_values, own[recipient], alpha);
      const bool worse = higher_is_better ? c.donor_mean < c.own_mean : c.donor_mean > c.own_mean;
      c.significant_drop = c.test.significant && worse;
      report.cross.push_back(std::move(c));
    }
  }
  return report;
}

}  // namespace dptune
