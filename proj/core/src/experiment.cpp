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

#include "dptune/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dptune/classifiers.hpp"
#include "dptune/error.hpp"
#include "dptune/rng.hpp"
#include "dptune/synthetic.hpp"

namespace dptune {
namespace {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Config parsing

class Keys {
 public:
  Keys(const json& object, std::string where) : object_(object), where_(std::move(where)) {
    if (!object_.is_object()) throw ConfigError(where_ + ": expected a JSON object");
  }

  bool has(const char* key) {
    seen_.insert(key);
    return object_.contains(key);
  }

  const json& get(const char* key) {
    seen_.insert(key);
    return object_.at(key);
  }

  std::string path(const char* key) const { return where_ + "." + key; }

  void reject_unknown() const {
    for (auto it = object_.begin(); it != object_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(where_ + ": unknown key '" + it.key() + "'");
    }
  }

  std::uint64_t u64(const char* key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = get(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      throw ConfigError(path(key) + ": expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::size_t size(const char* key, std::size_t fallback, std::size_t minimum = 0) {
    const std::uint64_t v = u64(key, fallback);
    if (v < minimum) throw ConfigError(path(key) + ": must be >= " + std::to_string(minimum));
    return static_cast<std::size_t>(v);
  }

  double number(const char* key, double fallback, double lo, double hi) {
    if (!has(key)) return fallback;
    const json& v = get(key);
    if (!v.is_number()) throw ConfigError(path(key) + ": expected a number");
    const double x = v.get<double>();
    if (!(x >= lo && x <= hi)) {
      std::ostringstream msg;
      msg << path(key) << ": " << x << " outside [" << lo << ", " << hi << "]";
      throw ConfigError(msg.str());
    }
    return x;
  }

  bool boolean(const char* key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = get(key);
    if (!v.is_boolean()) throw ConfigError(path(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string string(const char* key, std::string fallback) {
    if (!has(key)) return fallback;
    const json& v = get(key);
    if (!v.is_string()) throw ConfigError(path(key) + ": expected a string");
    return v.get<std::string>();
  }

 private:
  const json& object_;
  std::string where_;
  std::set<std::string> seen_;
};

DatasetSource parse_dataset(const json& entry, const std::string& where,
                            const std::filesystem::path& base_dir) {
  DatasetSource src;
  if (entry.is_string()) {
    src.path = entry.get<std::string>();
  } else {
    Keys k(entry, where);
    src.name = k.string("name", "");
    src.generator = k.string("generator", "");
    if (src.generator.empty()) {
      if (!k.has("path")) throw ConfigError(where + ": needs 'path' or 'generator'");
      src.path = k.string("path", "");
      src.label_column = k.string("label_column", src.label_column);
      src.id_column = k.string("id_column", "");
    } else {
      if (src.generator != "separable" && src.generator != "nonlinear") {
        throw ConfigError(where + ".generator: expected 'separable' or 'nonlinear', got '" +
                          src.generator + "'");
      }
      src.rows = k.size("rows", src.rows, 2);
      src.features = k.size("features", src.features, 2);
      src.informative = k.size("informative", src.informative, 1);
      src.noise = k.size("noise", src.noise);
      src.label_noise = k.number("label_noise", src.label_noise, 0.0, 1.0);
      src.seed = k.u64("seed", 0);
    }
    k.reject_unknown();
  }
  if (!src.path.empty()) {
    if (src.path.is_relative() && !base_dir.empty()) src.path = base_dir / src.path;
    if (src.name.empty()) src.name = src.path.stem().string();
  } else if (src.name.empty()) {
    src.name = src.generator + "-" + std::to_string(src.seed);
  }
  return src;
}

OptimizerSpec parse_optimizer(const json& entry, const std::string& where) {
  OptimizerSpec spec;
  if (entry.is_string()) {
    try {
      spec.technique = technique_from_string(entry.get<std::string>());
    } catch (const Error& e) {
      throw ConfigError(where + ": " + e.what());
    }
    return spec;
  }
  Keys k(entry, where);
  if (!k.has("technique")) throw ConfigError(where + ": missing 'technique'");
  try {
    spec.technique = technique_from_string(k.string("technique", ""));
  } catch (const Error& e) {
    throw ConfigError(where + ".technique: " + e.what());
  }
  auto seed = [&](std::uint64_t& target) {
    if (k.has("seed")) {
      target = k.u64("seed", 0);
      spec.seed_given = true;
    }
  };
  switch (spec.technique) {
    case Technique::grid:
      spec.grid_budget = k.size("budget", spec.grid_budget, 1);
      break;
    case Technique::random:
      spec.random.iterations = k.size("iterations", spec.random.iterations, 1);
      spec.random.distinct = k.boolean("distinct", false);
      seed(spec.random.seed);
      break;
    case Technique::ga: {
      auto& g = spec.genetic;
      g.population_size = k.size("population_size", g.population_size, 2);
      g.crossover_prob = k.number("crossover_prob", g.crossover_prob, 0.0, 1.0);
      g.mutation_prob = k.number("mutation_prob", g.mutation_prob, 0.0, 1.0);
      g.elitism = k.size("elitism", g.elitism);
      g.stall_generations = k.size("stall_generations", g.stall_generations, 1);
      g.max_generations = k.size("max_generations", g.max_generations, 1);
      if (g.elitism > g.population_size) throw ConfigError(where + ": elitism exceeds population_size");
      seed(g.seed);
      break;
    }
    case Technique::de: {
      auto& d = spec.evolution;
      d.population_size = k.size("population_size", d.population_size, 4);
      d.crossover_prob = k.number("crossover_prob", d.crossover_prob, 0.0, 1.0);
      d.differential_weight = k.number("differential_weight", d.differential_weight, 0.0, 2.0);
      d.stall_generations = k.size("stall_generations", d.stall_generations, 1);
      d.max_generations = k.size("max_generations", d.max_generations, 1);
      const std::string strategy = k.string("strategy", "rand/1/bin");
      if (strategy != "rand/1/bin") throw ConfigError(where + ".strategy: only 'rand/1/bin' is supported");
      seed(d.seed);
      break;
    }
  }
  k.reject_unknown();
  return spec;
}

// ---------------------------------------------------------------------------
// Pipeline

struct Prepared {
  DatasetSummary summary;
  Dataset data;
};

Dataset acquire(const DatasetSource& src) {
  if (src.generator == "separable") {
    return make_separable(src.rows, src.informative, src.noise, src.seed, 0.3, src.name);
  }
  if (src.generator == "nonlinear") {
    return make_nonlinear(src.rows, src.features, src.seed, src.label_noise, src.name);
  }
  return load_dataset(src.path, src.label_column, src.id_column).with_name(src.name);
}

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string inclusion_message(const InclusionVerdict& v) {
  std::string msg;
  if (!v.passes_epv) msg += "EPV " + format_number(v.epv) + " is not above " + format_number(kMinEventsPerVariable);
  if (!v.passes_rate) {
    if (!msg.empty()) msg += "; ";
    msg += "defective rate " + format_number(v.defective_rate) + " exceeds " + format_number(kMaxDefectiveRate);
  }
  return msg;
}

std::vector<Prepared> prepare(const ExperimentConfig& cfg, std::vector<Failure>& failures) {
  std::vector<Prepared> out;
  for (const DatasetSource& src : cfg.datasets) {
    std::string stage = "load";
    try {
      Dataset d = acquire(src);
      Prepared p;
      p.summary.name = d.name();
      p.summary.rows = d.size();
      p.summary.metrics_in = d.num_features();
      stage = "inclusion";
      p.summary.inclusion = check_inclusion(d);
      if (!p.summary.inclusion.included && !cfg.skip_inclusion_check) {
        failures.push_back({src.name, "", stage, inclusion_message(p.summary.inclusion)});
        continue;
      }
      if (cfg.log_transform) {
        stage = "log-transform";
        d = log_transform(d);
      }
      stage = "correlation";
      PruneResult corr = remove_correlated(d, cfg.correlation_threshold);
      stage = "redundancy";
      PruneResult red = remove_redundant(corr.dataset, cfg.redundancy_threshold);
      p.summary.removed = std::move(corr.log);
      p.summary.removed.insert(p.summary.removed.end(), red.log.begin(), red.log.end());
      p.summary.metrics_kept = red.dataset.columns();
      p.data = std::move(red.dataset);
      out.push_back(std::move(p));
    } catch (const Error& e) {
      failures.push_back({src.name, "", stage, e.what()});
    }
  }
  return out;
}

std::uint64_t objective_seed(const ExperimentConfig& cfg, const std::string& dataset) {
  return derive_seed(cfg.seed, stream_key("optimize"), stream_key(dataset));
}

std::uint64_t evaluation_seed(const ExperimentConfig& cfg, const std::string& dataset) {
  return derive_seed(cfg.seed, stream_key("evaluate"), stream_key(dataset));
}

std::vector<OptimizationResult> optimize_all(const ExperimentConfig& cfg, const Dataset& data,
                                             const std::string& classifier) {
  const ParameterSpace space = parameter_space(classifier);
  BootstrapObjectiveConfig oc;
  oc.measure = cfg.measure;
  oc.repetitions = cfg.optimization_repetitions ? cfg.optimization_repetitions : cfg.repetitions;
  oc.master_seed = objective_seed(cfg, data.name());
  oc.threads = cfg.threads;

  std::vector<OptimizationResult> results;
  for (const OptimizerSpec& spec : cfg.optimizers) {
    Objective objective = bootstrap_objective(data, classifier, oc);
    const std::uint64_t derived = derive_seed(cfg.seed, stream_key(to_string(spec.technique)),
                                              stream_key(data.name()), stream_key(classifier));
    switch (spec.technique) {
      case Technique::grid:
        results.push_back(grid_search(space, objective, spec.grid_budget));
        break;
      case Technique::random: {
        RandomSearchConfig c = spec.random;
        if (!spec.seed_given) c.seed = derived;
        results.push_back(random_search(space, objective, c));
        break;
      }
      case Technique::ga: {
        GeneticConfig c = spec.genetic;
        if (!spec.seed_given) c.seed = derived;
        results.push_back(genetic_search(space, objective, c));
        break;
      }
      case Technique::de: {
        DifferentialEvolutionConfig c = spec.evolution;
        if (!spec.seed_given) c.seed = derived;
        results.push_back(differential_evolution(space, objective, c));
        break;
      }
    }
  }
  return results;
}

// Evaluation bootstrap, optionally collecting permutation importance per repetition.
BootstrapResult evaluate_setting(const ExperimentConfig& cfg, const Dataset& data,
                                 const std::string& classifier, const ParameterSetting& setting,
                                 std::optional<ImportanceScores>* importance) {
  BootstrapOptions opts;
  opts.repetitions = cfg.repetitions;
  opts.master_seed = evaluation_seed(cfg, data.name());
  opts.threads = cfg.threads;
  if (!importance) return out_of_sample_bootstrap(data, classifier, setting, opts);

  std::vector<std::vector<double>> slots(cfg.repetitions);
  BootstrapResult result = out_of_sample_bootstrap(
      data, classifier, setting, opts, [&](const RepetitionContext& ctx) {
        slots[ctx.repetition] = permutation_importance(ctx.model, ctx.test, ctx.seed);
      });
  ImportanceScores scores(data.columns());
  for (const auto& s : slots) scores.add_repetition(s);
  *importance = std::move(scores);
  return result;
}

DoubleScottKnottResult rank_classifiers(const RunReport& report, bool use_default, bool use_optimized) {
  // Only classifiers that succeeded on every dataset with any success take part.
  std::vector<std::string> datasets;
  std::map<std::string, std::set<std::string>> by_classifier;
  for (const auto& c : report.combinations) {
    if (std::find(datasets.begin(), datasets.end(), c.dataset) == datasets.end()) datasets.push_back(c.dataset);
    by_classifier[c.classifier].insert(c.dataset);
  }
  DatasetTreatments per_dataset;
  for (const std::string& d : datasets) {
    Treatments treatments;
    for (const auto& c : report.combinations) {
      if (c.dataset != d || by_classifier[c.classifier].size() != datasets.size()) continue;
      if (use_default && use_optimized) {
        treatments.emplace_back(c.classifier + ":default", c.default_eval.at(report.measure).values);
        treatments.emplace_back(c.classifier + ":optimized", c.optimized_eval.at(report.measure).values);
      } else {
        const BootstrapResult& r = use_default ? c.default_eval : c.optimized_eval;
        treatments.emplace_back(c.classifier, r.at(report.measure).values);
      }
    }
    if (!treatments.empty()) per_dataset.emplace_back(d, std::move(treatments));
  }
  if (per_dataset.empty()) return {};
  return double_scott_knott(per_dataset, higher_is_better(report.measure));
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    ExperimentConfig cfg;
    Keys k(root, "config");
    if (!k.has("seed")) throw ConfigError("config.seed: required (no clock-based default)");
    cfg.seed = k.u64("seed", 0);
    cfg.repetitions = k.size("repetitions", cfg.repetitions, 1);
    cfg.optimization_repetitions = k.size("optimization_repetitions", 0);
    const std::string measure = k.string("measure", to_string(cfg.measure));
    try {
      cfg.measure = measure_from_string(measure);
    } catch (const Error& e) {
      throw ConfigError(std::string("config.measure: ") + e.what());
    }
    cfg.threads = static_cast<unsigned>(k.size("threads", 1, 1));
    cfg.output_dir = k.string("output_dir", cfg.output_dir.string());
    if (cfg.output_dir.is_relative() && !base_dir.empty()) cfg.output_dir = base_dir / cfg.output_dir;
    cfg.skip_inclusion_check = k.boolean("skip_inclusion_check", false);
    cfg.log_transform = k.boolean("log_transform", true);
    cfg.correlation_threshold = k.number("correlation_threshold", 0.7, 0.0, 1.0);
    cfg.redundancy_threshold = k.number("redundancy_threshold", 0.9, 0.0, 1.0);
    cfg.importance = k.boolean("importance", true);
    cfg.cross_application = k.boolean("cross_application", true);

    if (!k.has("datasets") || !k.get("datasets").is_array() || k.get("datasets").empty()) {
      throw ConfigError("config.datasets: expected a non-empty array");
    }
    std::set<std::string> names;
    std::size_t i = 0;
    for (const json& entry : k.get("datasets")) {
      cfg.datasets.push_back(parse_dataset(entry, "config.datasets[" + std::to_string(i++) + "]", base_dir));
      if (!names.insert(cfg.datasets.back().name).second) {
        throw ConfigError("config.datasets: duplicate dataset name '" + cfg.datasets.back().name + "'");
      }
    }

    if (!k.has("classifiers") || !k.get("classifiers").is_array() || k.get("classifiers").empty()) {
      throw ConfigError("config.classifiers: expected a non-empty array");
    }
    for (const json& entry : k.get("classifiers")) {
      if (!entry.is_string() || !is_classifier(entry.get<std::string>())) {
        throw ConfigError("config.classifiers: unknown classifier " + entry.dump());
      }
      const std::string id = entry.get<std::string>();
      if (std::find(cfg.classifiers.begin(), cfg.classifiers.end(), id) != cfg.classifiers.end()) {
        throw ConfigError("config.classifiers: '" + id + "' listed twice");
      }
      cfg.classifiers.push_back(id);
    }

    if (k.has("optimizers")) {
      const json& list = k.get("optimizers");
      if (!list.is_array() || list.empty()) throw ConfigError("config.optimizers: expected a non-empty array");
      i = 0;
      for (const json& entry : list) {
        cfg.optimizers.push_back(parse_optimizer(entry, "config.optimizers[" + std::to_string(i++) + "]"));
      }
    } else {
      cfg.optimizers.push_back(OptimizerSpec{});
    }
    k.reject_unknown();
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  RunReport report;
  report.measure = cfg.measure;
  report.repetitions = cfg.repetitions;
  std::vector<Prepared> prepared = prepare(cfg, report.failures);
  std::map<std::string, const Dataset*> by_name;

  for (const Prepared& p : prepared) {
    report.datasets.push_back(p.summary);
    by_name[p.summary.name] = &p.data;
    for (const std::string& clf : cfg.classifiers) {
      std::string stage = "optimize";
      try {
        CombinationReport c;
        c.dataset = p.summary.name;
        c.classifier = clf;
        c.default_setting = default_setting(clf);
        c.optimizations = optimize_all(cfg, p.data, clf);
        c.optimized_setting = c.optimizations.front().best_setting;

        stage = "evaluate-default";
        c.default_eval = evaluate_setting(cfg, p.data, clf, c.default_setting,
                                          cfg.importance ? &c.importance_default : nullptr);
        stage = "evaluate-optimized";
        if (c.optimized_setting == c.default_setting) {
          // Same setting and seeds: the evaluation would repeat bit for bit.
          c.optimized_eval = c.default_eval;
          c.importance_optimized = c.importance_default;
        } else {
          c.optimized_eval = evaluate_setting(cfg, p.data, clf, c.optimized_setting,
                                              cfg.importance ? &c.importance_optimized : nullptr);
        }

        stage = "analysis";
        for (Measure m : all_measures()) {
          MeasureAnalysis a;
          a.measure = m;
          a.delta = performance_delta(c.optimized_eval.at(m), c.default_eval.at(m));
          a.stability = stability_ratio(c.optimized_eval.at(m), c.default_eval.at(m));
          c.analyses.push_back(std::move(a));
        }
        if (c.importance_default && c.importance_optimized) {
          stage = "importance";
          c.importance_ranks_default = rank_variables(*c.importance_default);
          c.importance_ranks_optimized = rank_variables(*c.importance_optimized);
          c.rank_shift = rank_shift(c.importance_ranks_optimized, c.importance_ranks_default);
        }
        report.combinations.push_back(std::move(c));
      } catch (const Error& e) {
        report.failures.push_back({p.summary.name, clf, stage, e.what()});
      }
    }
  }

  for (const std::string& clf : cfg.classifiers) {
    std::map<std::string, ParameterSetting> optimal;
    std::vector<std::string> group;
    for (const auto& c : report.combinations) {
      if (c.classifier != clf) continue;
      optimal[c.dataset] = c.optimized_setting;
      group.push_back(c.dataset);
    }
    if (group.size() < 2) continue;
    DistributionFactory factory;
    if (cfg.cross_application) {
      factory = [&](const std::string& dataset, const ParameterSetting& setting) {
        // Reuse evaluations already run for this dataset (same seeds, same values).
        for (const auto& c : report.combinations) {
          if (c.classifier != clf || c.dataset != dataset) continue;
          if (setting == c.optimized_setting) return c.optimized_eval.at(cfg.measure).values;
          if (setting == c.default_setting) return c.default_eval.at(cfg.measure).values;
        }
        return evaluate_setting(cfg, *by_name.at(dataset), clf, setting, nullptr).at(cfg.measure).values;
      };
    }
    try {
      report.transferability.push_back(
          {clf, transferability(optimal, group, factory, higher_is_better(cfg.measure))});
    } catch (const Error& e) {
      report.failures.push_back({"", clf, "transferability", e.what()});
    }
  }

  report.ranks_default = rank_classifiers(report, true, false);
  report.ranks_optimized = rank_classifiers(report, false, true);
  report.ranks_joint = rank_classifiers(report, true, true);
  return report;
}

ComparisonReport compare_optimizers(const ExperimentConfig& cfg) {
  std::set<Technique> selected;
  for (const auto& o : cfg.optimizers) selected.insert(o.technique);
  if (!selected.count(Technique::grid)) {
    throw ConfigError("compare: grid search must be among the optimizers (it is the ratio denominator)");
  }
  if (cfg.optimizers.size() < 2) throw ConfigError("compare: select at least two optimizers");

  ComparisonReport report;
  std::vector<Prepared> prepared = prepare(cfg, report.failures);
  for (const Prepared& p : prepared) {
    for (const std::string& clf : cfg.classifiers) {
      std::string stage = "optimize";
      try {
        CombinationReport c;
        c.dataset = p.summary.name;
        c.classifier = clf;
        c.default_setting = default_setting(clf);
        c.optimizations = optimize_all(cfg, p.data, clf);
        c.optimized_setting = c.optimizations.front().best_setting;

        stage = "evaluate";
        // Settings found by several techniques are evaluated once.
        std::map<std::string, BootstrapResult> evaluated;
        for (const auto& o : c.optimizations) {
          const std::string id = o.best_setting.id();
          if (!evaluated.count(id)) evaluated.emplace(id, evaluate_setting(cfg, p.data, clf, o.best_setting, nullptr));
        }
        const OptimizationResult& grid = *std::find_if(
            c.optimizations.begin(), c.optimizations.end(),
            [](const OptimizationResult& o) { return o.technique == Technique::grid; });
        const BootstrapResult& grid_eval = evaluated.at(grid.best_setting.id());
        for (const auto& o : c.optimizations) {
          const BootstrapResult& eval = evaluated.at(o.best_setting.id());
          for (Measure m : all_measures()) {
            ComparisonRow row;
            row.dataset = c.dataset;
            row.classifier = clf;
            row.technique = o.technique;
            row.measure = m;
            row.mean = eval.at(m).mean();
            row.grid_mean = grid_eval.at(m).mean();
            if (row.mean == row.grid_mean) {
              row.ratio = 1.0;
            } else {
              row.ratio = row.mean / row.grid_mean;
            }
            report.rows.push_back(row);
          }
        }
        report.combinations.push_back(std::move(c));
      } catch (const Error& e) {
        report.failures.push_back({p.summary.name, clf, stage, e.what()});
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Writers

namespace {

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, std::string_view header) : out_(path, std::ios::binary) {
    if (!out_) throw Error("cannot write " + path.string());
    out_ << header << '\n';
  }

  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }

 private:
  static std::string cell(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + '"';
  }
  static std::string cell(const char* s) { return cell(std::string(s)); }
  static std::string cell(double x) { return format_number(x); }
  static std::string cell(bool b) { return b ? "TRUE" : "FALSE"; }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }

  std::ofstream out_;
};

void write_ranks(const DoubleScottKnottResult& r, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << r.final_ranks.to_csv();
}

void write_timings(const std::vector<CombinationReport>& combos, const std::filesystem::path& dir) {
  CsvFile f(dir / "timings.csv",
            "dataset,classifier,technique,evaluations,distinct_evaluations,generations,best_setting,best_score,seconds");
  for (const auto& c : combos) {
    for (const auto& o : c.optimizations) {
      std::set<std::string> distinct;
      for (const auto& e : o.evaluations) distinct.insert(e.setting.id());
      f.row(c.dataset, c.classifier, to_string(o.technique), o.evaluations.size(), distinct.size(),
            o.generations, o.best_setting.id(), o.best_score, o.wall_clock_seconds);
    }
  }
}

json failures_json(const std::vector<Failure>& failures) {
  json out = json::array();
  for (const auto& f : failures) {
    out.push_back({{"dataset", f.dataset}, {"classifier", f.classifier}, {"stage", f.stage}, {"message", f.message}});
  }
  return out;
}

json optimizations_json(const CombinationReport& c) {
  json out = json::array();
  for (const auto& o : c.optimizations) out.push_back(json::parse(o.to_json()));
  return out;
}

json double_sk_json(const DoubleScottKnottResult& r) {
  json per = json::object();
  for (const auto& [name, table] : r.per_dataset) per[name] = json::parse(table.to_json());
  return {{"final", json::parse(r.final_ranks.to_json())}, {"per_dataset", per}};
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

void emit_plot_data(const RunReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    CsvFile f(dir / "performance.csv", "dataset,classifier,configuration,setting,measure,repetition,value");
    for (const auto& c : report.combinations) {
      for (const auto* role : {"default", "optimized"}) {
        const bool def = std::string_view(role) == "default";
        const BootstrapResult& r = def ? c.default_eval : c.optimized_eval;
        const std::string setting = (def ? c.default_setting : c.optimized_setting).id();
        for (const auto& dist : r.distributions) {
          for (std::size_t i = 0; i < dist.values.size(); ++i) {
            f.row(c.dataset, c.classifier, role, setting, to_string(dist.measure), i + 1, dist.values[i]);
          }
        }
      }
    }
  }
  {
    CsvFile f(dir / "deltas.csv", "dataset,classifier,measure,repetition,default,optimized,delta");
    CsvFile e(dir / "effects.csv",
              "dataset,classifier,measure,mean_default,mean_optimized,mean_delta,cohens_d,magnitude,u_statistic,p_value,significant");
    CsvFile s(dir / "stability.csv", "dataset,classifier,measure,sd_default,sd_optimized,ratio,infinite");
    for (const auto& c : report.combinations) {
      for (const auto& a : c.analyses) {
        const auto& def = c.default_eval.at(a.measure).values;
        const auto& opt = c.optimized_eval.at(a.measure).values;
        for (std::size_t i = 0; i < a.delta.deltas.size(); ++i) {
          f.row(c.dataset, c.classifier, to_string(a.measure), i + 1, def[i], opt[i], a.delta.deltas[i]);
        }
        const double md = c.default_eval.at(a.measure).mean();
        const double mo = c.optimized_eval.at(a.measure).mean();
        const std::string d = a.delta.effect ? format_number(a.delta.effect->d) : "NA";
        const std::string mag = a.delta.effect ? to_string(a.delta.effect->magnitude) : "NA";
        e.row(c.dataset, c.classifier, to_string(a.measure), md, mo, mo - md, d, mag,
              a.delta.test.u_statistic, a.delta.test.p_value, a.delta.test.significant);
        s.row(c.dataset, c.classifier, to_string(a.measure), a.stability.sigma_default,
              a.stability.sigma_optimized, a.stability.ratio, a.stability.infinite);
      }
    }
  }
  {
    CsvFile f(dir / "importance.csv", "dataset,classifier,configuration,variable,repetition,importance");
    CsvFile r(dir / "rankshift.csv", "dataset,classifier,variable,rank_optimized,rank_default,shift");
    for (const auto& c : report.combinations) {
      for (const auto* role : {"default", "optimized"}) {
        const auto& scores = std::string_view(role) == "default" ? c.importance_default : c.importance_optimized;
        if (!scores) continue;
        for (std::size_t v = 0; v < scores->variables.size(); ++v) {
          for (std::size_t i = 0; i < scores->values[v].size(); ++i) {
            f.row(c.dataset, c.classifier, role, scores->variables[v], i + 1, scores->values[v][i]);
          }
        }
      }
      if (!c.rank_shift) continue;
      for (const auto& e : c.rank_shift->entries) {
        r.row(c.dataset, c.classifier, e.variable, e.rank_optimized, e.rank_default, e.shift);
      }
    }
  }
  {
    CsvFile f(dir / "transferability.csv", "classifier,parameter,value,count,frequency");
    CsvFile x(dir / "crossapply.csv",
              "classifier,donor,recipient,donor_setting,donor_mean,own_mean,p_value,significant_drop");
    for (const auto& t : report.transferability) {
      for (const auto& v : t.report.frequencies) f.row(t.classifier, v.parameter, v.value, v.count, v.frequency);
      for (const auto& a : t.report.cross) {
        x.row(t.classifier, a.donor, a.recipient, a.donor_setting, a.donor_mean, a.own_mean,
              a.test.p_value, a.significant_drop);
      }
    }
  }
  write_timings(report.combinations, dir);
  write_ranks(report.ranks_default, dir / "ranks_default.csv");
  write_ranks(report.ranks_optimized, dir / "ranks_optimized.csv");
}

void write_summary(const RunReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  json root;
  root["measure"] = to_string(report.measure);
  root["repetitions"] = report.repetitions;
  json datasets = json::array();
  for (const auto& d : report.datasets) {
    json removed = json::array();
    for (const auto& r : d.removed) {
      removed.push_back({{"column", r.column}, {"reason", to_string(r.reason)}, {"statistic", r.statistic}});
    }
    datasets.push_back({{"name", d.name},
                        {"rows", d.rows},
                        {"metrics_in", d.metrics_in},
                        {"metrics_kept", d.metrics_kept},
                        {"epv", d.inclusion.epv},
                        {"defective_rate", d.inclusion.defective_rate},
                        {"included", d.inclusion.included},
                        {"removed", removed}});
  }
  root["datasets"] = datasets;

  json combos = json::array();
  for (const auto& c : report.combinations) {
    json measures = json::object();
    for (const auto& a : c.analyses) {
      json m;
      m["mean_default"] = c.default_eval.at(a.measure).mean();
      m["mean_optimized"] = c.optimized_eval.at(a.measure).mean();
      if (a.delta.effect) {
        m["cohens_d"] = a.delta.effect->infinite ? json("inf") : json(a.delta.effect->d);
        m["magnitude"] = to_string(a.delta.effect->magnitude);
      }
      m["p_value"] = a.delta.test.p_value;
      m["significant"] = a.delta.test.significant;
      m["stability_ratio"] = a.stability.infinite ? json("inf") : json(a.stability.ratio);
      measures[to_string(a.measure)] = m;
    }
    json entry{{"dataset", c.dataset},
               {"classifier", c.classifier},
               {"default_setting", c.default_setting.id()},
               {"optimized_setting", c.optimized_setting.id()},
               {"redraws_default", c.default_eval.redraws},
               {"redraws_optimized", c.optimized_eval.redraws},
               {"measures", measures},
               {"optimizations", optimizations_json(c)}};
    if (c.rank_shift) {
      entry["importance_ranks_default"] = json::parse(c.importance_ranks_default.to_json());
      entry["importance_ranks_optimized"] = json::parse(c.importance_ranks_optimized.to_json());
      json overlap = json::array();
      for (const auto& o : c.rank_shift->overlap) {
        overlap.push_back({{"rank", o.rank}, {"variables", o.variables}, {"fraction", o.fraction}});
      }
      entry["rank_overlap"] = overlap;
    }
    combos.push_back(entry);
  }
  root["combinations"] = combos;

  json transfer = json::array();
  for (const auto& t : report.transferability) {
    json cross = json::array();
    for (const auto& a : t.report.cross) {
      cross.push_back({{"donor", a.donor},
                       {"recipient", a.recipient},
                       {"donor_setting", a.donor_setting},
                       {"donor_mean", a.donor_mean},
                       {"own_mean", a.own_mean},
                       {"p_value", a.test.p_value},
                       {"significant_drop", a.significant_drop}});
    }
    transfer.push_back({{"classifier", t.classifier}, {"cross_application", cross}});
  }
  root["transferability"] = transfer;
  root["ranks_default"] = double_sk_json(report.ranks_default);
  root["ranks_optimized"] = double_sk_json(report.ranks_optimized);
  root["ranks_joint"] = double_sk_json(report.ranks_joint);
  root["failures"] = failures_json(report.failures);
  write_json(root, dir / "summary.json");
}

void write_comparison(const ComparisonReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    CsvFile f(dir / "comparison.csv", "dataset,classifier,technique,measure,mean,grid_mean,ratio");
    for (const auto& r : report.rows) {
      f.row(r.dataset, r.classifier, to_string(r.technique), to_string(r.measure), r.mean, r.grid_mean, r.ratio);
    }
  }
  write_timings(report.combinations, dir);
  json root;
  json combos = json::array();
  for (const auto& c : report.combinations) {
    combos.push_back({{"dataset", c.dataset}, {"classifier", c.classifier}, {"optimizations", optimizations_json(c)}});
  }
  root["combinations"] = combos;
  root["failures"] = failures_json(report.failures);
  write_json(root, dir / "summary.json");
}

}  // namespace dptune
