/*
 * Copyright 2026 The Bagforest Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "bagforest/pipeline.h"

#include <algorithm>
#include <cstdio>
#include <map>

#include <json.hpp>

#include "bagforest/analysis.h"
#include "bagforest/errors.h"
#include "bagforest/io.h"
#include "bagforest/model_io.h"

namespace bagforest {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Collects artifacts in memory; nothing touches disk until Commit, so a
// failing command leaves no partial outputs.
class Outputs {
 public:
  void Add(fs::path relative, std::string content) {
    files_.emplace_back(std::move(relative), std::move(content));
  }
  std::vector<fs::path> Commit(const fs::path& out_dir) const {
    std::vector<fs::path> written;
    for (const auto& [path, content] : files_) {
      WriteFileAtomic(out_dir / path, content);
      written.push_back(path);
    }
    return written;
  }
  std::vector<fs::path> paths() const {
    std::vector<fs::path> out;
    for (const auto& f : files_) out.push_back(f.first);
    return out;
  }

 private:
  std::vector<std::pair<fs::path, std::string>> files_;
};

std::string Slug(const std::string& name) {
  std::string out;
  for (char c : name) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-';
    if (keep) {
      out += c;
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "column" : out;
}

struct LoadedData {
  Dataset data;
  LoadOptions options;
};

LoadedData Load(const RunConfig& cfg) {
  LoadedData loaded;
  loaded.options.target_column = cfg.target_column;
  loaded.options.impute.strategy = cfg.impute;
  loaded.options.drop_columns = cfg.drop_columns;
  loaded.data = LoadCsv(cfg.input, loaded.options);
  return loaded;
}

ForestConfig EffectiveForest(const RunConfig& cfg) {
  ForestConfig f = cfg.forest;
  f.seed = cfg.seed;
  return f;
}

Json RunJson(const RunConfig& cfg) {
  const ForestConfig f = EffectiveForest(cfg);
  Json run;
  run["input"] = cfg.input.string();
  run["target_column"] = cfg.target_column;
  run["seed"] = cfg.seed;
  run["test_fraction"] = cfg.test_fraction;
  run["impute"] = ToString(cfg.impute);
  run["drop_columns"] = cfg.drop_columns;
  run["n_estimators"] = f.n_estimators;
  run["depth_rule"] = ToString(f.depth_rule);
  run["max_depth"] = f.depth_rule == DepthRule::kFixed ? Json(f.max_depth)
                                                        : Json(nullptr);
  run["features_per_split"] = f.features_per_split
                                  ? Json(*f.features_per_split)
                                  : Json("floor(sqrt(n_features))");
  run["min_samples_leaf"] = f.min_samples_leaf;
  run["evaluate_all_rows"] = cfg.evaluate_all_rows;
  return run;
}

Json DatasetJson(const LoadedData& loaded) {
  const auto [neg, pos] = ClassCounts(loaded.data);
  Json d;
  d["n_rows"] = loaded.data.n_rows();
  d["n_features"] = loaded.data.n_features();
  d["class_counts"] = {neg, pos};
  d["imputed_columns"] = loaded.options.impute.applied_columns;
  d["dropped_rows"] = loaded.options.impute.dropped_rows;
  return d;
}

std::string Manifest(const std::string& command, const RunConfig& cfg,
                     const std::vector<fs::path>& artifacts) {
  Json m;
  m["command"] = command;
  m["config"] = RunJson(cfg);
  m["input"] = {{"path", cfg.input.string()},
                {"sha256", Sha256File(cfg.input)}};
  Json paths = Json::array();
  for (const auto& p : artifacts) paths.push_back(p.generic_string());
  m["artifacts"] = std::move(paths);
  return m.dump(2) + "\n";
}

struct Trained {
  ForestModel model;
  Json summary;
  std::string text;
};

Trained Train(const RunConfig& cfg, const LoadedData& loaded,
              const SplitResult& split) {
  Trained t;
  t.model = Fit(split.train, EffectiveForest(cfg));
  const ForestModel& m = t.model;
  const uint64_t n_train = split.train.n_rows();
  const auto oob = ComputeOob(m, split.train);

  Json trees = Json::array();
  size_t max_leaves = 0;
  uint32_t max_depth_seen = 0;
  double mean_leaves = 0.0;
  for (size_t i = 0; i < m.trees.size(); ++i) {
    const size_t leaves = m.trees[i].leaf_count();
    const uint32_t depth = m.trees[i].depth();
    trees.push_back({{"index", i}, {"leaves", leaves}, {"depth", depth}});
    max_leaves = std::max(max_leaves, leaves);
    max_depth_seen = std::max(max_depth_seen, depth);
    mean_leaves += static_cast<double>(leaves);
  }
  mean_leaves /= static_cast<double>(m.trees.size());

  const auto [neg, pos] = ClassCounts(split.train);
  Json s;
  s["run"] = RunJson(cfg);
  s["dataset"] = DatasetJson(loaded);
  s["n_train"] = n_train;
  s["n_test"] = split.test.n_rows();
  s["train_class_counts"] = {neg, pos};
  s["oob_score"] = m.oob_score ? Json(*m.oob_score) : Json(nullptr);
  s["oob_rows_evaluated"] = oob.rows_evaluated;
  s["depth"] = {{"rule", ToString(m.config.depth_rule)},
                {"log2_default", DefaultDepth(n_train)},
                {"max_depth_used", m.tree_config.max_depth
                                       ? Json(*m.tree_config.max_depth)
                                       : Json(nullptr)},
                {"deepest_tree", max_depth_seen}};
  s["features_per_split"] = m.tree_config.features_per_split;
  s["leaves"] = {{"bound_2n", LeafBound(n_train)},
                 {"max", max_leaves},
                 {"mean", mean_leaves}};
  s["trees"] = std::move(trees);
  t.summary = std::move(s);

  char buf[512];
  std::snprintf(
      buf, sizeof(buf),
      "trained %zu trees on %llu rows x %zu features (seed %llu, test "
      "fraction %g)\n"
      "OOB score: %s\n"
      "depth used: %s (log2 default %u, deepest tree %u)\n"
      "leaves per tree: max %zu, mean %.1f, bound 2n = %llu\n",
      m.trees.size(), static_cast<unsigned long long>(n_train), m.n_features,
      static_cast<unsigned long long>(cfg.seed), cfg.test_fraction,
      m.oob_score ? FormatDouble(*m.oob_score).c_str() : "none",
      m.tree_config.max_depth ? std::to_string(*m.tree_config.max_depth).c_str()
                              : "unbounded",
      DefaultDepth(n_train), max_depth_seen, max_leaves, mean_leaves,
      static_cast<unsigned long long>(LeafBound(n_train)));
  t.text = buf;
  return t;
}

struct Evaluated {
  ClassificationReport report;
  std::optional<RocCurve> roc;
  std::string report_json;
  std::string text;
};

Evaluated Evaluate(const RunConfig& cfg, const ForestModel& model,
                   const Dataset& eval, const std::string& eval_name) {
  if (eval.n_features() != model.n_features) {
    throw DataError("feature count mismatch: model expects " +
                    std::to_string(model.n_features) + ", data has " +
                    std::to_string(eval.n_features()));
  }
  Evaluated e;
  const auto predicted = PredictLabels(model, eval);
  e.report = Report(predicted, eval.labels());
  const auto [neg, pos] = ClassCounts(eval);
  std::optional<double> auc;
  if (neg > 0 && pos > 0) {
    e.roc = ComputeRoc(PredictScores(model, eval), eval.labels());
    auc = e.roc->auc;
  }
  Json doc;
  doc["run"] = RunJson(cfg);
  doc["evaluation"] = {{"rows", eval.n_rows()},
                       {"subset", eval_name},
                       {"class_counts", {neg, pos}}};
  doc["metrics"] = Json::parse(ReportToJson(e.report, auc));
  e.report_json = doc.dump(2) + "\n";
  e.text = "evaluated on " + std::to_string(eval.n_rows()) + " " + eval_name +
           " rows\n" + ReportToText(e.report, auc);
  if (!e.roc) e.text += "ROC skipped: evaluation rows hold a single class\n";
  return e;
}

void CheckColumns(const Dataset& d, const AnalysisRequest& r) {
  auto check = [&d](const std::string& c) { d.feature_index(c); };
  for (const auto& c : r.correlation) check(c);
  for (const auto& c : r.kde1d) check(c);
  for (const auto* pairs : {&r.kde2d, &r.quadrant, &r.scatter}) {
    for (const auto& [a, b] : *pairs) {
      check(a);
      check(b);
    }
  }
}

std::string GroupSuffix(const KdeGrid& g) {
  return g.label ? "_label" + std::to_string(*g.label) : "";
}

// Grid rows flipped so the largest y is drawn on top.
std::vector<double> FlipRows(const KdeGrid& g) {
  const size_t nx = g.axes[0].size();
  const size_t ny = g.axes[1].size();
  std::vector<double> out(g.density.size());
  for (size_t j = 0; j < ny; ++j) {
    std::copy_n(g.density.begin() + j * nx, nx,
                out.begin() + (ny - 1 - j) * nx);
  }
  return out;
}

std::string Analyze(const Dataset& d, const AnalysisRequest& r,
                    Outputs& out) {
  CheckColumns(d, r);
  const fs::path dir = "analysis";
  std::string text;
  const std::span<const Label> labels =
      r.by_label ? std::span<const Label>(d.labels()) : std::span<const Label>();
  KdeOptions kde;
  kde.grid_size = r.grid_size;

  if (!r.correlation.empty()) {
    const auto corr = Correlation(d, r.correlation);
    out.Add(dir / "correlation.csv", CorrelationToCsv(corr));
    if (r.svg) {
      out.Add(dir / "correlation.svg",
              HeatmapSvg(corr.values, corr.size(), corr.size(),
                         "correlation", true));
    }
    text += "correlation: " + std::to_string(corr.size()) + " columns\n";
  }
  for (const auto& c : r.kde1d) {
    for (const auto& g : Kde1d(d.column(d.feature_index(c)), labels, kde)) {
      out.Add(dir / ("kde1d_" + Slug(c) + GroupSuffix(g) + ".csv"),
              KdeToCsv(g));
    }
    text += "kde1d: " + c + "\n";
  }
  for (const auto& [x, y] : r.kde2d) {
    const auto grids = Kde2d(d.column(d.feature_index(x)),
                             d.column(d.feature_index(y)), labels, kde);
    for (const auto& g : grids) {
      const std::string stem = "kde2d_" + Slug(x) + "__" + Slug(y) + GroupSuffix(g);
      out.Add(dir / (stem + ".csv"), KdeToCsv(g));
      if (r.svg) {
        out.Add(dir / (stem + ".svg"),
                HeatmapSvg(FlipRows(g), g.axes[1].size(), g.axes[0].size(),
                           x + " vs " + y + GroupSuffix(g), false));
      }
    }
    text += "kde2d: " + x + " vs " + y + "\n";
  }
  for (const auto& [a, b] : r.quadrant) {
    const auto q = Quadrants(d, a, b);
    out.Add(dir / ("quadrant_" + Slug(a) + "__" + Slug(b) + ".json"),
            QuadrantsToJson(q));
    text += "quadrant: " + a + " x " + b + "\n";
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const auto rate = q.positive_rate(i, j);
        text += std::string("  ") + (i ? "yes" : "no") + "/" + (j ? "yes" : "no") +
                ": n=" + std::to_string(q.total(i, j)) + " positive rate " +
                (rate ? Percent(*rate) : std::string("(empty)")) + "\n";
      }
    }
  }
  for (const auto& [x, y] : r.scatter) {
    out.Add(dir / ("scatter_" + Slug(x) + "__" + Slug(y) + ".csv"),
            ScatterToCsv(ScatterExport(d, x, y), x, y));
    text += "scatter: " + x + " vs " + y + "\n";
  }
  return text;
}

bool HasColumn(const Dataset& d, const std::string& name) {
  const auto& names = d.feature_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

bool IsBinaryColumn(const Dataset& d, const std::string& name) {
  const size_t f = d.feature_index(name);
  for (size_t r = 0; r < d.n_rows(); ++r) {
    if (d.at(r, f) != 0.0 && d.at(r, f) != 1.0) return false;
  }
  return true;
}

std::string ComparisonText(const std::vector<ReferenceMetric>& rows) {
  std::string out = "metric                 reference  achieved  delta\n";
  for (const auto& r : rows) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-22s %8.2f%% %8.2f%% %+6.2f\n",
                  r.name.c_str(), 100.0 * r.reference, 100.0 * r.achieved,
                  100.0 * (r.achieved - r.reference));
    out += buf;
  }
  return out;
}

}  // namespace

void ValidateRunConfig(const RunConfig& cfg) {
  if (cfg.input.empty()) throw DataError("--input is required");
  if (!fs::is_regular_file(cfg.input)) {
    throw DataError("input file '" + cfg.input.string() + "' not found");
  }
  if (cfg.target_column.empty()) {
    throw DataError("--target-column is required");
  }
  if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) {
    throw DataError("test_fraction must be in (0, 1)");
  }
  if (cfg.forest.n_estimators == 0) {
    throw DataError("n_estimators must be positive");
  }
  if (cfg.forest.features_per_split && *cfg.forest.features_per_split == 0) {
    throw DataError("features_per_split must be positive");
  }
  if (cfg.forest.min_samples_leaf == 0) {
    throw DataError("min_samples_leaf must be positive");
  }
}

CommandResult CmdTrain(const RunConfig& cfg) {
  ValidateRunConfig(cfg);
  const LoadedData loaded = Load(cfg);
  const SplitResult split =
      StratifiedSplit(loaded.data, cfg.test_fraction, cfg.seed);
  const Trained t = Train(cfg, loaded, split);

  Outputs out;
  out.Add("model.json", ModelToJson(t.model));
  out.Add("train_summary.json", t.summary.dump(2) + "\n");
  auto paths = out.paths();
  paths.emplace_back("manifest_train.json");
  out.Add("manifest_train.json", Manifest("train", cfg, paths));
  return {out.Commit(cfg.out_dir), t.text};
}

CommandResult CmdEvaluate(const RunConfig& cfg,
                          const fs::path& model_path) {
  ValidateRunConfig(cfg);
  const ForestModel model = LoadModel(model_path);
  const LoadedData loaded = Load(cfg);
  if (loaded.data.n_features() != model.n_features) {
    throw DataError("feature count mismatch: model expects " +
                    std::to_string(model.n_features) + ", data has " +
                    std::to_string(loaded.data.n_features()));
  }
  Dataset eval;
  std::string eval_name;
  if (cfg.evaluate_all_rows) {
    eval = loaded.data;
    eval_name = "all";
  } else {
    eval = StratifiedSplit(loaded.data, cfg.test_fraction, cfg.seed).test;
    eval_name = "test";
  }
  const Evaluated e = Evaluate(cfg, model, eval, eval_name);

  Outputs out;
  out.Add("report.json", e.report_json);
  if (e.roc) out.Add("roc.csv", RocToCsv(*e.roc));
  auto paths = out.paths();
  paths.emplace_back("manifest_evaluate.json");
  out.Add("manifest_evaluate.json", Manifest("evaluate", cfg, paths));
  return {out.Commit(cfg.out_dir), e.text};
}

CommandResult CmdAnalyze(const RunConfig& cfg,
                         const AnalysisRequest& request) {
  if (cfg.input.empty() || !fs::is_regular_file(cfg.input)) {
    throw DataError("input file '" + cfg.input.string() + "' not found");
  }
  if (cfg.target_column.empty()) {
    throw DataError("--target-column is required");
  }
  const LoadedData loaded = Load(cfg);
  const AnalysisRequest r =
      request.empty() ? [&] {
        AnalysisRequest d = DefaultAnalyses(loaded.data);
        d.by_label = request.by_label;
        d.svg = request.svg;
        d.grid_size = request.grid_size;
        return d;
      }()
                      : request;
  Outputs out;
  const std::string text = Analyze(loaded.data, r, out);
  auto paths = out.paths();
  paths.emplace_back("manifest_analyze.json");
  out.Add("manifest_analyze.json", Manifest("analyze", cfg, paths));
  return {out.Commit(cfg.out_dir), text};
}

CommandResult CmdReproduce(const RunConfig& cfg,
                           const AnalysisRequest& request) {
  ValidateRunConfig(cfg);
  const LoadedData loaded = Load(cfg);
  const SplitResult split =
      StratifiedSplit(loaded.data, cfg.test_fraction, cfg.seed);
  const Trained t = Train(cfg, loaded, split);
  const Evaluated e = Evaluate(cfg, t.model, split.test, "test");

  AnalysisRequest r = DefaultAnalyses(loaded.data);
  r.by_label = request.by_label;
  r.svg = request.svg;
  r.grid_size = request.grid_size;
  if (!request.empty()) {
    r.correlation = request.correlation.empty() ? r.correlation
                                                : request.correlation;
    r.kde1d.insert(r.kde1d.end(), request.kde1d.begin(), request.kde1d.end());
    r.kde2d.insert(r.kde2d.end(), request.kde2d.begin(), request.kde2d.end());
    r.quadrant.insert(r.quadrant.end(), request.quadrant.begin(),
                      request.quadrant.end());
    r.scatter.insert(r.scatter.end(), request.scatter.begin(),
                     request.scatter.end());
  }

  Outputs out;
  out.Add("model.json", ModelToJson(t.model));
  out.Add("train_summary.json", t.summary.dump(2) + "\n");
  out.Add("report.json", e.report_json);
  if (e.roc) out.Add("roc.csv", RocToCsv(*e.roc));
  const std::string analysis_text = Analyze(loaded.data, r, out);

  const auto rows = CompareToReference(e.report);
  Json comparison;
  comparison["run"] = RunJson(cfg);
  Json entries = Json::array();
  for (const auto& row : rows) {
    entries.push_back({{"metric", row.name},
                       {"reference", row.reference},
                       {"achieved", row.achieved},
                       {"delta", row.achieved - row.reference}});
  }
  comparison["metrics"] = std::move(entries);
  comparison["roc_auc"] = e.roc ? Json(e.roc->auc) : Json(nullptr);
  comparison["oob_score"] =
      t.model.oob_score ? Json(*t.model.oob_score) : Json(nullptr);
  const std::string table = ComparisonText(rows);
  out.Add("comparison.json", comparison.dump(2) + "\n");
  out.Add("comparison.txt", table);

  auto paths = out.paths();
  paths.emplace_back("manifest_reproduce.json");
  out.Add("manifest_reproduce.json", Manifest("reproduce", cfg, paths));
  return {out.Commit(cfg.out_dir),
          t.text + e.text + analysis_text + "\n" + table};
}

std::vector<ReferenceMetric> CompareToReference(
    const ClassificationReport& r) {
  const auto& l0 = r.per_label[0];
  const auto& l1 = r.per_label[1];
  return {
      {"accuracy", 0.92, r.accuracy},
      {"macro_precision", 0.91, r.macro.precision},
      {"macro_recall", 0.89, r.macro.recall},
      {"weighted_precision", 0.92, r.weighted.precision},
      {"weighted_recall", 0.92, r.weighted.recall},
      {"label0_precision", 0.93, l0.precision},
      {"label0_recall", 0.96, l0.recall},
      {"label1_precision", 0.90, l1.precision},
      {"label1_recall", 0.81, l1.recall},
      {"macro_f1", 0.90, r.macro.f1},
      {"weighted_f1", 0.92, r.weighted.f1},
      {"label0_f1", 0.94, l0.f1},
      {"label1_f1", 0.85, l1.f1},
      {"kappa", 0.7802, r.kappa},
  };
}

AnalysisRequest DefaultAnalyses(const Dataset& d) {
  AnalysisRequest r;
  r.correlation = d.feature_names();
  const std::string left = "Follicle No. (L)";
  const std::string right = "Follicle No. (R)";
  if (HasColumn(d, left) && HasColumn(d, right)) {
    r.kde2d.push_back({left, right});
    r.scatter.push_back({left, right});
  }
  if (HasColumn(d, "Endometrium (mm)")) r.kde1d.push_back("Endometrium (mm)");
  const std::string exercise = "Reg.Exercise(Y/N)";
  const std::string fast_food = "Fast food (Y/N)";
  if (HasColumn(d, exercise) && HasColumn(d, fast_food) &&
      IsBinaryColumn(d, exercise) && IsBinaryColumn(d, fast_food)) {
    r.quadrant.push_back({exercise, fast_food});
  }
  return r;
}

}  // namespace bagforest
