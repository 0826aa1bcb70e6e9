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

// bagforest: train, evaluate and analyze a bagged decision-tree classifier
// on a binary-labeled CSV file.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bagforest/errors.h"
#include "bagforest/execution.h"
#include "bagforest/pipeline.h"

namespace {

using bagforest::AnalysisRequest;
using bagforest::ColumnPair;
using bagforest::RunConfig;

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  for (char c : s) {
    if (c == ',') {
      out.push_back(item);
      item.clear();
    } else {
      item += c;
    }
  }
  out.push_back(item);
  return out;
}

ColumnPair ParsePair(const std::string& s, const std::string& flag) {
  const auto parts = SplitList(s);
  if (parts.size() != 2 || parts[0].empty() || parts[1].empty()) {
    throw bagforest::DataError(flag + " expects two comma-separated columns, got '" +
                               s + "'");
  }
  return {parts[0], parts[1]};
}

struct Flags {
  std::string input;
  std::string target;
  double test_fraction = 0.25;
  uint64_t seed = 42;
  int64_t trees = 100;
  std::string max_depth = "log2";
  int64_t features_per_split = 0;
  int64_t min_samples_leaf = 1;
  std::string impute = "median";
  std::vector<std::string> drop_columns;
  std::string out_dir = "out";
  int threads = 0;
  bool all_rows = false;

  std::string correlation;
  std::vector<std::string> kde1d;
  std::vector<std::string> kde2d;
  std::vector<std::string> quadrant;
  std::vector<std::string> scatter;
  bool no_by_label = false;
  bool svg = false;
  int64_t grid_size = 100;
  std::string model = "out/model.json";
};

void AddRunFlags(CLI::App* cmd, Flags& f, bool forest_flags) {
  cmd->add_option("--input", f.input, "CSV file with a header row")->required();
  cmd->add_option("--target-column", f.target, "Binary label column (0/1 or N/Y)")
      ->required();
  cmd->add_option("--seed", f.seed, "Seed for the split and the forest")
      ->capture_default_str();
  cmd->add_option("--test-fraction", f.test_fraction, "Held-out fraction")
      ->capture_default_str();
  cmd->add_option("--impute", f.impute, "median, mean or drop-row")
      ->capture_default_str();
  cmd->add_option("--drop-columns", f.drop_columns,
                  "Feature columns to ignore (comma-separated)")
      ->delimiter(',');
  cmd->add_option("--out-dir", f.out_dir, "Output directory")
      ->capture_default_str();
  cmd->add_option("--threads", f.threads, "OpenMP threads (0: runtime default)");
  if (forest_flags) {
    cmd->add_option("--trees", f.trees, "Number of trees")->capture_default_str();
    cmd->add_option("--max-depth", f.max_depth,
                    "Depth limit: an integer, 'log2' (ceil(log2 n_train)) or "
                    "'none'")
        ->capture_default_str();
    cmd->add_option("--features-per-split", f.features_per_split,
                    "Candidate features per node (0: floor(sqrt(n_features)))");
    cmd->add_option("--min-samples-leaf", f.min_samples_leaf,
                    "Minimum rows per leaf")
        ->capture_default_str();
  }
}

void AddAnalysisFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--correlation", f.correlation,
                  "Comma-separated columns for the correlation matrix");
  cmd->add_option("--kde1d", f.kde1d, "Column for a 1-D density (repeatable)");
  cmd->add_option("--kde2d", f.kde2d, "x,y columns for a 2-D density (repeatable)");
  cmd->add_option("--quadrant", f.quadrant,
                  "Two binary columns to cross-tabulate (repeatable)");
  cmd->add_option("--scatter", f.scatter, "x,y columns to export (repeatable)");
  cmd->add_flag("--no-by-label", f.no_by_label, "Do not split densities by label");
  cmd->add_flag("--svg", f.svg, "Also write SVG heatmaps");
  cmd->add_option("--grid-size", f.grid_size, "KDE grid points per axis")
      ->capture_default_str();
}

RunConfig ToRunConfig(const Flags& f) {
  RunConfig cfg;
  cfg.input = f.input;
  cfg.target_column = f.target;
  cfg.test_fraction = f.test_fraction;
  cfg.seed = f.seed;
  cfg.impute = bagforest::ParseImputeStrategy(f.impute);
  cfg.drop_columns = f.drop_columns;
  cfg.out_dir = f.out_dir;
  cfg.evaluate_all_rows = f.all_rows;

  if (f.trees <= 0) throw bagforest::DataError("n_estimators must be positive");
  cfg.forest.n_estimators = static_cast<size_t>(f.trees);
  if (f.max_depth == "log2") {
    cfg.forest.depth_rule = bagforest::DepthRule::kLog2Rows;
  } else if (f.max_depth == "none" || f.max_depth == "unbounded") {
    cfg.forest.depth_rule = bagforest::DepthRule::kUnbounded;
  } else {
    int64_t depth = -1;
    try {
      size_t used = 0;
      depth = std::stoll(f.max_depth, &used);
      if (used != f.max_depth.size()) depth = -1;
    } catch (const std::exception&) {
    }
    if (depth < 0) {
      throw bagforest::DataError("--max-depth must be a non-negative integer, "
                                 "'log2' or 'none'");
    }
    cfg.forest.depth_rule = bagforest::DepthRule::kFixed;
    cfg.forest.max_depth = static_cast<uint32_t>(depth);
  }
  if (f.features_per_split < 0) {
    throw bagforest::DataError("features_per_split must be positive");
  }
  if (f.features_per_split > 0) {
    cfg.forest.features_per_split = static_cast<size_t>(f.features_per_split);
  }
  if (f.min_samples_leaf <= 0) {
    throw bagforest::DataError("min_samples_leaf must be positive");
  }
  cfg.forest.min_samples_leaf = static_cast<size_t>(f.min_samples_leaf);
  return cfg;
}

AnalysisRequest ToRequest(const Flags& f) {
  AnalysisRequest r;
  if (!f.correlation.empty()) r.correlation = SplitList(f.correlation);
  r.kde1d = f.kde1d;
  for (const auto& s : f.kde2d) r.kde2d.push_back(ParsePair(s, "--kde2d"));
  for (const auto& s : f.quadrant) r.quadrant.push_back(ParsePair(s, "--quadrant"));
  for (const auto& s : f.scatter) r.scatter.push_back(ParsePair(s, "--scatter"));
  r.by_label = !f.no_by_label;
  r.svg = f.svg;
  if (f.grid_size < 2) throw bagforest::DataError("--grid-size must be >= 2");
  r.grid_size = static_cast<size_t>(f.grid_size);
  return r;
}

void Report(const bagforest::CommandResult& result, const RunConfig& cfg) {
  std::cout << result.summary;
  for (const auto& p : result.artifacts) {
    std::cout << "wrote " << (cfg.out_dir / p).string() << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bagged decision-tree classifier for binary-labeled CSV data"};
  app.require_subcommand(1);
  Flags f;

  auto* train = app.add_subcommand("train", "Fit a forest on the training split");
  AddRunFlags(train, f, true);

  auto* evaluate =
      app.add_subcommand("evaluate", "Score a saved model on the held-out split");
  AddRunFlags(evaluate, f, false);
  evaluate->add_option("--model", f.model, "Model file from 'train'")
      ->capture_default_str();
  evaluate->add_flag("--all-rows", f.all_rows,
                     "Evaluate on every row instead of the test split");

  auto* analyze = app.add_subcommand("analyze", "Emit correlation, KDE, quadrant "
                                                "and scatter data");
  AddRunFlags(analyze, f, false);
  AddAnalysisFlags(analyze, f);

  auto* reproduce = app.add_subcommand(
      "reproduce", "Split, fit, evaluate, analyze and compare against the "
                   "reference results");
  AddRunFlags(reproduce, f, true);
  AddAnalysisFlags(reproduce, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const RunConfig cfg = ToRunConfig(f);
    bagforest::SetNumThreads(f.threads);
    const auto start = std::chrono::steady_clock::now();
    bagforest::CommandResult result;
    if (train->parsed()) {
      result = bagforest::CmdTrain(cfg);
    } else if (evaluate->parsed()) {
      result = bagforest::CmdEvaluate(cfg, f.model);
    } else if (analyze->parsed()) {
      result = bagforest::CmdAnalyze(cfg, ToRequest(f));
    } else {
      result = bagforest::CmdReproduce(cfg, ToRequest(f));
    }
    Report(result, cfg);
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;
    std::fprintf(stderr, "done in %.2f s\n", elapsed.count());
    return 0;
  } catch (const bagforest::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const bagforest::InvariantError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
