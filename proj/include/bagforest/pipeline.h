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

#ifndef BAGFOREST_PIPELINE_H_
#define BAGFOREST_PIPELINE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bagforest/data.h"
#include "bagforest/forest.h"
#include "bagforest/metrics.h"

namespace bagforest {

struct RunConfig {
  std::filesystem::path input;
  std::string target_column;
  double test_fraction = 0.25;
  uint64_t seed = 42;
  ForestConfig forest;  // forest.seed is overwritten by `seed`
  ImputeStrategy impute = ImputeStrategy::kMedian;
  std::vector<std::string> drop_columns;
  std::filesystem::path out_dir = "out";
  // Evaluate on every row instead of the held-out split.
  bool evaluate_all_rows = false;
};

using ColumnPair = std::pair<std::string, std::string>;

struct AnalysisRequest {
  std::vector<std::string> correlation;
  std::vector<std::string> kde1d;
  std::vector<ColumnPair> kde2d;
  std::vector<ColumnPair> quadrant;
  std::vector<ColumnPair> scatter;
  bool by_label = true;
  bool svg = false;
  size_t grid_size = 100;

  bool empty() const {
    return correlation.empty() && kde1d.empty() && kde2d.empty() &&
           quadrant.empty() && scatter.empty();
  }
};

// Throws DataError if any flag violates a module precondition.
void ValidateRunConfig(const RunConfig& cfg);

struct CommandResult {
  std::vector<std::filesystem::path> artifacts;  // relative to out_dir
  std::string summary;                           // printed to stdout
};

// Splits, fits on the training part, writes model.json and
// train_summary.json.
CommandResult CmdTrain(const RunConfig& cfg);
// Re-derives the same split and evaluates `model_path` on its test part
// (or on all rows); writes report.json and roc.csv.
CommandResult CmdEvaluate(const RunConfig& cfg,
                          const std::filesystem::path& model_path);
// Writes the requested analysis artifacts under out_dir/analysis.
CommandResult CmdAnalyze(const RunConfig& cfg, const AnalysisRequest& request);
// split -> fit -> evaluate -> analyze, plus comparison.json/.txt against
// the reference results.
CommandResult CmdReproduce(const RunConfig& cfg,
                           const AnalysisRequest& request);

// Published PCOS results the reproduce bundle is compared against.
struct ReferenceMetric {
  std::string name;
  double reference;
  double achieved;
};
std::vector<ReferenceMetric> CompareToReference(
    const ClassificationReport& report);

// Correlation over every feature, plus the follicle / lifestyle analyses
// when the PCOS column names are present.
AnalysisRequest DefaultAnalyses(const Dataset& d);

}  // namespace bagforest

#endif  // BAGFOREST_PIPELINE_H_
