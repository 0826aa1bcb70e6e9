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

#ifndef BAGFOREST_FOREST_H_
#define BAGFOREST_FOREST_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bagforest/data.h"
#include "bagforest/execution.h"
#include "bagforest/random.h"
#include "bagforest/tree.h"

namespace bagforest {

enum class DepthRule {
  kLog2Rows,   // ceil(log2 n_train), see DefaultDepth()
  kFixed,      // ForestConfig::max_depth
  kUnbounded,  // grow until pure
};

struct ForestConfig {
  size_t n_estimators = 100;
  DepthRule depth_rule = DepthRule::kLog2Rows;
  uint32_t max_depth = 0;  // only read for DepthRule::kFixed
  // nullopt: floor(sqrt(n_features)), at least 1.
  std::optional<size_t> features_per_split;
  size_t min_samples_leaf = 1;
  uint64_t seed = 42;

  bool operator==(const ForestConfig&) const = default;
};

// Resolves defaults against the training shape. Throws DataError on an
// invalid configuration.
TreeConfig ResolveTreeConfig(const ForestConfig& cfg, size_t n_train,
                             size_t n_features);

struct ForestModel {
  ForestConfig config;
  TreeConfig tree_config;  // resolved
  std::vector<std::string> feature_names;
  size_t n_features = 0;
  size_t n_train = 0;
  std::vector<DecisionTree> trees;
  // Row ordinals drawn for each tree; each has n_train entries.
  std::vector<std::vector<uint32_t>> bootstrap_indices;
  std::optional<double> oob_score;

  bool operator==(const ForestModel&) const = default;
};

// n uniform draws with replacement from [0, n). Throws DataError for n == 0.
std::vector<size_t> BootstrapSample(size_t n, RandomStream& rng);

// Probability (1 - 1/k)^k that a given row is absent from a bootstrap
// sample of size k. Tends to 1/e.
double OobExclusionProbability(uint64_t k);

// Tree i is grown on bootstrap sample i using the stream
// RandomStream(cfg.seed).Split(i), so the model does not depend on the
// order in which trees are grown.
ForestModel Fit(const Dataset& train, const ForestConfig& cfg,
                Execution exec = Execution::kParallel);

// Number of trees voting label 1. Throws DataError on width mismatch.
size_t PositiveVotes(const ForestModel& m, std::span<const double> row);
// Fraction of trees voting label 1.
double PredictScore(const ForestModel& m, std::span<const double> row);
// Majority vote; an exact tie goes to label 0.
Label Predict(const ForestModel& m, std::span<const double> row);

std::vector<double> PredictScores(const ForestModel& m, const Dataset& d,
                                  Execution exec = Execution::kParallel);
std::vector<Label> PredictLabels(const ForestModel& m, const Dataset& d,
                                 Execution exec = Execution::kParallel);

struct OobSummary {
  std::optional<double> score;
  size_t rows_evaluated = 0;  // rows out-of-bag for at least one tree
  size_t rows_correct = 0;
};

// Each row is voted on only by trees whose bootstrap sample excluded it.
// Rows that were in-bag everywhere are left out of the denominator.
OobSummary ComputeOob(const ForestModel& m, const Dataset& train,
                      Execution exec = Execution::kParallel);
inline std::optional<double> OobScore(const ForestModel& m,
                                      const Dataset& train) {
  return ComputeOob(m, train).score;
}

}  // namespace bagforest

#endif  // BAGFOREST_FOREST_H_
