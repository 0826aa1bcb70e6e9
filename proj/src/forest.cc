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

#include "bagforest/forest.h"

#include <omp.h>

#include <cmath>
#include <exception>
#include <string>

#include "bagforest/errors.h"

namespace bagforest {
namespace {

// Exact majority with the tie sent to label 0.
Label Vote(size_t positive, size_t total) {
  return 2 * positive > total ? 1 : 0;
}

void CheckWidth(const ForestModel& m, std::span<const double> row) {
  if (row.size() != m.n_features) {
    throw DataError("row has " + std::to_string(row.size()) +
                    " features, model expects " +
                    std::to_string(m.n_features));
  }
}

void CheckWidth(const ForestModel& m, const Dataset& d) {
  if (d.n_features() != m.n_features) {
    throw DataError("data has " + std::to_string(d.n_features()) +
                    " feature columns, model expects " +
                    std::to_string(m.n_features));
  }
}

}  // namespace

TreeConfig ResolveTreeConfig(const ForestConfig& cfg, size_t n_train,
                             size_t n_features) {
  if (cfg.n_estimators == 0) {
    throw DataError("n_estimators must be positive");
  }
  if (cfg.min_samples_leaf == 0) {
    throw DataError("min_samples_leaf must be positive");
  }
  if (n_train == 0) throw DataError("training set is empty");
  TreeConfig tree;
  tree.min_samples_leaf = cfg.min_samples_leaf;
  switch (cfg.depth_rule) {
    case DepthRule::kLog2Rows:
      tree.max_depth = DefaultDepth(n_train);
      break;
    case DepthRule::kFixed:
      tree.max_depth = cfg.max_depth;
      break;
    case DepthRule::kUnbounded:
      tree.max_depth = std::nullopt;
      break;
  }
  if (cfg.features_per_split) {
    if (*cfg.features_per_split == 0 ||
        (n_features > 0 && *cfg.features_per_split > n_features)) {
      throw DataError("features_per_split must be in [1, " +
                      std::to_string(n_features) + "]");
    }
    tree.features_per_split = *cfg.features_per_split;
  } else {
    const auto root = static_cast<size_t>(
        std::floor(std::sqrt(static_cast<double>(n_features))));
    tree.features_per_split = std::max<size_t>(root, 1);
  }
  return tree;
}

std::vector<size_t> BootstrapSample(size_t n, RandomStream& rng) {
  if (n == 0) throw DataError("bootstrap sample of zero rows");
  std::vector<size_t> sample(n);
  for (auto& s : sample) s = rng.UniformBelow(n);
  return sample;
}

double OobExclusionProbability(uint64_t k) {
  if (k == 0) throw DataError("exclusion probability needs k >= 1");
  if (k == 1) return 0.0;
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log1p(-1.0 / kd));
}

ForestModel Fit(const Dataset& train, const ForestConfig& cfg,
                Execution exec) {
  ForestModel m;
  m.config = cfg;
  m.tree_config = ResolveTreeConfig(cfg, train.n_rows(), train.n_features());
  m.feature_names = train.feature_names();
  m.n_features = train.n_features();
  m.n_train = train.n_rows();
  m.trees.resize(cfg.n_estimators);
  m.bootstrap_indices.resize(cfg.n_estimators);

  const RandomStream root(cfg.seed);
  const auto n_trees = static_cast<int64_t>(cfg.n_estimators);
  auto grow_one = [&](int64_t i) {
    RandomStream rng = root.Split(static_cast<uint64_t>(i));
    const auto sample = BootstrapSample(train.n_rows(), rng);
    m.trees[i] = GrowTree(train, sample, m.tree_config, rng);
    m.bootstrap_indices[i].assign(sample.begin(), sample.end());
  };

  if (exec == Execution::kParallel) {
    // Exceptions may not cross the OpenMP region boundary.
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
    for (int64_t i = 0; i < n_trees; ++i) {
      try {
        grow_one(i);
      } catch (...) {
#pragma omp critical(bagforest_fit_error)
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    for (int64_t i = 0; i < n_trees; ++i) grow_one(i);
  }

  m.oob_score = ComputeOob(m, train, exec).score;
  return m;
}

size_t PositiveVotes(const ForestModel& m, std::span<const double> row) {
  CheckWidth(m, row);
  size_t positive = 0;
  for (const auto& tree : m.trees) positive += tree.Predict(row);
  return positive;
}

double PredictScore(const ForestModel& m, std::span<const double> row) {
  if (m.trees.empty()) throw InvariantError("model has no trees");
  return static_cast<double>(PositiveVotes(m, row)) /
         static_cast<double>(m.trees.size());
}

Label Predict(const ForestModel& m, std::span<const double> row) {
  return Vote(PositiveVotes(m, row), m.trees.size());
}

std::vector<double> PredictScores(const ForestModel& m, const Dataset& d,
                                  Execution exec) {
  CheckWidth(m, d);
  if (m.trees.empty()) throw InvariantError("model has no trees");
  std::vector<double> scores(d.n_rows());
  const auto n = static_cast<int64_t>(d.n_rows());
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static)
    for (int64_t r = 0; r < n; ++r) scores[r] = PredictScore(m, d.row(r));
  } else {
    for (int64_t r = 0; r < n; ++r) scores[r] = PredictScore(m, d.row(r));
  }
  return scores;
}

std::vector<Label> PredictLabels(const ForestModel& m, const Dataset& d,
                                 Execution exec) {
  CheckWidth(m, d);
  std::vector<Label> labels(d.n_rows());
  const auto n = static_cast<int64_t>(d.n_rows());
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static)
    for (int64_t r = 0; r < n; ++r) labels[r] = Predict(m, d.row(r));
  } else {
    for (int64_t r = 0; r < n; ++r) labels[r] = Predict(m, d.row(r));
  }
  return labels;
}

OobSummary ComputeOob(const ForestModel& m, const Dataset& train,
                      Execution exec) {
  CheckWidth(m, train);
  const size_t n = train.n_rows();
  const size_t n_trees = m.trees.size();
  if (m.bootstrap_indices.size() != n_trees) {
    throw InvariantError("model does not retain its bootstrap samples");
  }
  std::vector<std::vector<bool>> in_bag(n_trees, std::vector<bool>(n, false));
  for (size_t t = 0; t < n_trees; ++t) {
    for (uint32_t r : m.bootstrap_indices[t]) {
      if (r >= n) throw DataError("bootstrap index beyond training rows");
      in_bag[t][r] = true;
    }
  }

  auto score_row = [&](size_t r, size_t& evaluated, size_t& correct) {
    size_t voters = 0;
    size_t positive = 0;
    for (size_t t = 0; t < n_trees; ++t) {
      if (in_bag[t][r]) continue;
      ++voters;
      positive += m.trees[t].Predict(train.row(r));
    }
    if (voters == 0) return;
    ++evaluated;
    if (Vote(positive, voters) == train.labels()[r]) ++correct;
  };

  size_t evaluated = 0;
  size_t correct = 0;
  const auto rows = static_cast<int64_t>(n);
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static) reduction(+ : evaluated, correct)
    for (int64_t r = 0; r < rows; ++r) score_row(r, evaluated, correct);
  } else {
    for (int64_t r = 0; r < rows; ++r) score_row(r, evaluated, correct);
  }

  OobSummary out;
  out.rows_evaluated = evaluated;
  out.rows_correct = correct;
  if (evaluated > 0) {
    out.score = static_cast<double>(correct) / static_cast<double>(evaluated);
  }
  return out;
}

void SetNumThreads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int MaxThreads() { return omp_get_max_threads(); }

}  // namespace bagforest
