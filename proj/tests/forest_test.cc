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

#include <cmath>
#include <numbers>
#include <set>

#include "bagforest/errors.h"
#include "gtest/gtest.h"

namespace bagforest {
namespace {

Dataset Make(const std::vector<std::vector<double>>& rows,
             const std::vector<Label>& labels) {
  std::vector<std::string> names;
  for (size_t f = 0; f < rows.at(0).size(); ++f) {
    names.push_back("f" + std::to_string(f));
  }
  std::vector<double> values;
  for (const auto& r : rows) values.insert(values.end(), r.begin(), r.end());
  return Dataset(names, values, labels);
}

// Two noisy Gaussian blobs in `dims` dimensions.
Dataset Blobs(size_t n, size_t dims, uint64_t seed, double separation = 1.5) {
  RandomStream rng(seed);
  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;
  for (size_t i = 0; i < n; ++i) {
    const Label l = static_cast<Label>(rng.UniformBelow(2));
    std::vector<double> row(dims);
    for (size_t f = 0; f < dims; ++f) {
      // Box-Muller.
      const double u1 = 1.0 - rng.UniformReal();
      const double u2 = rng.UniformReal();
      const double z = std::sqrt(-2.0 * std::log(u1)) *
                       std::cos(2.0 * std::numbers::pi * u2);
      row[f] = z + (f < 2 && l ? separation : 0.0);
    }
    rows.push_back(row);
    labels.push_back(l);
  }
  return Make(rows, labels);
}

// A hand-built forest with constant-vote trees.
ForestModel VotingModel(const std::vector<Label>& votes) {
  ForestModel m;
  m.n_features = 1;
  m.feature_names = {"x"};
  for (Label v : votes) {
    std::vector<TreeNode> nodes(1);
    nodes[0].class_counts = {v ? 0u : 1u, v ? 1u : 0u};
    nodes[0].predicted = v;
    m.trees.emplace_back(nodes);
  }
  m.config.n_estimators = votes.size();
  return m;
}

TEST(BootstrapSample, SingleRow) {
  RandomStream rng(3);
  EXPECT_EQ(BootstrapSample(1, rng), (std::vector<size_t>{0}));
  EXPECT_THROW(BootstrapSample(0, rng), DataError);
}

TEST(BootstrapSample, UniqueFractionNearOneMinusInverseE) {
  const double expected = 1.0 - OobExclusionProbability(10000);
  for (uint64_t seed = 0; seed < 5; ++seed) {
    RandomStream rng(seed);
    const auto sample = BootstrapSample(10000, rng);
    ASSERT_EQ(sample.size(), 10000u);
    const std::set<size_t> unique(sample.begin(), sample.end());
    EXPECT_NEAR(unique.size() / 10000.0, expected, 0.02);
    EXPECT_LT(*unique.rbegin(), 10000u);
  }
}

TEST(BootstrapSample, Deterministic) {
  RandomStream a(8), b(8);
  EXPECT_EQ(BootstrapSample(50, a), BootstrapSample(50, b));
}

TEST(OobExclusionProbability, Values) {
  EXPECT_EQ(OobExclusionProbability(1), 0.0);
  EXPECT_NEAR(OobExclusionProbability(1000000), std::exp(-1.0), 1e-6);
  EXPECT_NEAR(OobExclusionProbability(100), 0.366032, 5e-7);
  EXPECT_DOUBLE_EQ(OobExclusionProbability(2), 0.25);
  EXPECT_THROW(OobExclusionProbability(0), DataError);
}

TEST(ResolveTreeConfig, Defaults) {
  ForestConfig cfg;
  const TreeConfig t = ResolveTreeConfig(cfg, 541, 41);
  EXPECT_EQ(t.max_depth, 10u);
  EXPECT_EQ(t.features_per_split, 6u);
  EXPECT_EQ(ResolveTreeConfig(cfg, 10, 1).features_per_split, 1u);
  cfg.depth_rule = DepthRule::kUnbounded;
  EXPECT_FALSE(ResolveTreeConfig(cfg, 10, 4).max_depth.has_value());
  cfg.depth_rule = DepthRule::kFixed;
  cfg.max_depth = 3;
  EXPECT_EQ(ResolveTreeConfig(cfg, 10, 4).max_depth, 3u);
}

TEST(ResolveTreeConfig, Errors) {
  ForestConfig cfg;
  cfg.n_estimators = 0;
  EXPECT_THROW(ResolveTreeConfig(cfg, 10, 4), DataError);
  cfg = {};
  cfg.features_per_split = 5;
  EXPECT_THROW(ResolveTreeConfig(cfg, 10, 4), DataError);
  cfg.features_per_split = 0;
  EXPECT_THROW(ResolveTreeConfig(cfg, 10, 4), DataError);
  cfg = {};
  cfg.min_samples_leaf = 0;
  EXPECT_THROW(ResolveTreeConfig(cfg, 10, 4), DataError);
  try {
    ForestConfig zero;
    zero.n_estimators = 0;
    ResolveTreeConfig(zero, 10, 4);
  } catch (const DataError& e) {
    EXPECT_STREQ(e.what(), "n_estimators must be positive");
  }
}

TEST(Predict, MajorityAndTieBreak) {
  const std::vector<double> row{0.0};
  const ForestModel three = VotingModel({1, 1, 0});
  EXPECT_EQ(Predict(three, row), 1);
  EXPECT_DOUBLE_EQ(PredictScore(three, row), 2.0 / 3.0);

  EXPECT_EQ(Predict(VotingModel({0, 1}), row), 0);
  EXPECT_EQ(PredictScore(VotingModel({0, 0, 0}), row), 0.0);

  std::vector<Label> half(100, 0);
  std::fill(half.begin(), half.begin() + 50, 1);
  const ForestModel hundred = VotingModel(half);
  EXPECT_EQ(PredictScore(hundred, row), 0.5);
  EXPECT_EQ(Predict(hundred, row), 0);

  EXPECT_THROW(Predict(three, std::vector<double>{1.0, 2.0}), DataError);
}

TEST(Fit, SingleClassData) {
  const Dataset d = Make({{1}, {2}, {3}, {4}, {5}}, {1, 1, 1, 1, 1});
  ForestConfig cfg;
  cfg.n_estimators = 10;
  const ForestModel m = Fit(d, cfg);
  for (size_t r = 0; r < d.n_rows(); ++r) EXPECT_EQ(Predict(m, d.row(r)), 1);
  ASSERT_TRUE(m.oob_score.has_value());
  EXPECT_EQ(*m.oob_score, 1.0);
}

TEST(Fit, XorDataTrainingAccuracy) {
  const Dataset d = Make({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {0, 1, 1, 0});
  ForestConfig cfg;
  cfg.n_estimators = 25;
  cfg.depth_rule = DepthRule::kFixed;
  cfg.max_depth = 2;
  cfg.features_per_split = 2;
  const ForestModel m = Fit(d, cfg);
  const auto predicted = PredictLabels(m, d);
  for (size_t r = 0; r < d.n_rows(); ++r) {
    EXPECT_EQ(predicted[r], d.labels()[r]) << "row " << r;
    EXPECT_EQ(predicted[r] == 1, PredictScore(m, d.row(r)) > 0.5);
  }
}

TEST(Fit, ModelInvariants) {
  const Dataset d = Blobs(150, 5, 1);
  ForestConfig cfg;
  cfg.n_estimators = 30;
  const ForestModel m = Fit(d, cfg);
  ASSERT_EQ(m.trees.size(), 30u);
  ASSERT_EQ(m.bootstrap_indices.size(), 30u);
  for (const auto& b : m.bootstrap_indices) ASSERT_EQ(b.size(), d.n_rows());
  for (const auto& t : m.trees) {
    ASSERT_LE(t.depth(), DefaultDepth(d.n_rows()));
  }
  ASSERT_TRUE(m.oob_score.has_value());
  EXPECT_GT(*m.oob_score, 0.7);
}

TEST(Fit, SerialAndParallelAreIdentical) {
  const Dataset d = Blobs(200, 6, 2);
  ForestConfig cfg;
  cfg.n_estimators = 40;
  cfg.seed = 99;
  const ForestModel serial = Fit(d, cfg, Execution::kSerial);
  for (int threads : {1, 2, 4, 7}) {
    SetNumThreads(threads);
    EXPECT_EQ(Fit(d, cfg, Execution::kParallel), serial) << threads;
  }
  SetNumThreads(1);
  EXPECT_EQ(PredictScores(serial, d, Execution::kParallel),
            PredictScores(serial, d, Execution::kSerial));
  EXPECT_EQ(ComputeOob(serial, d, Execution::kParallel).rows_correct,
            ComputeOob(serial, d, Execution::kSerial).rows_correct);
}

TEST(Fit, SeedChangesModel) {
  const Dataset d = Blobs(100, 4, 3);
  ForestConfig a;
  a.n_estimators = 5;
  ForestConfig b = a;
  b.seed = a.seed + 1;
  EXPECT_NE(Fit(d, a).bootstrap_indices, Fit(d, b).bootstrap_indices);
}

TEST(Fit, VoteConsistency) {
  const Dataset d = Blobs(120, 3, 4, 0.8);
  ForestConfig cfg;
  cfg.n_estimators = 20;  // even count, so exact ties can occur
  const ForestModel m = Fit(d, cfg);
  const Dataset probe = Blobs(300, 3, 5, 0.8);
  for (size_t r = 0; r < probe.n_rows(); ++r) {
    ASSERT_EQ(Predict(m, probe.row(r)) == 1, PredictScore(m, probe.row(r)) > 0.5);
  }
}

TEST(Fit, AddingTreesKeepsUnanimousPredictions) {
  const Dataset d = Blobs(150, 4, 6);
  ForestConfig small;
  small.n_estimators = 10;
  ForestConfig large = small;
  large.n_estimators = 40;
  const ForestModel a = Fit(d, small);
  const ForestModel b = Fit(d, large);
  // Tree i depends only on (seed, i): the first 10 trees coincide.
  for (size_t i = 0; i < 10; ++i) ASSERT_EQ(a.trees[i], b.trees[i]);
  ForestModel extended = a;
  const Dataset probe = Blobs(200, 4, 7);
  for (size_t r = 0; r < probe.n_rows(); ++r) {
    const double score = PredictScore(a, probe.row(r));
    if (score != 0.0 && score != 1.0) continue;
    // Appending trees that agree with the unanimous vote cannot flip it.
    std::vector<DecisionTree> agreeing;
    for (const auto& t : b.trees) {
      if (t.Predict(probe.row(r)) == static_cast<Label>(score)) {
        agreeing.push_back(t);
      }
    }
    extended.trees = a.trees;
    extended.trees.insert(extended.trees.end(), agreeing.begin(), agreeing.end());
    ASSERT_EQ(Predict(extended, probe.row(r)), Predict(a, probe.row(r)));
  }
}

TEST(OobScore, SingleRowHasNoOutOfBagRows) {
  const Dataset d = Make({{1.0}}, {1});
  ForestConfig cfg;
  cfg.n_estimators = 1;
  const ForestModel m = Fit(d, cfg);
  EXPECT_FALSE(m.oob_score.has_value());
  EXPECT_FALSE(OobScore(m, d).has_value());
}

TEST(OobScore, CoverageAndManualRecount) {
  const Dataset d = Blobs(150, 4, 8);
  ForestConfig cfg;
  cfg.n_estimators = 60;
  const ForestModel m = Fit(d, cfg);
  const OobSummary oob = ComputeOob(m, d);
  EXPECT_GE(static_cast<double>(oob.rows_evaluated) / d.n_rows(), 0.999);

  size_t correct = 0, evaluated = 0;
  for (size_t r = 0; r < d.n_rows(); ++r) {
    size_t pos = 0, voters = 0;
    for (size_t t = 0; t < m.trees.size(); ++t) {
      const auto& bag = m.bootstrap_indices[t];
      if (std::find(bag.begin(), bag.end(), r) != bag.end()) continue;
      ++voters;
      pos += m.trees[t].Predict(d.row(r));
    }
    if (voters == 0) continue;
    ++evaluated;
    correct += ((2 * pos > voters) ? 1 : 0) == d.labels()[r];
  }
  EXPECT_EQ(oob.rows_evaluated, evaluated);
  EXPECT_EQ(oob.rows_correct, correct);
  EXPECT_DOUBLE_EQ(*m.oob_score, static_cast<double>(correct) / evaluated);
}

TEST(OobScore, TracksHeldOutAccuracy) {
  const Dataset train = Blobs(400, 6, 10);
  const Dataset test = Blobs(400, 6, 11);
  ForestConfig cfg;
  cfg.n_estimators = 50;
  const ForestModel m = Fit(train, cfg);
  const auto predicted = PredictLabels(m, test);
  size_t correct = 0;
  for (size_t r = 0; r < test.n_rows(); ++r) {
    correct += predicted[r] == test.labels()[r];
  }
  EXPECT_NEAR(*m.oob_score, static_cast<double>(correct) / test.n_rows(), 0.05);
}

}  // namespace
}  // namespace bagforest
