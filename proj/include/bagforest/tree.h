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

#ifndef BAGFOREST_TREE_H_
#define BAGFOREST_TREE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bagforest/data.h"
#include "bagforest/random.h"

namespace bagforest {

using ClassCounts2 = std::array<uint64_t, 2>;

// Gini impurity 1 - p0^2 - p1^2. Throws DataError when both counts are 0.
double GiniImpurity(const ClassCounts2& counts);

// Smallest d with 2^d >= n, i.e. ceil(log2 n). Throws DataError for n == 0.
uint32_t DefaultDepth(uint64_t n);

// Diagnostic leaf-count bound 2 * n reported next to every grown tree.
uint64_t LeafBound(uint64_t n);

struct SplitCandidate {
  size_t feature = 0;
  double threshold = 0.0;
  double impurity_decrease = 0.0;
};

// Exhaustive CART split search over midpoints between consecutive distinct
// values of each candidate feature. Only splits leaving at least
// `min_samples_leaf` rows on each side are considered. Returns nullopt when
// no split strictly decreases weighted Gini impurity. Equal gains resolve to
// the lower feature index, then the lower threshold.
//
// `rows` are row ordinals into `data` and may repeat (bootstrap samples).
std::optional<SplitCandidate> BestSplit(
    const Dataset& data, std::span<const size_t> rows,
    std::span<const size_t> candidate_features, size_t min_samples_leaf = 1);

struct TreeConfig {
  std::optional<uint32_t> max_depth;  // nullopt: grow until pure
  size_t min_samples_leaf = 1;
  size_t features_per_split = 1;

  bool operator==(const TreeConfig&) const = default;
};

// Flat pre-order node storage; node 0 is the root. Internal nodes send
// rows with value <= threshold left.
struct TreeNode {
  bool is_leaf = true;
  uint32_t feature = 0;
  double threshold = 0.0;
  uint32_t left = 0;
  uint32_t right = 0;
  ClassCounts2 class_counts{0, 0};
  Label predicted = 0;

  bool operator==(const TreeNode&) const = default;
};

// Argmax of counts, ties toward label 0.
inline Label MajorityLabel(const ClassCounts2& counts) {
  return counts[1] > counts[0] ? 1 : 0;
}

class DecisionTree {
 public:
  DecisionTree() = default;
  // Validates structure (child links, leaf predictions) and recomputes
  // internal node counts from the leaves. Throws InvariantError.
  explicit DecisionTree(std::vector<TreeNode> nodes);

  Label Predict(std::span<const double> row) const;
  const TreeNode& Leaf(std::span<const double> row) const;

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  size_t leaf_count() const;
  // Longest root-to-leaf path, in edges.
  uint32_t depth() const;

  bool operator==(const DecisionTree&) const = default;

 private:
  friend class TreeBuilder;
  std::vector<TreeNode> nodes_;
};

// Grows a tree on data.row(r) for r in `rows`. At every node a fresh sample
// of cfg.features_per_split features is drawn without replacement from
// `rng`; growth stops at max_depth, when a child would fall below
// min_samples_leaf, at purity, or when no split has positive gain.
DecisionTree GrowTree(const Dataset& data, std::span<const size_t> rows,
                      const TreeConfig& cfg, RandomStream& rng);
DecisionTree GrowTree(const Dataset& data, const TreeConfig& cfg,
                      RandomStream& rng);

}  // namespace bagforest

#endif  // BAGFOREST_TREE_H_
