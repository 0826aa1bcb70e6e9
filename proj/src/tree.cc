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

#include "bagforest/tree.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bagforest/errors.h"

namespace bagforest {
namespace {

// Exact rational used to rank splits: sum over children of
// (c0^2 + c1^2) / n_child. Maximizing it maximizes the Gini decrease, and
// integer arithmetic makes equal-gain ties exact.
struct Score {
  __int128 num;
  __int128 den;
};

bool Greater(const Score& a, const Score& b) {
  return a.num * b.den > b.num * a.den;
}

__int128 SumSquares(const ClassCounts2& c) {
  return static_cast<__int128>(c[0]) * c[0] +
         static_cast<__int128>(c[1]) * c[1];
}

double Midpoint(double a, double b) {
  double mid = 0.5 * (a + b);
  if (!std::isfinite(mid)) mid = 0.5 * a + 0.5 * b;
  // Rounding can land on b; a must still go left.
  if (mid >= b) mid = a;
  return mid;
}

}  // namespace

double GiniImpurity(const ClassCounts2& counts) {
  const uint64_t total = counts[0] + counts[1];
  if (total == 0) throw DataError("gini impurity of an empty node");
  const double p0 = static_cast<double>(counts[0]) / total;
  const double p1 = static_cast<double>(counts[1]) / total;
  return 1.0 - p0 * p0 - p1 * p1;
}

uint32_t DefaultDepth(uint64_t n) {
  if (n == 0) throw DataError("default depth needs at least one observation");
  uint32_t d = 0;
  while (d < 64 && (uint64_t{1} << d) < n) ++d;
  return d;
}

uint64_t LeafBound(uint64_t n) { return 2 * n; }

std::optional<SplitCandidate> BestSplit(
    const Dataset& data, std::span<const size_t> rows,
    std::span<const size_t> candidate_features, size_t min_samples_leaf) {
  const size_t n = rows.size();
  if (n < 2) return std::nullopt;
  min_samples_leaf = std::max<size_t>(min_samples_leaf, 1);
  if (n < 2 * min_samples_leaf) return std::nullopt;

  ClassCounts2 parent{0, 0};
  for (size_t r : rows) ++parent[data.labels()[r]];
  if (parent[0] == 0 || parent[1] == 0) return std::nullopt;

  std::vector<size_t> features(candidate_features.begin(),
                               candidate_features.end());
  std::sort(features.begin(), features.end());
  features.erase(std::unique(features.begin(), features.end()),
                 features.end());

  Score best{SumSquares(parent), static_cast<__int128>(n)};
  std::optional<SplitCandidate> result;

  std::vector<std::pair<double, Label>> column(n);
  for (size_t f : features) {
    if (f >= data.n_features()) {
      throw DataError("candidate feature " + std::to_string(f) +
                      " out of range");
    }
    for (size_t i = 0; i < n; ++i) {
      column[i] = {data.at(rows[i], f), data.labels()[rows[i]]};
    }
    std::sort(column.begin(), column.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    ClassCounts2 left{0, 0};
    for (size_t i = 0; i + 1 < n; ++i) {
      ++left[column[i].second];
      if (column[i].first == column[i + 1].first) continue;
      const uint64_t n_left = i + 1;
      const uint64_t n_right = n - n_left;
      if (n_left < min_samples_leaf || n_right < min_samples_leaf) continue;
      const ClassCounts2 right{parent[0] - left[0], parent[1] - left[1]};
      const Score score{
          SumSquares(left) * n_right + SumSquares(right) * n_left,
          static_cast<__int128>(n_left) * n_right};
      if (!Greater(score, best)) continue;
      best = score;
      result = SplitCandidate{f, Midpoint(column[i].first, column[i + 1].first),
                              0.0};
    }
  }
  if (result) {
    const double children = static_cast<double>(best.num) /
                            static_cast<double>(best.den);
    const double before = static_cast<double>(SumSquares(parent)) / n;
    result->impurity_decrease = (children - before) / n;
  }
  return result;
}

DecisionTree::DecisionTree(std::vector<TreeNode> nodes)
    : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw InvariantError("tree has no nodes");
  std::vector<int> parents(nodes_.size(), 0);
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode& node = nodes_[i];
    if (node.is_leaf) {
      if (node.predicted != MajorityLabel(node.class_counts)) {
        throw InvariantError("leaf " + std::to_string(i) +
                             " does not predict its majority class");
      }
      continue;
    }
    for (uint32_t child : {node.left, node.right}) {
      if (child <= i || child >= nodes_.size()) {
        throw InvariantError("node " + std::to_string(i) +
                             " has an invalid child link");
      }
      ++parents[child];
    }
  }
  for (size_t i = 1; i < nodes_.size(); ++i) {
    if (parents[i] != 1) {
      throw InvariantError("node " + std::to_string(i) +
                           " is not reachable exactly once");
    }
  }
  // Children follow their parent, so a reverse sweep sees them first.
  for (size_t i = nodes_.size(); i-- > 0;) {
    TreeNode& node = nodes_[i];
    if (node.is_leaf) continue;
    const auto& l = nodes_[node.left].class_counts;
    const auto& r = nodes_[node.right].class_counts;
    node.class_counts = {l[0] + r[0], l[1] + r[1]};
    node.predicted = MajorityLabel(node.class_counts);
  }
}

const TreeNode& DecisionTree::Leaf(std::span<const double> row) const {
  const TreeNode* node = &nodes_.at(0);
  while (!node->is_leaf) {
    if (node->feature >= row.size()) {
      throw InvariantError("split feature " + std::to_string(node->feature) +
                           " out of bounds for a row of width " +
                           std::to_string(row.size()));
    }
    node = &nodes_[row[node->feature] <= node->threshold ? node->left
                                                         : node->right];
  }
  return *node;
}

Label DecisionTree::Predict(std::span<const double> row) const {
  return Leaf(row).predicted;
}

size_t DecisionTree::leaf_count() const {
  return static_cast<size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf; }));
}

uint32_t DecisionTree::depth() const {
  std::vector<uint32_t> height(nodes_.size(), 0);
  for (size_t i = nodes_.size(); i-- > 0;) {
    const TreeNode& node = nodes_[i];
    if (!node.is_leaf) {
      height[i] = 1 + std::max(height[node.left], height[node.right]);
    }
  }
  return height.empty() ? 0 : height[0];
}

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, const TreeConfig& cfg, RandomStream& rng)
      : data_(data), cfg_(cfg), rng_(rng), all_features_(data.n_features()) {
    std::iota(all_features_.begin(), all_features_.end(), size_t{0});
  }

  DecisionTree Build(std::vector<size_t> rows) {
    Grow(std::move(rows), 0);
    DecisionTree tree;
    tree.nodes_ = std::move(nodes_);
    return tree;
  }

 private:
  uint32_t Grow(std::vector<size_t> rows, uint32_t depth) {
    const auto index = static_cast<uint32_t>(nodes_.size());
    TreeNode node;
    for (size_t r : rows) ++node.class_counts[data_.labels()[r]];
    node.predicted = MajorityLabel(node.class_counts);
    nodes_.push_back(node);

    const bool depth_reached = cfg_.max_depth && depth >= *cfg_.max_depth;
    const bool pure = node.class_counts[0] == 0 || node.class_counts[1] == 0;
    if (depth_reached || pure || data_.n_features() == 0 ||
        rows.size() < 2 * cfg_.min_samples_leaf) {
      return index;
    }

    const auto split = BestSplit(data_, rows, SampleFeatures(),
                                 cfg_.min_samples_leaf);
    if (!split) return index;

    std::vector<size_t> left;
    std::vector<size_t> right;
    for (size_t r : rows) {
      (data_.at(r, split->feature) <= split->threshold ? left : right)
          .push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const uint32_t left_index = Grow(std::move(left), depth + 1);
    const uint32_t right_index = Grow(std::move(right), depth + 1);
    TreeNode& parent = nodes_[index];
    parent.is_leaf = false;
    parent.feature = static_cast<uint32_t>(split->feature);
    parent.threshold = split->threshold;
    parent.left = left_index;
    parent.right = right_index;
    return index;
  }

  // Partial Fisher-Yates draw of features_per_split distinct features.
  std::vector<size_t> SampleFeatures() {
    const size_t total = all_features_.size();
    const size_t k = std::min(cfg_.features_per_split, total);
    for (size_t i = 0; i < k; ++i) {
      const size_t j = i + rng_.UniformBelow(total - i);
      std::swap(all_features_[i], all_features_[j]);
    }
    std::vector<size_t> chosen(all_features_.begin(),
                               all_features_.begin() + k);
    std::sort(chosen.begin(), chosen.end());
    return chosen;
  }

  const Dataset& data_;
  const TreeConfig& cfg_;
  RandomStream& rng_;
  std::vector<size_t> all_features_;
  std::vector<TreeNode> nodes_;
};

DecisionTree GrowTree(const Dataset& data, std::span<const size_t> rows,
                      const TreeConfig& cfg, RandomStream& rng) {
  if (rows.empty()) throw DataError("cannot grow a tree on zero rows");
  if (cfg.min_samples_leaf == 0) {
    throw DataError("min_samples_leaf must be positive");
  }
  if (data.n_features() > 0 && (cfg.features_per_split == 0 ||
                                cfg.features_per_split > data.n_features())) {
    throw DataError("features_per_split must be in [1, " +
                    std::to_string(data.n_features()) + "]");
  }
  for (size_t r : rows) {
    if (r >= data.n_rows()) throw DataError("row ordinal out of range");
  }
  TreeBuilder builder(data, cfg, rng);
  return builder.Build(std::vector<size_t>(rows.begin(), rows.end()));
}

DecisionTree GrowTree(const Dataset& data, const TreeConfig& cfg,
                      RandomStream& rng) {
  std::vector<size_t> rows(data.n_rows());
  std::iota(rows.begin(), rows.end(), size_t{0});
  return GrowTree(data, rows, cfg, rng);
}

}  // namespace bagforest
