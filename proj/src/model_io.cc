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

#include "bagforest/model_io.h"

#include <json.hpp>

#include "bagforest/errors.h"
#include "bagforest/io.h"

namespace bagforest {
namespace {

using Json = nlohmann::ordered_json;

DepthRule ParseDepthRule(const std::string& s) {
  if (s == "log2_rows") return DepthRule::kLog2Rows;
  if (s == "fixed") return DepthRule::kFixed;
  if (s == "unbounded") return DepthRule::kUnbounded;
  throw DataError("unknown depth_rule '" + s + "'");
}

Json TreeToJson(const std::vector<TreeNode>& nodes, size_t index) {
  const TreeNode& node = nodes[index];
  Json out;
  if (node.is_leaf) {
    out["counts"] = {node.class_counts[0], node.class_counts[1]};
    out["predicted"] = node.predicted;
  } else {
    out["feature"] = node.feature;
    out["threshold"] = node.threshold;
    out["left"] = TreeToJson(nodes, node.left);
    out["right"] = TreeToJson(nodes, node.right);
  }
  return out;
}

uint32_t TreeFromJson(const Json& j, std::vector<TreeNode>& nodes) {
  const auto index = static_cast<uint32_t>(nodes.size());
  nodes.emplace_back();
  if (j.contains("counts")) {
    TreeNode& leaf = nodes[index];
    leaf.class_counts = {j.at("counts").at(0).get<uint64_t>(),
                         j.at("counts").at(1).get<uint64_t>()};
    leaf.predicted = j.at("predicted").get<Label>();
    return index;
  }
  const uint32_t left = TreeFromJson(j.at("left"), nodes);
  const uint32_t right = TreeFromJson(j.at("right"), nodes);
  TreeNode& node = nodes[index];
  node.is_leaf = false;
  node.feature = j.at("feature").get<uint32_t>();
  node.threshold = j.at("threshold").get<double>();
  node.left = left;
  node.right = right;
  return index;
}

}  // namespace

std::string ToString(DepthRule rule) {
  switch (rule) {
    case DepthRule::kLog2Rows:
      return "log2_rows";
    case DepthRule::kFixed:
      return "fixed";
    case DepthRule::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

std::string ModelToJson(const ForestModel& m) {
  Json config;
  config["n_estimators"] = m.config.n_estimators;
  config["depth_rule"] = ToString(m.config.depth_rule);
  config["max_depth"] = m.config.max_depth;
  config["features_per_split"] =
      m.config.features_per_split ? Json(*m.config.features_per_split)
                                  : Json(nullptr);
  config["min_samples_leaf"] = m.config.min_samples_leaf;
  config["seed"] = m.config.seed;

  Json resolved;
  resolved["max_depth"] = m.tree_config.max_depth
                              ? Json(*m.tree_config.max_depth)
                              : Json(nullptr);
  resolved["features_per_split"] = m.tree_config.features_per_split;
  resolved["min_samples_leaf"] = m.tree_config.min_samples_leaf;

  Json trees = Json::array();
  for (const auto& tree : m.trees) trees.push_back(TreeToJson(tree.nodes(), 0));

  Json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["config"] = std::move(config);
  doc["resolved"] = std::move(resolved);
  doc["n_features"] = m.n_features;
  doc["n_train"] = m.n_train;
  doc["feature_names"] = m.feature_names;
  doc["oob_score"] = m.oob_score ? Json(*m.oob_score) : Json(nullptr);
  doc["trees"] = std::move(trees);
  doc["bootstrap_indices"] = m.bootstrap_indices;
  return doc.dump(1) + "\n";
}

ForestModel ModelFromJson(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DataError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw DataError("unsupported model format_version " +
                      std::to_string(version));
    }
    ForestModel m;
    const Json& config = doc.at("config");
    m.config.n_estimators = config.at("n_estimators").get<size_t>();
    m.config.depth_rule =
        ParseDepthRule(config.at("depth_rule").get<std::string>());
    m.config.max_depth = config.at("max_depth").get<uint32_t>();
    if (!config.at("features_per_split").is_null()) {
      m.config.features_per_split =
          config.at("features_per_split").get<size_t>();
    }
    m.config.min_samples_leaf = config.at("min_samples_leaf").get<size_t>();
    m.config.seed = config.at("seed").get<uint64_t>();

    const Json& resolved = doc.at("resolved");
    if (!resolved.at("max_depth").is_null()) {
      m.tree_config.max_depth = resolved.at("max_depth").get<uint32_t>();
    }
    m.tree_config.features_per_split =
        resolved.at("features_per_split").get<size_t>();
    m.tree_config.min_samples_leaf =
        resolved.at("min_samples_leaf").get<size_t>();

    m.n_features = doc.at("n_features").get<size_t>();
    m.n_train = doc.at("n_train").get<size_t>();
    m.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    if (!doc.at("oob_score").is_null()) {
      m.oob_score = doc.at("oob_score").get<double>();
    }
    for (const Json& t : doc.at("trees")) {
      std::vector<TreeNode> nodes;
      TreeFromJson(t, nodes);
      m.trees.emplace_back(std::move(nodes));
    }
    m.bootstrap_indices =
        doc.at("bootstrap_indices").get<std::vector<std::vector<uint32_t>>>();

    if (m.feature_names.size() != m.n_features) {
      throw DataError("feature_names length disagrees with n_features");
    }
    if (m.trees.size() != m.config.n_estimators ||
        m.bootstrap_indices.size() != m.trees.size()) {
      throw DataError("model holds " + std::to_string(m.trees.size()) +
                      " trees, config says " +
                      std::to_string(m.config.n_estimators));
    }
    for (const auto& tree : m.trees) {
      for (const auto& node : tree.nodes()) {
        if (!node.is_leaf && node.feature >= m.n_features) {
          throw InvariantError("tree splits on feature " +
                               std::to_string(node.feature) +
                               " beyond n_features");
        }
      }
    }
    return m;
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
}

void SaveModel(const ForestModel& m, const std::filesystem::path& path) {
  WriteFileAtomic(path, ModelToJson(m));
}

ForestModel LoadModel(const std::filesystem::path& path) {
  return ModelFromJson(ReadFile(path));
}

}  // namespace bagforest
