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

#ifndef BAGFOREST_DATA_H_
#define BAGFOREST_DATA_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bagforest {

using Label = uint8_t;

// Feature matrix (row-major) with named columns and binary labels. Loaded
// datasets never contain missing values.
class Dataset {
 public:
  Dataset() = default;
  // Throws DataError if shapes disagree, names repeat, or a label is not 0/1.
  Dataset(std::vector<std::string> feature_names, std::vector<double> values,
          std::vector<Label> labels);

  size_t n_rows() const { return labels_.size(); }
  size_t n_features() const { return feature_names_.size(); }

  std::span<const double> row(size_t i) const {
    return {values_.data() + i * n_features(), n_features()};
  }
  double at(size_t row, size_t feature) const {
    return values_[row * n_features() + feature];
  }
  const std::vector<std::string>& feature_names() const {
    return feature_names_;
  }
  const std::vector<double>& values() const { return values_; }
  const std::vector<Label>& labels() const { return labels_; }

  // Ordinal of a feature column; throws DataError naming the column if absent.
  size_t feature_index(const std::string& name) const;
  std::vector<double> column(size_t feature) const;

  // Rows in the given order (duplicates allowed).
  Dataset Subset(std::span<const size_t> rows) const;

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<std::string> feature_names_;
  std::vector<double> values_;
  std::vector<Label> labels_;
};

enum class ImputeStrategy { kMedian, kMean, kDropRow };

ImputeStrategy ParseImputeStrategy(const std::string& name);
std::string ToString(ImputeStrategy strategy);

struct ImputePolicy {
  ImputeStrategy strategy = ImputeStrategy::kMedian;
  // Filled in by LoadCsv: columns that contained at least one missing cell.
  std::vector<std::string> applied_columns;
  size_t dropped_rows = 0;
};

struct LoadOptions {
  std::string target_column;
  ImputePolicy impute;
  // Feature columns to discard before imputation (identifiers, etc.).
  std::vector<std::string> drop_columns;
};

// Reads a comma-separated file with a header row. Blank or non-numeric cells
// are missing and resolved per `options.impute`; the policy's
// applied_columns/dropped_rows are reported back through `options`.
// Labels accept 0/1 and N/Y (case-insensitive).
Dataset LoadCsv(const std::filesystem::path& path, LoadOptions& options);
Dataset ParseCsv(const std::string& text, LoadOptions& options);

// Echo format: feature columns then the target column last.
std::string ToCsv(const Dataset& d, const std::string& target_column);
void SaveCsv(const Dataset& d, const std::string& target_column,
             const std::filesystem::path& path);

struct SplitResult {
  Dataset train;
  Dataset test;
  std::vector<size_t> train_indices;  // ascending
  std::vector<size_t> test_indices;   // ascending
  uint64_t seed = 0;
  double test_fraction = 0.0;
};

// Deterministic stratified split. The test set holds round(fraction * n)
// rows, distributed across classes by largest remainder (ties toward
// label 0).
SplitResult StratifiedSplit(const Dataset& d, double test_fraction,
                            uint64_t seed);

// (count of label 0, count of label 1).
std::pair<size_t, size_t> ClassCounts(std::span<const Label> labels);
inline std::pair<size_t, size_t> ClassCounts(const Dataset& d) {
  return ClassCounts(d.labels());
}

// Shortest decimal representation that parses back to the same double.
std::string FormatDouble(double value);

}  // namespace bagforest

#endif  // BAGFOREST_DATA_H_
