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

#include "bagforest/data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include "bagforest/errors.h"
#include "bagforest/random.h"

namespace bagforest {
namespace {

std::string Trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

// RFC 4180 style records: quoted fields may contain commas, quotes ("") and
// newlines. Blank lines are skipped.
std::vector<std::vector<std::string>> ParseRecords(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool record_has_content = false;
  auto end_record = [&] {
    fields.push_back(std::move(field));
    field.clear();
    if (record_has_content) records.push_back(std::move(fields));
    fields.clear();
    record_has_content = false;
  };
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        record_has_content = true;
        break;
      case ',':
        fields.push_back(std::move(field));
        field.clear();
        record_has_content = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        break;
      default:
        field.push_back(c);
        if (c != ' ' && c != '\t') record_has_content = true;
    }
  }
  if (in_quotes) throw DataError("unterminated quoted field in CSV");
  end_record();
  return records;
}

std::optional<double> ParseNumber(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (*first == '+') ++first;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

Label ParseLabel(const std::string& cell, size_t line) {
  const std::string v = Lower(cell);
  if (v == "0" || v == "n") return 0;
  if (v == "1" || v == "y") return 1;
  throw DataError("line " + std::to_string(line) + ": label '" + cell +
                  "' is not one of 0, 1, N, Y");
}

double Median(std::vector<double> values) {
  const size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower =
      *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

std::string QuoteIfNeeded(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

Dataset::Dataset(std::vector<std::string> feature_names,
                 std::vector<double> values, std::vector<Label> labels)
    : feature_names_(std::move(feature_names)),
      values_(std::move(values)),
      labels_(std::move(labels)) {
  if (values_.size() != labels_.size() * feature_names_.size()) {
    throw DataError("feature matrix has " + std::to_string(values_.size()) +
                    " cells, expected " +
                    std::to_string(labels_.size() * feature_names_.size()));
  }
  std::set<std::string> seen;
  for (const auto& name : feature_names_) {
    if (!seen.insert(name).second) {
      throw DataError("duplicate feature column '" + name + "'");
    }
  }
  for (Label l : labels_) {
    if (l > 1) throw DataError("labels must be 0 or 1");
  }
}

size_t Dataset::feature_index(const std::string& name) const {
  const auto it =
      std::find(feature_names_.begin(), feature_names_.end(), name);
  if (it == feature_names_.end()) {
    throw DataError("unknown column '" + name + "'");
  }
  return static_cast<size_t>(it - feature_names_.begin());
}

std::vector<double> Dataset::column(size_t feature) const {
  std::vector<double> out(n_rows());
  for (size_t r = 0; r < n_rows(); ++r) out[r] = at(r, feature);
  return out;
}

Dataset Dataset::Subset(std::span<const size_t> rows) const {
  std::vector<double> values;
  values.reserve(rows.size() * n_features());
  std::vector<Label> labels;
  labels.reserve(rows.size());
  for (size_t r : rows) {
    const auto src = row(r);
    values.insert(values.end(), src.begin(), src.end());
    labels.push_back(labels_[r]);
  }
  Dataset out;
  out.feature_names_ = feature_names_;
  out.values_ = std::move(values);
  out.labels_ = std::move(labels);
  return out;
}

ImputeStrategy ParseImputeStrategy(const std::string& name) {
  const std::string n = Lower(name);
  if (n == "median") return ImputeStrategy::kMedian;
  if (n == "mean") return ImputeStrategy::kMean;
  if (n == "drop-row" || n == "drop") return ImputeStrategy::kDropRow;
  throw DataError("unknown impute strategy '" + name +
                  "' (expected median, mean, or drop-row)");
}

std::string ToString(ImputeStrategy strategy) {
  switch (strategy) {
    case ImputeStrategy::kMedian:
      return "median";
    case ImputeStrategy::kMean:
      return "mean";
    case ImputeStrategy::kDropRow:
      return "drop-row";
  }
  return "unknown";
}

Dataset ParseCsv(const std::string& text, LoadOptions& options) {
  const auto records = ParseRecords(text);
  if (records.empty()) throw DataError("CSV has no header row");

  std::vector<std::string> header;
  for (const auto& h : records[0]) header.push_back(Trim(h));

  const std::string target = Trim(options.target_column);
  const auto target_hits = std::count(header.begin(), header.end(), target);
  if (target_hits == 0) {
    throw DataError("missing target column '" + target + "'");
  }
  if (target_hits > 1) {
    throw DataError("duplicate target column '" + target + "'");
  }
  const size_t target_pos = static_cast<size_t>(
      std::find(header.begin(), header.end(), target) - header.begin());

  std::set<std::string> dropped;
  for (const auto& name : options.drop_columns) {
    const std::string n = Trim(name);
    if (n == target) throw DataError("cannot drop the target column");
    if (std::find(header.begin(), header.end(), n) == header.end()) {
      throw DataError("unknown column '" + n + "'");
    }
    dropped.insert(n);
  }

  std::vector<size_t> feature_pos;
  std::vector<std::string> names;
  for (size_t c = 0; c < header.size(); ++c) {
    if (c == target_pos || dropped.count(header[c])) continue;
    feature_pos.push_back(c);
    names.push_back(header[c]);
  }
  const size_t n_features = names.size();

  const size_t n_records = records.size() - 1;
  if (n_records == 0) throw DataError("CSV has no data rows");

  std::vector<std::optional<double>> cells(n_records * n_features);
  std::vector<Label> labels(n_records);
  std::vector<bool> has_numeric(n_features, false);
  std::vector<std::string> first_text(n_features);
  for (size_t r = 0; r < n_records; ++r) {
    const auto& rec = records[r + 1];
    const size_t line = r + 2;
    if (rec.size() != header.size()) {
      throw DataError("line " + std::to_string(line) + ": expected " +
                      std::to_string(header.size()) + " fields, found " +
                      std::to_string(rec.size()));
    }
    labels[r] = ParseLabel(Trim(rec[target_pos]), line);
    for (size_t f = 0; f < n_features; ++f) {
      const std::string cell = Trim(rec[feature_pos[f]]);
      auto value = ParseNumber(cell);
      if (value) {
        has_numeric[f] = true;
      } else if (!cell.empty() && first_text[f].empty()) {
        first_text[f] = cell;
      }
      cells[r * n_features + f] = value;
    }
  }
  for (size_t f = 0; f < n_features; ++f) {
    if (!has_numeric[f] && !first_text[f].empty()) {
      throw DataError("column '" + names[f] + "' is non-numeric (e.g. '" +
                      first_text[f] + "'); one-hot encode it first");
    }
  }

  ImputePolicy& policy = options.impute;
  policy.applied_columns.clear();
  policy.dropped_rows = 0;
  std::vector<bool> column_missing(n_features, false);
  for (size_t r = 0; r < n_records; ++r) {
    for (size_t f = 0; f < n_features; ++f) {
      if (!cells[r * n_features + f]) column_missing[f] = true;
    }
  }
  for (size_t f = 0; f < n_features; ++f) {
    if (column_missing[f]) policy.applied_columns.push_back(names[f]);
  }

  std::vector<double> values;
  std::vector<Label> kept_labels;
  if (policy.strategy == ImputeStrategy::kDropRow) {
    values.reserve(cells.size());
    for (size_t r = 0; r < n_records; ++r) {
      const auto begin = cells.begin() + r * n_features;
      const auto end = begin + n_features;
      if (std::all_of(begin, end, [](const auto& c) { return c.has_value(); })) {
        for (auto it = begin; it != end; ++it) values.push_back(**it);
        kept_labels.push_back(labels[r]);
      } else {
        ++policy.dropped_rows;
      }
    }
    if (kept_labels.empty()) {
      throw DataError("every row has a missing cell; nothing left after drop-row");
    }
  } else {
    std::vector<double> fill(n_features, 0.0);
    for (size_t f = 0; f < n_features; ++f) {
      if (!column_missing[f]) continue;
      std::vector<double> present;
      for (size_t r = 0; r < n_records; ++r) {
        if (const auto& c = cells[r * n_features + f]) present.push_back(*c);
      }
      if (present.empty()) {
        throw DataError("column '" + names[f] + "' has no values to " +
                        ToString(policy.strategy) + "-impute from");
      }
      if (policy.strategy == ImputeStrategy::kMedian) {
        fill[f] = Median(std::move(present));
      } else {
        fill[f] = std::accumulate(present.begin(), present.end(), 0.0) /
                  static_cast<double>(present.size());
      }
    }
    values.resize(cells.size());
    for (size_t i = 0; i < cells.size(); ++i) {
      values[i] = cells[i] ? *cells[i] : fill[i % n_features];
    }
    kept_labels = std::move(labels);
  }
  return Dataset(std::move(names), std::move(values), std::move(kept_labels));
}

Dataset LoadCsv(const std::filesystem::path& path, LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseCsv(buffer.str(), options);
}

std::string FormatDouble(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw InvariantError("failed to format double");
  return std::string(buf, ptr);
}

std::string ToCsv(const Dataset& d, const std::string& target_column) {
  std::string out;
  for (const auto& name : d.feature_names()) {
    out += QuoteIfNeeded(name);
    out += ',';
  }
  out += QuoteIfNeeded(target_column);
  out += '\n';
  for (size_t r = 0; r < d.n_rows(); ++r) {
    for (double v : d.row(r)) {
      out += FormatDouble(v);
      out += ',';
    }
    out += d.labels()[r] ? '1' : '0';
    out += '\n';
  }
  return out;
}

void SaveCsv(const Dataset& d, const std::string& target_column,
             const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << ToCsv(d, target_column);
}

std::pair<size_t, size_t> ClassCounts(std::span<const Label> labels) {
  const size_t ones = static_cast<size_t>(
      std::count(labels.begin(), labels.end(), Label{1}));
  return {labels.size() - ones, ones};
}

SplitResult StratifiedSplit(const Dataset& d, double test_fraction,
                            uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw DataError("test_fraction must be in (0, 1)");
  }
  std::vector<size_t> by_class[2];
  for (size_t r = 0; r < d.n_rows(); ++r) {
    by_class[d.labels()[r]].push_back(r);
  }
  if (by_class[0].empty() || by_class[1].empty()) {
    throw DataError("stratified split needs at least one row of each class");
  }

  const size_t n = d.n_rows();
  const size_t n_test = static_cast<size_t>(std::clamp<long long>(
      std::llround(test_fraction * static_cast<double>(n)), 1,
      static_cast<long long>(n) - 1));

  // Largest-remainder apportionment of n_test across the two classes.
  size_t per_class[2];
  size_t remainder[2];
  for (int c = 0; c < 2; ++c) {
    per_class[c] = n_test * by_class[c].size() / n;
    remainder[c] = n_test * by_class[c].size() % n;
  }
  if (per_class[0] + per_class[1] < n_test) {
    per_class[remainder[1] > remainder[0] ? 1 : 0] += 1;
  }

  SplitResult result;
  result.seed = seed;
  result.test_fraction = test_fraction;
  const RandomStream root(seed);
  for (int c = 0; c < 2; ++c) {
    auto& idx = by_class[c];
    RandomStream stream = root.Split(static_cast<uint64_t>(c));
    stream.Shuffle(std::span<size_t>(idx));
    result.test_indices.insert(result.test_indices.end(), idx.begin(),
                               idx.begin() + per_class[c]);
    result.train_indices.insert(result.train_indices.end(),
                                idx.begin() + per_class[c], idx.end());
  }
  std::sort(result.test_indices.begin(), result.test_indices.end());
  std::sort(result.train_indices.begin(), result.train_indices.end());
  result.train = d.Subset(result.train_indices);
  result.test = d.Subset(result.test_indices);
  return result;
}

}  // namespace bagforest
