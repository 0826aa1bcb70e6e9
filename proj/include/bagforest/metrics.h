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

#ifndef BAGFOREST_METRICS_H_
#define BAGFOREST_METRICS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bagforest/data.h"

namespace bagforest {

// Positive class is label 1.
struct ConfusionMatrix {
  uint64_t tp = 0;
  uint64_t fp = 0;
  uint64_t fn = 0;
  uint64_t tn = 0;

  uint64_t total() const { return tp + fp + fn + tn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

// Throws DataError on empty input or a length mismatch.
ConfusionMatrix Confusion(std::span<const Label> predicted,
                          std::span<const Label> actual);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  // A zero denominator yields 0 and raises the matching flag.
  bool precision_degenerate = false;
  bool recall_degenerate = false;
};

// Metrics for `label` treated as the positive class; for label 0 the
// true negatives play the role of true positives.
PrecisionRecall PrecisionRecallFor(const ConfusionMatrix& cm, Label label);

// Harmonic mean 2pr/(p+r), 0 when p + r == 0.
double F1(double precision, double recall);

struct LabelMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  uint64_t support = 0;  // true instances of the label
  bool precision_degenerate = false;
  bool recall_degenerate = false;
};

struct AveragedMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ClassificationReport {
  std::array<LabelMetrics, 2> per_label;
  AveragedMetrics macro;     // unweighted mean over labels
  AveragedMetrics weighted;  // support-weighted mean over labels
  double accuracy = 0.0;
  double kappa = 0.0;
  bool kappa_degenerate = false;
  ConfusionMatrix confusion;

  bool degenerate() const;
};

ClassificationReport Report(std::span<const Label> predicted,
                            std::span<const Label> actual);

struct Agreement {
  double observed = 0.0;  // P_o
  double expected = 0.0;  // P_e, from the row and column marginals
  double kappa = 0.0;
  // P_e == 1: kappa is reported as 1 if P_o == 1, else 0.
  bool degenerate = false;
};

Agreement CohenAgreement(const ConfusionMatrix& cm);
double CohenKappa(std::span<const Label> predicted,
                  std::span<const Label> actual);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  // Scores >= threshold are called positive. The first point uses +inf.
  double threshold = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // (0,0) first, (1,1) last
  double auc = 0.0;              // trapezoidal
};

// Throws DataError unless both classes are present and lengths match.
RocCurve ComputeRoc(std::span<const double> scores,
                    std::span<const Label> actual);

// Whole-percent presentation, rounded half away from zero: 0.945 -> "95%".
std::string Percent(double fraction);
// Two-decimal presentation used for kappa and AUC: "0.78".
std::string Fixed2(double value);

// Full-precision values plus a "display" block laid out like the published
// precision/recall and F1 tables.
std::string ReportToJson(const ClassificationReport& report,
                         std::optional<double> auc = std::nullopt);
// Human-readable version of the display block.
std::string ReportToText(const ClassificationReport& report,
                         std::optional<double> auc = std::nullopt);

// "# auc=<value>" header comment, then threshold,fpr,tpr rows.
std::string RocToCsv(const RocCurve& roc);

}  // namespace bagforest

#endif  // BAGFOREST_METRICS_H_
