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

#include "bagforest/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "bagforest/errors.h"

namespace bagforest {
namespace {

using Json = nlohmann::ordered_json;

void CheckLengths(size_t predicted, size_t actual) {
  if (predicted != actual) {
    throw DataError("predicted has " + std::to_string(predicted) +
                    " labels, actual has " + std::to_string(actual));
  }
  if (actual == 0) throw DataError("cannot evaluate zero predictions");
}

double Ratio(uint64_t num, uint64_t den, bool& degenerate) {
  degenerate = den == 0;
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

Json AveragedJson(const AveragedMetrics& m) {
  return Json{{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

}  // namespace

ConfusionMatrix Confusion(std::span<const Label> predicted,
                          std::span<const Label> actual) {
  CheckLengths(predicted.size(), actual.size());
  ConfusionMatrix cm;
  for (size_t i = 0; i < actual.size(); ++i) {
    const bool p = predicted[i] != 0;
    const bool a = actual[i] != 0;
    if (p && a) {
      ++cm.tp;
    } else if (p) {
      ++cm.fp;
    } else if (a) {
      ++cm.fn;
    } else {
      ++cm.tn;
    }
  }
  return cm;
}

PrecisionRecall PrecisionRecallFor(const ConfusionMatrix& cm, Label label) {
  const uint64_t hit = label ? cm.tp : cm.tn;
  const uint64_t false_alarm = label ? cm.fp : cm.fn;
  const uint64_t miss = label ? cm.fn : cm.fp;
  PrecisionRecall pr;
  pr.precision = Ratio(hit, hit + false_alarm, pr.precision_degenerate);
  pr.recall = Ratio(hit, hit + miss, pr.recall_degenerate);
  return pr;
}

double F1(double precision, double recall) {
  const double sum = precision + recall;
  return sum == 0.0 ? 0.0 : 2.0 * precision * recall / sum;
}

Agreement CohenAgreement(const ConfusionMatrix& cm) {
  using Wide = __int128;
  const Wide n = cm.total();
  if (n == 0) throw DataError("cannot compute kappa of zero predictions");
  const Wide agree = cm.tp + cm.tn;
  // Sum over classes of predicted marginal x actual marginal.
  const Wide chance = Wide(cm.tp + cm.fp) * (cm.tp + cm.fn) +
                      Wide(cm.tn + cm.fn) * (cm.tn + cm.fp);
  Agreement a;
  a.observed = static_cast<double>(agree) / static_cast<double>(n);
  a.expected = static_cast<double>(chance) / static_cast<double>(n * n);
  if (chance == n * n) {
    a.degenerate = true;
    a.kappa = agree == n ? 1.0 : 0.0;
    return a;
  }
  a.kappa = static_cast<double>(n * agree - chance) /
            static_cast<double>(n * n - chance);
  return a;
}

double CohenKappa(std::span<const Label> predicted,
                  std::span<const Label> actual) {
  return CohenAgreement(Confusion(predicted, actual)).kappa;
}

bool ClassificationReport::degenerate() const {
  return kappa_degenerate ||
         std::any_of(per_label.begin(), per_label.end(), [](const auto& l) {
           return l.precision_degenerate || l.recall_degenerate;
         });
}

ClassificationReport Report(std::span<const Label> predicted,
                            std::span<const Label> actual) {
  ClassificationReport r;
  r.confusion = Confusion(predicted, actual);
  const ConfusionMatrix& cm = r.confusion;
  const double total = static_cast<double>(cm.total());

  for (Label label : {Label{0}, Label{1}}) {
    const PrecisionRecall pr = PrecisionRecallFor(cm, label);
    LabelMetrics& m = r.per_label[label];
    m.precision = pr.precision;
    m.recall = pr.recall;
    m.precision_degenerate = pr.precision_degenerate;
    m.recall_degenerate = pr.recall_degenerate;
    m.f1 = F1(pr.precision, pr.recall);
    m.support = label ? cm.tp + cm.fn : cm.tn + cm.fp;
  }
  const LabelMetrics& l0 = r.per_label[0];
  const LabelMetrics& l1 = r.per_label[1];
  r.macro = {(l0.precision + l1.precision) / 2.0,
             (l0.recall + l1.recall) / 2.0, (l0.f1 + l1.f1) / 2.0};
  const double w0 = static_cast<double>(l0.support) / total;
  const double w1 = static_cast<double>(l1.support) / total;
  r.weighted = {w0 * l0.precision + w1 * l1.precision,
                w0 * l0.recall + w1 * l1.recall, w0 * l0.f1 + w1 * l1.f1};
  r.accuracy = static_cast<double>(cm.tp + cm.tn) / total;

  const Agreement agreement = CohenAgreement(cm);
  r.kappa = agreement.kappa;
  r.kappa_degenerate = agreement.degenerate;
  return r;
}

RocCurve ComputeRoc(std::span<const double> scores,
                    std::span<const Label> actual) {
  CheckLengths(scores.size(), actual.size());
  const auto [negatives, positives] = ClassCounts(actual);
  if (positives == 0 || negatives == 0) {
    throw DataError("ROC curve needs both classes in the actual labels");
  }
  for (double s : scores) {
    if (std::isnan(s)) throw DataError("ROC scores contain NaN");
  }

  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  RocCurve roc;
  roc.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  uint64_t tp = 0;
  uint64_t fp = 0;
  for (size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == threshold; ++i) {
      (actual[order[i]] ? tp : fp) += 1;
    }
    roc.points.push_back({static_cast<double>(fp) / negatives,
                          static_cast<double>(tp) / positives, threshold});
  }
  for (size_t i = 1; i < roc.points.size(); ++i) {
    const RocPoint& a = roc.points[i - 1];
    const RocPoint& b = roc.points[i];
    roc.auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  return roc;
}

std::string Percent(double fraction) {
  return std::to_string(static_cast<long long>(std::round(fraction * 100.0))) +
         "%";
}

std::string Fixed2(double value) {
  char buf[32];
  // Round half away from zero before formatting; printf rounds to even.
  const double rounded = std::round(value * 100.0) / 100.0;
  std::snprintf(buf, sizeof(buf), "%.2f", rounded == 0.0 ? 0.0 : rounded);
  return buf;
}

std::string ReportToJson(const ClassificationReport& r,
                         std::optional<double> auc) {
  Json doc;
  doc["confusion"] = {{"tp", r.confusion.tp},
                      {"fp", r.confusion.fp},
                      {"fn", r.confusion.fn},
                      {"tn", r.confusion.tn}};
  Json per_label;
  for (int label = 0; label < 2; ++label) {
    const LabelMetrics& m = r.per_label[label];
    per_label[std::to_string(label)] = {
        {"precision", m.precision},
        {"recall", m.recall},
        {"f1", m.f1},
        {"support", m.support},
        {"precision_degenerate", m.precision_degenerate},
        {"recall_degenerate", m.recall_degenerate}};
  }
  doc["per_label"] = std::move(per_label);
  doc["macro"] = AveragedJson(r.macro);
  doc["weighted"] = AveragedJson(r.weighted);
  doc["accuracy"] = r.accuracy;
  doc["kappa"] = r.kappa;
  doc["kappa_degenerate"] = r.kappa_degenerate;
  doc["roc_auc"] = auc ? Json(*auc) : Json(nullptr);

  Json display;
  display["precision_recall_averages"] = Json::array(
      {{{"variation", "Macro"},
        {"precision", Percent(r.macro.precision)},
        {"recall", Percent(r.macro.recall)}},
       {{"variation", "Weighted"},
        {"precision", Percent(r.weighted.precision)},
        {"recall", Percent(r.weighted.recall)}}});
  display["precision_recall_per_label"] = Json::array(
      {{{"variation", "Label 0"},
        {"precision", Percent(r.per_label[0].precision)},
        {"recall", Percent(r.per_label[0].recall)}},
       {{"variation", "Label 1"},
        {"precision", Percent(r.per_label[1].precision)},
        {"recall", Percent(r.per_label[1].recall)}}});
  display["f1_averages"] = {{"macro", Percent(r.macro.f1)},
                            {"weighted", Percent(r.weighted.f1)}};
  display["f1_per_label"] = {{"label_0", Percent(r.per_label[0].f1)},
                             {"label_1", Percent(r.per_label[1].f1)}};
  display["accuracy"] = Percent(r.accuracy);
  display["kappa"] = Fixed2(r.kappa);
  display["roc_auc"] = auc ? Json(Fixed2(*auc)) : Json(nullptr);
  doc["display"] = std::move(display);
  return doc.dump(2) + "\n";
}

std::string ReportToText(const ClassificationReport& r,
                         std::optional<double> auc) {
  std::string out;
  auto row = [&out](const std::string& a, const std::string& b,
                    const std::string& c) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "  %-10s %-10s %-10s\n", a.c_str(),
                  b.c_str(), c.c_str());
    out += buf;
  };
  out += "Precision and recall\n";
  row("", "Precision", "Recall");
  row("Macro", Percent(r.macro.precision), Percent(r.macro.recall));
  row("Weighted", Percent(r.weighted.precision), Percent(r.weighted.recall));
  row("Label 0", Percent(r.per_label[0].precision),
      Percent(r.per_label[0].recall));
  row("Label 1", Percent(r.per_label[1].precision),
      Percent(r.per_label[1].recall));
  out += "F1\n";
  row("", "Macro", "Weighted");
  row("F1", Percent(r.macro.f1), Percent(r.weighted.f1));
  row("", "Label 0", "Label 1");
  row("F1", Percent(r.per_label[0].f1), Percent(r.per_label[1].f1));
  out += "Accuracy " + Percent(r.accuracy) + "  kappa " + Fixed2(r.kappa);
  if (auc) out += "  AUC " + Fixed2(*auc);
  out += "\n";
  if (r.degenerate()) out += "warning: degenerate metric (zero denominator)\n";
  return out;
}

std::string RocToCsv(const RocCurve& roc) {
  std::string out = "# auc=" + FormatDouble(roc.auc) + "\n";
  out += "threshold,fpr,tpr\n";
  for (const auto& p : roc.points) {
    out += FormatDouble(p.threshold) + "," + FormatDouble(p.fpr) + "," +
           FormatDouble(p.tpr) + "\n";
  }
  return out;
}

}  // namespace bagforest
