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

#include <cmath>

#include <json.hpp>

#include "bagforest/errors.h"
#include "bagforest/random.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace bagforest {
namespace {

using Labels = std::vector<Label>;

TEST(Confusion, Examples) {
  EXPECT_EQ(Confusion(Labels{1, 0}, Labels{1, 0}),
            (ConfusionMatrix{1, 0, 0, 1}));
  EXPECT_EQ(Confusion(Labels{1, 1}, Labels{0, 0}),
            (ConfusionMatrix{0, 2, 0, 0}));
  EXPECT_EQ(Confusion(Labels{1, 0, 1, 0}, Labels{1, 1, 0, 0}),
            (ConfusionMatrix{1, 1, 1, 1}));
  EXPECT_THROW(Confusion(Labels{1}, Labels{1, 0}), DataError);
  EXPECT_THROW(Confusion(Labels{}, Labels{}), DataError);
}

TEST(PrecisionRecall, Examples) {
  const ConfusionMatrix cm{8, 2, 1, 9};
  const auto pr = PrecisionRecallFor(cm, 1);
  EXPECT_DOUBLE_EQ(pr.precision, 0.8);
  EXPECT_DOUBLE_EQ(pr.recall, 8.0 / 9.0);
  const auto neg = PrecisionRecallFor(cm, 0);
  EXPECT_DOUBLE_EQ(neg.precision, 0.9);
  EXPECT_DOUBLE_EQ(neg.recall, 9.0 / 11.0);

  const auto none = PrecisionRecallFor({0, 0, 3, 5}, 1);
  EXPECT_EQ(none.precision, 0.0);
  EXPECT_TRUE(none.precision_degenerate);
  EXPECT_FALSE(none.recall_degenerate);

  const auto perfect = PrecisionRecallFor({4, 0, 0, 6}, 1);
  EXPECT_EQ(perfect.precision, 1.0);
  EXPECT_EQ(perfect.recall, 1.0);
}

TEST(F1, Examples) {
  EXPECT_NEAR(F1(0.93, 0.96), 0.9447619, 1e-7);
  EXPECT_EQ(Percent(F1(0.93, 0.96)), "94%");
  EXPECT_DOUBLE_EQ(F1(0.7, 0.7), 0.7);
  EXPECT_EQ(F1(0.0, 0.9), 0.0);
  EXPECT_EQ(F1(0.0, 0.0), 0.0);
}

// Per-label precision/recall of the PCOS reference results reproduce the
// reference F1 table through the harmonic mean.
TEST(F1, ReferenceTablesAreMutuallyConsistent) {
  const double f1_label0 = F1(0.93, 0.96);
  const double f1_label1 = F1(0.90, 0.81);
  EXPECT_EQ(Percent(f1_label0), "94%");
  EXPECT_EQ(Percent(f1_label1), "85%");
  const double macro = (f1_label0 + f1_label1) / 2.0;
  EXPECT_NEAR(macro, 0.8987, 1e-4);
  EXPECT_EQ(Percent(macro), "90%");
}

TEST(Report, TwentyRowFixtureMatchesHandSheet) {
  // Expected values prepared independently (tn=10 fp=3 fn=2 tp=5).
  const Labels actual{1, 0, 0, 1, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 1, 1, 0, 0, 0};
  const Labels predicted{1, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 0, 1, 0, 0, 1};
  const ClassificationReport r = Report(predicted, actual);
  EXPECT_EQ(r.confusion, (ConfusionMatrix{5, 3, 2, 10}));
  EXPECT_DOUBLE_EQ(r.per_label[0].precision, 10.0 / 12.0);
  EXPECT_DOUBLE_EQ(r.per_label[0].recall, 10.0 / 13.0);
  EXPECT_DOUBLE_EQ(r.per_label[0].f1, 0.8);
  EXPECT_EQ(r.per_label[0].support, 13u);
  EXPECT_DOUBLE_EQ(r.per_label[1].precision, 0.625);
  EXPECT_DOUBLE_EQ(r.per_label[1].recall, 5.0 / 7.0);
  EXPECT_DOUBLE_EQ(r.per_label[1].f1, 2.0 / 3.0);
  EXPECT_EQ(r.per_label[1].support, 7u);
  EXPECT_NEAR(r.macro.precision, 0.7291666666666667, 1e-15);
  EXPECT_NEAR(r.macro.recall, 0.7417582417582418, 1e-15);
  EXPECT_NEAR(r.macro.f1, 0.7333333333333334, 1e-15);
  EXPECT_NEAR(r.weighted.precision, 0.7604166666666667, 1e-15);
  EXPECT_NEAR(r.weighted.recall, 0.75, 1e-15);
  EXPECT_NEAR(r.weighted.f1, 0.7533333333333333, 1e-15);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.75);
  EXPECT_NEAR(r.kappa, 0.46808510638297873, 1e-15);
  EXPECT_FALSE(r.degenerate());
}

TEST(Report, EqualSupportsMakeWeightedEqualMacro) {
  const Labels actual{0, 0, 0, 1, 1, 1};
  const Labels predicted{0, 1, 0, 1, 0, 1};
  const auto r = Report(predicted, actual);
  EXPECT_DOUBLE_EQ(r.weighted.precision, r.macro.precision);
  EXPECT_DOUBLE_EQ(r.weighted.recall, r.macro.recall);
  EXPECT_DOUBLE_EQ(r.weighted.f1, r.macro.f1);
}

TEST(Report, DegenerateWhenAClassIsNeverPredicted) {
  const auto r = Report(Labels{0, 0, 0}, Labels{0, 1, 0});
  EXPECT_TRUE(r.per_label[1].precision_degenerate);
  EXPECT_EQ(r.per_label[1].precision, 0.0);
  EXPECT_TRUE(r.degenerate());
}

TEST(CohenKappa, Examples) {
  EXPECT_EQ(CohenKappa(Labels{1, 0, 1, 0}, Labels{1, 0, 1, 0}), 1.0);
  // Chance-level agreement: P_o = P_e = 0.5.
  EXPECT_EQ(CohenKappa(Labels{1, 1, 0, 0}, Labels{1, 0, 1, 0}), 0.0);

  const Labels pred{1, 0, 1, 0, 1};
  const Labels actual{1, 0, 0, 0, 1};
  const Agreement a = CohenAgreement(Confusion(pred, actual));
  EXPECT_DOUBLE_EQ(a.observed, 0.8);
  // Marginals: predicted (2 neg, 3 pos), actual (3 neg, 2 pos).
  EXPECT_DOUBLE_EQ(a.expected, 0.48);
  EXPECT_NEAR(a.kappa, 0.32 / 0.52, 1e-15);
  EXPECT_NEAR(a.kappa, oracle::HandKappa({1, 0, 1, 0, 1}, {1, 0, 0, 0, 1}),
              1e-12);
}

TEST(CohenKappa, DegenerateMarginals) {
  const Agreement same = CohenAgreement(Confusion(Labels{1, 1}, Labels{1, 1}));
  EXPECT_TRUE(same.degenerate);
  EXPECT_EQ(same.kappa, 1.0);
}

TEST(CohenKappa, MatchesHandOracleOnRandomVectors) {
  RandomStream rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 1 + rng.UniformBelow(60);
    Labels p(n), a(n);
    std::vector<int> pi(n), ai(n);
    for (size_t i = 0; i < n; ++i) {
      pi[i] = p[i] = static_cast<Label>(rng.UniformBelow(2));
      ai[i] = a[i] = static_cast<Label>(rng.UniformBelow(2));
    }
    const double k = CohenKappa(p, a);
    ASSERT_NEAR(k, oracle::HandKappa(pi, ai), 1e-12);
    ASSERT_GE(k, -1.0);
    ASSERT_LE(k, 1.0);
  }
}

TEST(Roc, Examples) {
  const auto perfect = ComputeRoc(std::vector<double>{0.9, 0.4, 0.6, 0.1},
                                  Labels{1, 0, 1, 0});
  EXPECT_EQ(perfect.auc, 1.0);
  const auto crossed = ComputeRoc(std::vector<double>{0.9, 0.6, 0.4, 0.1},
                                  Labels{1, 0, 1, 0});
  EXPECT_DOUBLE_EQ(crossed.auc, 0.75);
  const auto flat = ComputeRoc(std::vector<double>(6, 0.3),
                               Labels{1, 0, 1, 0, 0, 1});
  EXPECT_EQ(flat.auc, 0.5);
  ASSERT_EQ(flat.points.size(), 2u);

  EXPECT_THROW(ComputeRoc(std::vector<double>{0.1, 0.2}, Labels{1, 1}),
               DataError);
  EXPECT_THROW(ComputeRoc(std::vector<double>{0.1}, Labels{1, 0}), DataError);
}

TEST(Roc, CurveShapeAndConcordance) {
  RandomStream rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 2 + rng.UniformBelow(199);
    std::vector<double> scores(n);
    Labels labels(n);
    std::vector<int> li(n);
    for (size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng.UniformBelow(20)) / 20.0;
      li[i] = labels[i] = static_cast<Label>(rng.UniformBelow(2));
    }
    labels[0] = li[0] = 0;
    labels[1] = li[1] = 1;
    const RocCurve roc = ComputeRoc(scores, labels);
    ASSERT_EQ(roc.points.front().fpr, 0.0);
    ASSERT_EQ(roc.points.front().tpr, 0.0);
    ASSERT_TRUE(std::isinf(roc.points.front().threshold));
    ASSERT_EQ(roc.points.back().fpr, 1.0);
    ASSERT_EQ(roc.points.back().tpr, 1.0);
    for (size_t i = 1; i < roc.points.size(); ++i) {
      ASSERT_GE(roc.points[i].fpr, roc.points[i - 1].fpr);
      ASSERT_GE(roc.points[i].tpr, roc.points[i - 1].tpr);
      ASSERT_LT(roc.points[i].threshold, roc.points[i - 1].threshold);
    }
    ASSERT_NEAR(roc.auc, oracle::PairwiseAuc(scores, li), 1e-9);
  }
}

TEST(ReportProperties, IdentitiesOnRandomVectors) {
  RandomStream rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const size_t n = 1 + rng.UniformBelow(80);
    Labels p(n), a(n);
    for (size_t i = 0; i < n; ++i) {
      p[i] = static_cast<Label>(rng.UniformBelow(2));
      a[i] = static_cast<Label>(rng.UniformBelow(2));
    }
    const auto r = Report(p, a);
    const auto& cm = r.confusion;
    ASSERT_DOUBLE_EQ(r.accuracy,
                     static_cast<double>(cm.tp + cm.tn) / cm.total());
    ASSERT_NEAR(r.weighted.recall, r.accuracy, 1e-12);
    for (const auto& l : r.per_label) {
      ASSERT_GE(l.f1, std::min(l.precision, l.recall) - 1e-15);
      ASSERT_LE(l.f1, std::max(l.precision, l.recall) + 1e-15);
      ASSERT_NEAR(l.f1, F1(l.precision, l.recall), 0.0);
    }
    ASSERT_EQ(r.macro.f1, (r.per_label[0].f1 + r.per_label[1].f1) / 2.0);

    const bool both_marginals = cm.tp + cm.fn > 0 && cm.tn + cm.fp > 0 &&
                                cm.tp + cm.fp > 0 && cm.tn + cm.fn > 0;
    if (both_marginals) {
      ASSERT_EQ(r.kappa == 1.0, cm.fp == 0 && cm.fn == 0);
    }

    Labels ps(n), as(n);
    for (size_t i = 0; i < n; ++i) {
      ps[i] = 1 - p[i];
      as[i] = 1 - a[i];
    }
    const auto s = Report(ps, as);
    ASSERT_EQ(s.per_label[0].precision, r.per_label[1].precision);
    ASSERT_EQ(s.per_label[1].recall, r.per_label[0].recall);
    ASSERT_EQ(s.macro.precision, r.macro.precision);
    ASSERT_EQ(s.macro.recall, r.macro.recall);
    ASSERT_EQ(s.macro.f1, r.macro.f1);
    ASSERT_EQ(s.accuracy, r.accuracy);
    ASSERT_EQ(s.kappa, r.kappa);
  }
}

TEST(Presentation, PercentRoundsHalfAwayFromZero) {
  EXPECT_EQ(Percent(0.945), "95%");  // 94.5 after scaling
  EXPECT_EQ(Percent(0.9447), "94%");
  EXPECT_EQ(Percent(1.0), "100%");
  EXPECT_EQ(Fixed2(0.7802), "0.78");
  EXPECT_EQ(Fixed2(1.0), "1.00");
  EXPECT_EQ(Fixed2(0.125), "0.13");
}

TEST(Serialization, ReportJsonHasDisplayBlock) {
  const auto r = Report(Labels{1, 0, 1, 1}, Labels{1, 0, 1, 1});
  const auto doc = nlohmann::json::parse(ReportToJson(r, 1.0));
  EXPECT_EQ(doc["display"]["precision_recall_averages"][0]["precision"], "100%");
  EXPECT_EQ(doc["display"]["f1_per_label"]["label_1"], "100%");
  EXPECT_EQ(doc["display"]["kappa"], "1.00");
  EXPECT_EQ(doc["display"]["roc_auc"], "1.00");
  EXPECT_EQ(doc["confusion"]["tp"], 3);
  EXPECT_EQ(doc["kappa"], 1.0);
}

TEST(Serialization, RocCsv) {
  const auto roc = ComputeRoc(std::vector<double>{0.9, 0.6, 0.4, 0.1},
                              Labels{1, 0, 1, 0});
  const std::string csv = RocToCsv(roc);
  EXPECT_EQ(csv.rfind("# auc=0.75\nthreshold,fpr,tpr\ninf,0,0\n", 0), 0u);
  EXPECT_NE(csv.find("0.1,1,1\n"), std::string::npos);
}

}  // namespace
}  // namespace bagforest
