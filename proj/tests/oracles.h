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

// Independent reference computations used by the unit and acceptance tests.
// Each one takes the slow, direct route and shares no code with the library.

#ifndef BAGFOREST_TESTS_ORACLES_H_
#define BAGFOREST_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <vector>

namespace bagforest::oracle {

struct Split {
  size_t feature;
  double threshold;
  double decrease;
};

inline double Gini(double c0, double c1) {
  const double n = c0 + c1;
  return 1.0 - (c0 / n) * (c0 / n) - (c1 / n) * (c1 / n);
}

// Tries every midpoint between distinct values of every feature by
// partitioning the rows directly. Gains within 1e-12 count as ties, which
// resolve toward the lower feature and then the lower threshold.
inline std::optional<Split> BruteForceSplit(
    const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
    size_t min_leaf = 1) {
  const size_t n = rows.size();
  if (n < 2) return std::nullopt;
  double p0 = 0, p1 = 0;
  for (int l : labels) (l ? p1 : p0) += 1;
  const double parent = Gini(p0, p1);
  std::optional<Split> best;
  for (size_t f = 0; f < rows[0].size(); ++f) {
    std::set<double> distinct;
    for (const auto& r : rows) distinct.insert(r[f]);
    std::vector<double> v(distinct.begin(), distinct.end());
    for (size_t k = 0; k + 1 < v.size(); ++k) {
      const double t = (v[k] + v[k + 1]) / 2.0;
      double l0 = 0, l1 = 0, r0 = 0, r1 = 0;
      for (size_t i = 0; i < n; ++i) {
        if (rows[i][f] <= t) {
          (labels[i] ? l1 : l0) += 1;
        } else {
          (labels[i] ? r1 : r0) += 1;
        }
      }
      const double nl = l0 + l1, nr = r0 + r1;
      if (nl < min_leaf || nr < min_leaf) continue;
      const double decrease =
          parent - (nl / n) * Gini(l0, l1) - (nr / n) * Gini(r0, r1);
      if (decrease <= 1e-12) continue;
      if (!best || decrease > best->decrease + 1e-12) {
        best = Split{f, t, decrease};
      }
    }
  }
  return best;
}

// P(score+ > score-) + 0.5 P(tie) over every positive/negative pair.
inline double PairwiseAuc(const std::vector<double>& scores,
                          const std::vector<int>& labels) {
  double wins = 0, pairs = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!labels[i]) continue;
    for (size_t j = 0; j < scores.size(); ++j) {
      if (labels[j]) continue;
      pairs += 1;
      if (scores[i] > scores[j]) {
        wins += 1;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  return wins / pairs;
}

inline double NormalPdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return std::exp(-z * z / 2.0) / (sd * std::sqrt(2.0 * M_PI));
}

inline double DirectKde1d(const std::vector<double>& pts, double h, double x) {
  double s = 0;
  for (double p : pts) s += NormalPdf(x, p, h);
  return s / pts.size();
}

inline double DirectKde2d(const std::vector<double>& xs,
                          const std::vector<double>& ys, double hx, double hy,
                          double x, double y) {
  double s = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    s += NormalPdf(x, xs[i], hx) * NormalPdf(y, ys[i], hy);
  }
  return s / xs.size();
}

// Kappa from the 2x2 agreement table, marginals counted by hand.
inline double HandKappa(const std::vector<int>& pred,
                        const std::vector<int>& actual) {
  const double n = pred.size();
  double agree = 0, pred1 = 0, act1 = 0;
  for (size_t i = 0; i < pred.size(); ++i) {
    agree += pred[i] == actual[i];
    pred1 += pred[i];
    act1 += actual[i];
  }
  const double po = agree / n;
  const double pe = (pred1 / n) * (act1 / n) + ((n - pred1) / n) * ((n - act1) / n);
  if (pe == 1.0) return po == 1.0 ? 1.0 : 0.0;
  return (po - pe) / (1 - pe);
}

}  // namespace bagforest::oracle

#endif  // BAGFOREST_TESTS_ORACLES_H_
