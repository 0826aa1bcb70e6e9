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

#ifndef BAGFOREST_ANALYSIS_H_
#define BAGFOREST_ANALYSIS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bagforest/data.h"
#include "bagforest/execution.h"

namespace bagforest {

struct CorrelationMatrix {
  std::vector<std::string> columns;
  std::vector<double> values;  // row-major, columns.size()^2
  // Entries involving a constant column: value reported as 0.
  std::vector<bool> undefined;

  size_t size() const { return columns.size(); }
  double at(size_t i, size_t j) const { return values[i * size() + j]; }
  bool is_undefined(size_t i, size_t j) const {
    return undefined[i * size() + j];
  }
};

// Pairwise Pearson correlation of the named feature columns.
CorrelationMatrix Correlation(const Dataset& d,
                              std::span<const std::string> columns);
// Pearson correlation of two vectors; nullopt if either is constant.
std::optional<double> Pearson(std::span<const double> x,
                              std::span<const double> y);

// Scott's rule: sample standard deviation * n^(-1/(dims + 4)).
double ScottBandwidth(std::span<const double> values, int dims);

// Gaussian kernel density at `x`: mean of N(x; point, bandwidth^2).
double KernelDensity1d(std::span<const double> points, double bandwidth,
                       double x);
// Product-Gaussian kernel density at (x, y).
double KernelDensity2d(std::span<const double> xs, std::span<const double> ys,
                       double bandwidth_x, double bandwidth_y, double x,
                       double y);

struct KdeOptions {
  size_t grid_size = 100;
  // Overrides Scott's rule per axis when set.
  std::optional<double> bandwidth_x;
  std::optional<double> bandwidth_y;
  // Grid extends this many bandwidths beyond the data range.
  double padding_bandwidths = 4.0;
};

// Uniform evaluation grid. 1-D: density[i] at axes[0][i]. 2-D:
// density[j * nx + i] at (axes[0][i], axes[1][j]).
struct KdeGrid {
  std::optional<Label> label;  // nullopt: all rows
  size_t n_points = 0;
  std::vector<std::vector<double>> axes;
  std::vector<double> bandwidths;
  std::vector<double> density;

  double cell_volume() const;
  // Riemann sum of density * cell volume; ~1 for a well-padded grid.
  double mass() const;
};

// One grid for all values, or one per label present when `labels` is
// non-empty. Throws DataError when a group has fewer than two distinct
// values (zero bandwidth) and no bandwidth override.
std::vector<KdeGrid> Kde1d(std::span<const double> values,
                           std::span<const Label> labels,
                           const KdeOptions& options = {});
std::vector<KdeGrid> Kde2d(std::span<const double> xs,
                           std::span<const double> ys,
                           std::span<const Label> labels,
                           const KdeOptions& options = {},
                           Execution exec = Execution::kParallel);

struct QuadrantTable {
  std::string factor_a;
  std::string factor_b;
  // counts[a][b][label]
  std::array<std::array<std::array<uint64_t, 2>, 2>, 2> counts{};

  uint64_t total(int a, int b) const {
    return counts[a][b][0] + counts[a][b][1];
  }
  bool empty(int a, int b) const { return total(a, b) == 0; }
  // Share of label 1 in the quadrant; nullopt when empty.
  std::optional<double> positive_rate(int a, int b) const;
};

// Both factor columns must take only the values 0 and 1.
QuadrantTable Quadrants(const Dataset& d, const std::string& factor_a,
                        const std::string& factor_b);

struct ScatterPoint {
  double x = 0.0;
  double y = 0.0;
  Label label = 0;
};

std::vector<ScatterPoint> ScatterExport(const Dataset& d, const std::string& x,
                                        const std::string& y);

std::string CorrelationToCsv(const CorrelationMatrix& m);
std::string KdeToCsv(const KdeGrid& grid);
std::string QuadrantsToJson(const QuadrantTable& q);
std::string ScatterToCsv(const std::vector<ScatterPoint>& points,
                         const std::string& x, const std::string& y);

// Minimal raster SVG: one rect per cell. `diverging` maps [-1, 1] through
// blue-white-red; otherwise [0, max] maps white to dark blue. Output bytes
// depend only on the inputs.
std::string HeatmapSvg(std::span<const double> values, size_t rows,
                       size_t cols, const std::string& title,
                       bool diverging);

}  // namespace bagforest

#endif  // BAGFOREST_ANALYSIS_H_
