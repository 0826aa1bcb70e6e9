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

#include "bagforest/analysis.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <json.hpp>

#include "bagforest/errors.h"

namespace bagforest {
namespace {

double StandardNormal(double u) {
  static const double kNorm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  return kNorm * std::exp(-0.5 * u * u);
}

struct Group {
  std::optional<Label> label;
  std::vector<double> x;
  std::vector<double> y;
};

std::vector<Group> GroupByLabel(std::span<const double> xs,
                                std::span<const double> ys,
                                std::span<const Label> labels) {
  if (!labels.empty() && labels.size() != xs.size()) {
    throw DataError("label vector length does not match the values");
  }
  if (!ys.empty() && ys.size() != xs.size()) {
    throw DataError("x and y have different lengths");
  }
  std::vector<Group> groups;
  if (labels.empty()) {
    groups.push_back({std::nullopt, {xs.begin(), xs.end()},
                      {ys.begin(), ys.end()}});
    return groups;
  }
  for (Label l : {Label{0}, Label{1}}) {
    Group g{l, {}, {}};
    for (size_t i = 0; i < xs.size(); ++i) {
      if (labels[i] != l) continue;
      g.x.push_back(xs[i]);
      if (!ys.empty()) g.y.push_back(ys[i]);
    }
    if (!g.x.empty()) groups.push_back(std::move(g));
  }
  return groups;
}

double ResolveBandwidth(std::span<const double> values,
                        std::optional<double> override_bw, int dims) {
  if (override_bw) {
    if (!(*override_bw > 0.0) || !std::isfinite(*override_bw)) {
      throw DataError("KDE bandwidth must be positive");
    }
    return *override_bw;
  }
  return ScottBandwidth(values, dims);
}

std::vector<double> Axis(std::span<const double> values, double bandwidth,
                         const KdeOptions& options) {
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it - options.padding_bandwidths * bandwidth;
  const double hi = *hi_it + options.padding_bandwidths * bandwidth;
  const size_t n = options.grid_size;
  std::vector<double> axis(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (size_t i = 0; i < n; ++i) axis[i] = lo + static_cast<double>(i) * step;
  return axis;
}

// Kernel weights of every point on every axis position: out[k * m + i].
std::vector<double> KernelTable(std::span<const double> points,
                                std::span<const double> axis,
                                double bandwidth) {
  const size_t m = axis.size();
  std::vector<double> out(points.size() * m);
  for (size_t k = 0; k < points.size(); ++k) {
    for (size_t i = 0; i < m; ++i) {
      out[k * m + i] = StandardNormal((axis[i] - points[k]) / bandwidth) /
                       bandwidth;
    }
  }
  return out;
}

void CheckGridSize(const KdeOptions& options) {
  if (options.grid_size < 2) throw DataError("KDE grid needs >= 2 points");
}

std::string Hex(double r, double g, double b) {
  auto channel = [](double v) {
    return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
  };
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", channel(r), channel(g),
                channel(b));
  return buf;
}

}  // namespace

std::optional<double> Pearson(std::span<const double> x,
                              std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("correlation of unequal lengths");
  if (x.size() < 2) throw DataError("correlation needs at least two rows");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationMatrix Correlation(const Dataset& d,
                              std::span<const std::string> columns) {
  if (d.n_rows() < 2) throw DataError("correlation needs at least two rows");
  CorrelationMatrix m;
  m.columns.assign(columns.begin(), columns.end());
  const size_t k = columns.size();
  std::vector<std::vector<double>> data;
  for (const auto& name : columns) {
    data.push_back(d.column(d.feature_index(name)));
  }
  m.values.assign(k * k, 0.0);
  m.undefined.assign(k * k, false);
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = i; j < k; ++j) {
      const auto r = Pearson(data[i], data[j]);
      // Exact 1 on the diagonal rather than sxx / sqrt(sxx * sxx).
      const double v = r ? (i == j ? 1.0 : *r) : 0.0;
      m.values[i * k + j] = m.values[j * k + i] = v;
      m.undefined[i * k + j] = m.undefined[j * k + i] = !r;
    }
  }
  return m;
}

double ScottBandwidth(std::span<const double> values, int dims) {
  const size_t n = values.size();
  if (n < 2) throw DataError("bandwidth needs at least two values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) {
    throw DataError("all values identical: zero KDE bandwidth");
  }
  return sd * std::pow(static_cast<double>(n), -1.0 / (dims + 4.0));
}

double KernelDensity1d(std::span<const double> points, double bandwidth,
                       double x) {
  double sum = 0.0;
  for (double p : points) sum += StandardNormal((x - p) / bandwidth);
  return sum / (static_cast<double>(points.size()) * bandwidth);
}

double KernelDensity2d(std::span<const double> xs, std::span<const double> ys,
                       double bandwidth_x, double bandwidth_y, double x,
                       double y) {
  double sum = 0.0;
  for (size_t k = 0; k < xs.size(); ++k) {
    sum += StandardNormal((x - xs[k]) / bandwidth_x) *
           StandardNormal((y - ys[k]) / bandwidth_y);
  }
  return sum / (static_cast<double>(xs.size()) * bandwidth_x * bandwidth_y);
}

double KdeGrid::cell_volume() const {
  double volume = 1.0;
  for (const auto& axis : axes) {
    volume *= (axis.back() - axis.front()) / static_cast<double>(axis.size() - 1);
  }
  return volume;
}

double KdeGrid::mass() const {
  double sum = 0.0;
  for (double v : density) sum += v;
  return sum * cell_volume();
}

std::vector<KdeGrid> Kde1d(std::span<const double> values,
                           std::span<const Label> labels,
                           const KdeOptions& options) {
  CheckGridSize(options);
  std::vector<KdeGrid> grids;
  for (auto& group : GroupByLabel(values, {}, labels)) {
    const double h = ResolveBandwidth(group.x, options.bandwidth_x, 1);
    KdeGrid grid;
    grid.label = group.label;
    grid.n_points = group.x.size();
    grid.bandwidths = {h};
    grid.axes.push_back(Axis(group.x, h, options));
    const auto& axis = grid.axes[0];
    const auto table = KernelTable(group.x, axis, h);
    const double inv_n = 1.0 / static_cast<double>(group.x.size());
    grid.density.assign(axis.size(), 0.0);
    for (size_t k = 0; k < group.x.size(); ++k) {
      for (size_t i = 0; i < axis.size(); ++i) {
        grid.density[i] += table[k * axis.size() + i];
      }
    }
    for (double& v : grid.density) v *= inv_n;
    grids.push_back(std::move(grid));
  }
  return grids;
}

std::vector<KdeGrid> Kde2d(std::span<const double> xs,
                           std::span<const double> ys,
                           std::span<const Label> labels,
                           const KdeOptions& options, Execution exec) {
  CheckGridSize(options);
  if (xs.size() != ys.size()) throw DataError("x and y have different lengths");
  std::vector<KdeGrid> grids;
  for (auto& group : GroupByLabel(xs, ys, labels)) {
    const double hx = ResolveBandwidth(group.x, options.bandwidth_x, 2);
    const double hy = ResolveBandwidth(group.y, options.bandwidth_y, 2);
    KdeGrid grid;
    grid.label = group.label;
    grid.n_points = group.x.size();
    grid.bandwidths = {hx, hy};
    grid.axes.push_back(Axis(group.x, hx, options));
    grid.axes.push_back(Axis(group.y, hy, options));
    const size_t nx = grid.axes[0].size();
    const size_t ny = grid.axes[1].size();
    const auto kx = KernelTable(group.x, grid.axes[0], hx);
    const auto ky = KernelTable(group.y, grid.axes[1], hy);
    const size_t n = group.x.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    grid.density.assign(nx * ny, 0.0);

    // Each grid row is independent and summed in point order, so the
    // parallel and serial paths agree bit for bit.
    auto fill_row = [&](size_t j) {
      double* row = grid.density.data() + j * nx;
      for (size_t k = 0; k < n; ++k) {
        const double wy = ky[k * ny + j];
        const double* wx = kx.data() + k * nx;
        for (size_t i = 0; i < nx; ++i) row[i] += wy * wx[i];
      }
      for (size_t i = 0; i < nx; ++i) row[i] *= inv_n;
    };
    const auto rows = static_cast<int64_t>(ny);
    if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static)
      for (int64_t j = 0; j < rows; ++j) fill_row(static_cast<size_t>(j));
    } else {
      for (int64_t j = 0; j < rows; ++j) fill_row(static_cast<size_t>(j));
    }
    grids.push_back(std::move(grid));
  }
  return grids;
}

std::optional<double> QuadrantTable::positive_rate(int a, int b) const {
  if (empty(a, b)) return std::nullopt;
  return static_cast<double>(counts[a][b][1]) /
         static_cast<double>(total(a, b));
}

QuadrantTable Quadrants(const Dataset& d, const std::string& factor_a,
                        const std::string& factor_b) {
  QuadrantTable q;
  q.factor_a = factor_a;
  q.factor_b = factor_b;
  const size_t ia = d.feature_index(factor_a);
  const size_t ib = d.feature_index(factor_b);
  for (size_t r = 0; r < d.n_rows(); ++r) {
    const double a = d.at(r, ia);
    const double b = d.at(r, ib);
    for (const auto& [value, name] : {std::pair{a, factor_a}, {b, factor_b}}) {
      if (value != 0.0 && value != 1.0) {
        throw DataError("column '" + name + "' is not binary (found " +
                        FormatDouble(value) + ")");
      }
    }
    ++q.counts[a == 1.0][b == 1.0][d.labels()[r]];
  }
  return q;
}

std::vector<ScatterPoint> ScatterExport(const Dataset& d, const std::string& x,
                                        const std::string& y) {
  const size_t ix = d.feature_index(x);
  const size_t iy = d.feature_index(y);
  std::vector<ScatterPoint> points(d.n_rows());
  for (size_t r = 0; r < d.n_rows(); ++r) {
    points[r] = {d.at(r, ix), d.at(r, iy), d.labels()[r]};
  }
  return points;
}

std::string CorrelationToCsv(const CorrelationMatrix& m) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  };
  std::string out;
  for (const auto& c : m.columns) out += "," + quote(c);
  out += "\n";
  std::vector<std::string> undefined;
  for (size_t i = 0; i < m.size(); ++i) {
    out += quote(m.columns[i]);
    for (size_t j = 0; j < m.size(); ++j) out += "," + FormatDouble(m.at(i, j));
    out += "\n";
    if (m.is_undefined(i, i)) undefined.push_back(m.columns[i]);
  }
  if (!undefined.empty()) {
    out += "# undefined (constant column):";
    for (const auto& c : undefined) out += " " + quote(c);
    out += "\n";
  }
  return out;
}

std::string KdeToCsv(const KdeGrid& grid) {
  std::string out;
  if (grid.axes.size() == 1) {
    out = "x,density\n";
    for (size_t i = 0; i < grid.axes[0].size(); ++i) {
      out += FormatDouble(grid.axes[0][i]) + "," +
             FormatDouble(grid.density[i]) + "\n";
    }
    return out;
  }
  const auto& ax = grid.axes[0];
  const auto& ay = grid.axes[1];
  out = "y\\x";
  for (double x : ax) out += "," + FormatDouble(x);
  out += "\n";
  for (size_t j = 0; j < ay.size(); ++j) {
    out += FormatDouble(ay[j]);
    for (size_t i = 0; i < ax.size(); ++i) {
      out += "," + FormatDouble(grid.density[j * ax.size() + i]);
    }
    out += "\n";
  }
  return out;
}

std::string QuadrantsToJson(const QuadrantTable& q) {
  using Json = nlohmann::ordered_json;
  Json quadrants = Json::array();
  uint64_t total = 0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const auto rate = q.positive_rate(a, b);
      quadrants.push_back({{q.factor_a, a == 1 ? "yes" : "no"},
                           {q.factor_b, b == 1 ? "yes" : "no"},
                           {"label_0", q.counts[a][b][0]},
                           {"label_1", q.counts[a][b][1]},
                           {"empty", q.empty(a, b)},
                           {"positive_rate", rate ? Json(*rate) : Json(nullptr)}});
      total += q.total(a, b);
    }
  }
  Json doc;
  doc["factor_a"] = q.factor_a;
  doc["factor_b"] = q.factor_b;
  doc["n_rows"] = total;
  doc["quadrants"] = std::move(quadrants);
  return doc.dump(2) + "\n";
}

std::string ScatterToCsv(const std::vector<ScatterPoint>& points,
                         const std::string& x, const std::string& y) {
  std::string out = x + "," + y + ",label\n";
  for (const auto& p : points) {
    out += FormatDouble(p.x) + "," + FormatDouble(p.y) + "," +
           (p.label ? "1" : "0") + "\n";
  }
  return out;
}

std::string HeatmapSvg(std::span<const double> values, size_t rows,
                       size_t cols, const std::string& title,
                       bool diverging) {
  if (values.size() != rows * cols) {
    throw DataError("heatmap shape does not match its values");
  }
  constexpr int kCell = 6;
  constexpr int kHeader = 20;
  double max = 0.0;
  for (double v : values) max = std::max(max, v);
  const size_t width = cols * kCell;
  const size_t height = rows * kCell + kHeader;
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(width) + "\" height=\"" +
                    std::to_string(height) + "\">\n";
  std::string escaped;
  for (char c : title) {
    switch (c) {
      case '&': escaped += "&amp;"; break;
      case '<': escaped += "&lt;"; break;
      case '>': escaped += "&gt;"; break;
      default: escaped += c;
    }
  }
  svg += "<text x=\"2\" y=\"14\" font-size=\"12\">" + escaped + "</text>\n";
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) {
      const double v = values[r * cols + c];
      std::string color;
      if (diverging) {
        const double t = std::clamp(v, -1.0, 1.0);
        color = t >= 0 ? Hex(1.0, 1.0 - t, 1.0 - t) : Hex(1.0 + t, 1.0 + t, 1.0);
      } else {
        const double t = max > 0.0 ? v / max : 0.0;
        color = Hex(1.0 - 0.9 * t, 1.0 - 0.8 * t, 1.0 - 0.5 * t);
      }
      svg += "<rect x=\"" + std::to_string(c * kCell) + "\" y=\"" +
             std::to_string(r * kCell + kHeader) + "\" width=\"" +
             std::to_string(kCell) + "\" height=\"" + std::to_string(kCell) +
             "\" fill=\"" + color + "\"/>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace bagforest
