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

// Serial reference vs OpenMP paths for the parallel kernels.

#include <string>
#include <vector>

#include "benchmark/benchmark.h"
#include "bagforest/analysis.h"
#include "bagforest/execution.h"
#include "bagforest/forest.h"
#include "bagforest/random.h"

namespace bagforest {
namespace {

// Roughly the shape of the PCOS table: ~540 rows, ~40 features.
Dataset Synthetic(size_t rows, size_t features) {
  RandomStream rng(1);
  std::vector<std::string> names;
  for (size_t f = 0; f < features; ++f) names.push_back("f" + std::to_string(f));
  std::vector<double> values;
  std::vector<Label> labels;
  for (size_t r = 0; r < rows; ++r) {
    double signal = 0.0;
    for (size_t f = 0; f < features; ++f) {
      const double v = rng.UniformReal();
      if (f < 4) signal += v;
      values.push_back(v);
    }
    labels.push_back(signal + 0.5 * rng.UniformReal() > 2.2 ? 1 : 0);
  }
  return Dataset(names, values, labels);
}

Execution ExecFor(const benchmark::State& state) {
  return state.range(0) ? Execution::kParallel : Execution::kSerial;
}

void BM_Fit(benchmark::State& state) {
  const Dataset d = Synthetic(541, 41);
  ForestConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Fit(d, cfg, ExecFor(state)));
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_Fit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_PredictScores(benchmark::State& state) {
  const Dataset d = Synthetic(2000, 41);
  ForestConfig cfg;
  const ForestModel m = Fit(d, cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(PredictScores(m, d, ExecFor(state)));
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_PredictScores)
    ->Arg(0)
    ->Arg(1)
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

void BM_Kde2d(benchmark::State& state) {
  RandomStream rng(3);
  std::vector<double> x(541), y(541);
  for (size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.UniformReal() * 20;
    y[i] = rng.UniformReal() * 15 + x[i] * 0.3;
  }
  KdeOptions opts;
  opts.grid_size = 200;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Kde2d(x, y, {}, opts, ExecFor(state)));
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_Kde2d)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
}  // namespace bagforest

BENCHMARK_MAIN();
