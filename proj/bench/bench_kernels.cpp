// Copyright 2026 The misslab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <vector>

#include "misslab/kernels.hpp"
#include "misslab/simulation.hpp"

namespace {

using namespace misslab;

Matrix draw_points(std::int64_t n) {
  Rng rng = make_stream(7, 0);
  return generate_mixture_sample(default_benchmark_mixture(), static_cast<std::size_t>(n), rng).features;
}

std::vector<double> first_column(const Matrix& x) { return {x.col(0).data(), x.col(0).data() + x.rows()}; }

std::vector<double> grid_of(int m) {
  std::vector<double> grid(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) grid[static_cast<std::size_t>(k)] = -4.0 + 8.0 * k / (m - 1);
  return grid;
}

void BM_LogJointSerial(benchmark::State& state) {
  const MixtureParams params = default_benchmark_mixture();
  const Matrix x = draw_points(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::log_joint(params, x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LogJointParallel(benchmark::State& state) {
  const MixtureParams params = default_benchmark_mixture();
  const Matrix x = draw_points(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::log_joint(params, x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PosteriorSerial(benchmark::State& state) {
  const Matrix lj = kernels::serial::log_joint(default_benchmark_mixture(), draw_points(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::posterior(lj));
}

void BM_PosteriorParallel(benchmark::State& state) {
  const Matrix lj = kernels::log_joint(default_benchmark_mixture(), draw_points(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::posterior(lj));
}

void BM_KernelSumsSerial(benchmark::State& state) {
  const auto points = first_column(draw_points(state.range(0)));
  const auto grid = grid_of(200);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::gaussian_kernel_sums(points, points, 0.3, grid));
}

void BM_KernelSumsParallel(benchmark::State& state) {
  const auto points = first_column(draw_points(state.range(0)));
  const auto grid = grid_of(200);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::gaussian_kernel_sums(points, points, 0.3, grid));
}

BENCHMARK(BM_LogJointSerial)->Arg(1000)->Arg(100000);
BENCHMARK(BM_LogJointParallel)->Arg(1000)->Arg(100000);
BENCHMARK(BM_PosteriorSerial)->Arg(1000)->Arg(100000);
BENCHMARK(BM_PosteriorParallel)->Arg(1000)->Arg(100000);
BENCHMARK(BM_KernelSumsSerial)->Arg(1000)->Arg(10000);
BENCHMARK(BM_KernelSumsParallel)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
