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

// Pilot run that calibrates the MCAR bound on the mean |beta_1| used by the
// acceptance suite. Writes the fixture JSON to the path given as argv[1].

#include <cmath>
#include <cstdint>
#include <iostream>

#include "misslab/io.hpp"
#include "misslab/study.hpp"

int main(int argc, char** argv) {
  using namespace misslab;
  if (argc != 2) {
    std::cerr << "usage: misslab_pilot <output.json>\n";
    return 1;
  }
  constexpr std::uint64_t kPilotSeed = 20260901;
  constexpr int kReplications = 50;
  constexpr double kSeMultiplier = 4.0;

  BenchConfig config;
  config.mechanism = Mechanism::mcar(0.5);
  config.n_train = 1000;
  config.n_test = 2000;
  config.replications = kReplications;
  config.alpha_grid = {};
  config.seed = kPilotSeed;
  const BenchResult result = run_benchmark(config);
  const EstimatorRuns& full = result.find("full");

  double sum = 0.0;
  double sum_sq = 0.0;
  int count = 0;
  for (const auto& b : full.beta) {
    if (b.size() < 2) continue;
    const double v = std::abs(b[1]);
    sum += v;
    sum_sq += v * v;
    ++count;
  }
  if (count < 2) {
    std::cerr << "pilot: too few successful full fits\n";
    return 2;
  }
  const double mean = sum / count;
  const double sd = std::sqrt((sum_sq - count * mean * mean) / (count - 1));
  const double se = sd / std::sqrt(static_cast<double>(count));
  const nlohmann::json out = {{"pilot_seed", kPilotSeed},
                              {"replications", kReplications},
                              {"n_train", config.n_train},
                              {"keep_prob", 0.5},
                              {"successful_fits", count},
                              {"mean_abs_beta1", mean},
                              {"se_abs_beta1", se},
                              {"se_multiplier", kSeMultiplier},
                              {"mean_abs_beta1_bound", mean + kSeMultiplier * se}};
  io::write_text(argv[1], out.dump(2) + "\n");
  std::cout << out.dump(2) << '\n';
  return 0;
}
