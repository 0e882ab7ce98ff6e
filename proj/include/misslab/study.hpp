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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "misslab/em.hpp"
#include "misslab/mixture.hpp"
#include "misslab/selection.hpp"
#include "misslab/simulation.hpp"

namespace misslab {

/// How labels go missing in simulated training data.
struct Mechanism {
  enum class Kind { entropy, mcar };
  Kind kind = Kind::entropy;
  double beta0 = 1.0;  // entropy: log-odds intercept
  double beta1 = -5.0;  // entropy: log-odds slope on the true-parameter entropy
  double keep_prob = 0.5;  // mcar

  static Mechanism entropy(double beta0, double beta1) { return {Kind::entropy, beta0, beta1, 0.5}; }
  static Mechanism mcar(double keep_prob) { return {Kind::mcar, 1.0, -5.0, keep_prob}; }

  SemiDataset apply(const LabelledSample& sample, const MixtureParams& truth, Rng& rng) const;

  friend bool operator==(const Mechanism&, const Mechanism&) = default;
};

/// 0.05, 0.10, ..., 0.95.
std::vector<double> default_alpha_grid();

struct BenchConfig {
  MixtureParams true_params = default_benchmark_mixture();
  Mechanism mechanism;
  int n_train = 500;
  int n_test = 2000;
  int replications = 100;
  std::vector<double> alpha_grid = default_alpha_grid();
  std::uint64_t seed = 1;
  SelectionSpec basis;
  EmOptions em;
  double full_tol = 1e-6;
  int full_max_iter = 500;

  /// Throws InputError when the configuration is unusable.
  void validate() const;
};

/// Test-set performance of one estimator across replications.
struct EstimatorRuns {
  std::string name;  // "truth", "ignorance", "full" or "fsc"
  std::optional<double> alpha;
  std::vector<double> ari;  // NaN where the fit failed
  std::vector<double> log_loss;
  std::vector<bool> failed;
  std::vector<bool> converged;
  std::vector<std::string> errors;
  std::vector<std::vector<double>> beta;  // selection coefficients; empty unless fitted

  double mean_ari = 0.0;
  double se_ari = 0.0;
  double mean_log_loss = 0.0;
  double se_log_loss = 0.0;
  int failures = 0;
  int nonconverged = 0;

  /// "full", "fsc@0.5", ...
  std::string label() const;
};

struct BenchResult {
  std::vector<std::uint64_t> replication_seeds;
  std::vector<EstimatorRuns> estimators;

  const EstimatorRuns& find(const std::string& name, std::optional<double> alpha = std::nullopt) const;
};

/// Mean and standard error of a - b over replications where both are finite.
struct PairedDifference {
  double mean = 0.0;
  double se = 0.0;
  int count = 0;
};
PairedDifference paired_difference(const std::vector<double>& a, const std::vector<double>& b);

/// Runs the replication study. Each replication draws a training and a test
/// set from its own random stream, masks training labels, and fits the
/// ignorance, full-likelihood and FSC estimators (FSC and ignorance share one
/// initialization; the full fit starts from the ignorance fit). Replications
/// run in parallel on `threads` OpenMP threads (0 = runtime default); the
/// result does not depend on the thread count.
BenchResult run_benchmark(const BenchConfig& config, int threads = 0);

}  // namespace misslab
