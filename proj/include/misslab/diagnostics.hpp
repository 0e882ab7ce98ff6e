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
#include <span>
#include <string>
#include <vector>

#include "misslab/em.hpp"
#include "misslab/fit_report.hpp"
#include "misslab/mixture.hpp"

namespace misslab {

/// Transformed entropies of labelled (V_L) and unlabelled (V_U) rows.
struct EntropySplit {
  std::vector<double> labelled;
  std::vector<double> unlabelled;
};

/// Per-row entropy under params, passed through transformed_entropy and
/// partitioned by labelling status. Requires g >= 2.
EntropySplit entropy_split(const SemiDataset& data, const MixtureParams& params);

struct EntropySummary {
  double mean_labelled = 0.0;
  double mean_unlabelled = 0.0;
};
EntropySummary summarize_entropy(const EntropySplit& split);

enum class TestMethod { ks_one_sided, mann_whitney_u };
std::string to_string(TestMethod method);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  TestMethod method = TestMethod::ks_one_sided;
};

/// D+ = sup_v [F_L(v) - F_U(v)] over the pooled sample points (right-continuous
/// ECDFs); p-value from the one-sided asymptotic bound exp(-2 m D+^2) with
/// m = n_L n_U / (n_L + n_U). Alternative: labelled entropies are smaller.
TestResult ks_one_sided(const EntropySplit& split);

/// U = #{(u, l) : V_U > V_L} + ties / 2, from mid-ranks. One-sided p-value
/// for V_U > V_L via the normal approximation with tie-corrected variance
/// and continuity correction.
TestResult mann_whitney_u(const EntropySplit& split);

/// Silverman's rule 0.9 min(sd, IQR / 1.34) n^(-1/5); falls back to sd when
/// the IQR is zero. Returns 0 for degenerate samples.
double silverman_bandwidth(std::span<const double> values);

/// Bandwidth used when Silverman's rule gives zero.
inline constexpr double kBandwidthFloor = 1e-6;

struct KdeResult {
  std::vector<double> density;
  double bandwidth = 0.0;
  bool floored = false;  // automatic bandwidth hit kBandwidthFloor
};

/// Gaussian kernel density estimate on a grid. bandwidth = nullopt selects
/// Silverman's rule.
KdeResult kde(std::span<const double> values, std::optional<double> bandwidth,
              std::span<const double> grid);

struct NadarayaWatsonResult {
  std::vector<std::optional<double>> probability;  // nullopt where kernel mass < 1e-300
  double bandwidth = 0.0;
  bool floored = false;
};

/// Gaussian-kernel regression of the labelling indicator on the entropy.
NadarayaWatsonResult nadaraya_watson(std::span<const double> entropies, std::span<const int> indicators,
                                     std::optional<double> bandwidth, std::span<const double> grid);

/// Right-continuous empirical CDF of values evaluated on a grid.
std::vector<double> ecdf(std::span<const double> values, std::span<const double> grid);

/// m equally spaced points from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, int m);

struct DiagnosticsOptions {
  int grid_points = 200;
  std::optional<double> bandwidth;
  EmOptions em;
  std::uint64_t seed = 0;
};

/// Everything needed for the three diagnostic panels plus the tests.
struct DiagnosticsReport {
  FitReport fit;
  EntropySplit split;
  EntropySummary summary;
  TestResult ks;
  TestResult mann_whitney;
  std::vector<double> grid;
  KdeResult kde_labelled;
  KdeResult kde_unlabelled;
  std::vector<double> ecdf_labelled;
  std::vector<double> ecdf_unlabelled;
  NadarayaWatsonResult labelling_curve;
};

/// Fits the ignorance EM, then computes the entropy split, summary, both
/// tests and the plot grids. Needs both labelled and unlabelled rows.
DiagnosticsReport run_diagnostics(const SemiDataset& data, int g, const DiagnosticsOptions& options = {});

}  // namespace misslab
