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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "misslab/diagnostics.hpp"
#include "misslab/fit_report.hpp"
#include "misslab/mixture.hpp"
#include "misslab/study.hpp"

namespace misslab::io {

/// "%.17g" rendering; round-trips every finite double.
std::string format_double(double value);

/// Reads a dataset CSV: a header of x1..xp plus an optional `label` column,
/// one row per observation. Labels are 1..g in the file and zero-based in
/// memory; an empty label cell marks the row unlabelled. Errors name the
/// line and column.
SemiDataset read_dataset(std::istream& in, const std::string& source = "<input>");
SemiDataset read_dataset(const std::filesystem::path& path);

/// Writes the format read_dataset accepts. The label column is always
/// written.
void write_dataset(std::ostream& out, const SemiDataset& data);
void write_dataset(const std::filesystem::path& path, const SemiDataset& data);

/// Settings shared by all subcommands. Every field has a default, so an empty
/// JSON object is a valid configuration.
struct RunConfig {
  // fit and diagnose
  std::string method = "ignorance";  // ignorance | full | fsc
  int g = 2;
  std::optional<double> alpha;
  std::string basis = "identity";
  std::uint64_t seed = 1;
  double tol = 1e-8;
  int max_iter = 1000;
  double full_tol = 1e-6;
  int full_max_iter = 500;
  int grid_points = 200;
  std::optional<double> bandwidth;
  // simulate and benchmark
  MixtureParams truth = default_benchmark_mixture();
  Mechanism mechanism;
  int n = 500;
  int n_train = 500;
  int n_test = 2000;
  int replications = 100;
  std::vector<double> alpha_grid = default_alpha_grid();

  SelectionSpec selection_spec() const { return SelectionSpec::parse(basis, g); }
  EmOptions em_options() const { return {tol, max_iter}; }
  BenchConfig bench_config() const;
  /// Throws InputError on out-of-range values.
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

nlohmann::json to_json(const RunConfig& config);
/// Unknown keys are rejected; missing keys keep their defaults.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig read_run_config(const std::filesystem::path& path);

nlohmann::json to_json(const MixtureParams& params);
MixtureParams mixture_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FitReport& report);
nlohmann::json to_json(const TestResult& result);
nlohmann::json to_json(const DiagnosticsReport& report);
nlohmann::json to_json(const BenchResult& result);

/// Plot-data tables.
void write_kde_csv(std::ostream& out, const DiagnosticsReport& report);
void write_ecdf_csv(std::ostream& out, const DiagnosticsReport& report);
void write_labelling_curve_csv(std::ostream& out, const DiagnosticsReport& report);
void write_benchmark_csv(std::ostream& out, const BenchResult& result);

/// Writes text to a file, throwing InputError if it cannot be opened.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace misslab::io
