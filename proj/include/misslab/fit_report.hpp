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

#include <optional>
#include <string>
#include <vector>

#include "misslab/mixture.hpp"
#include "misslab/selection.hpp"

namespace misslab {

/// Result of any of the fitting routines.
///
/// trace holds the objective after each iteration, starting with the value at
/// the initialization; objective is always trace.back().
struct FitReport {
  MixtureParams params;
  std::optional<SelectionCoeffs> coeffs;
  double objective = 0.0;
  std::vector<double> trace;
  bool converged = false;
  int iterations = 0;
  std::vector<std::string> notes;
};

}  // namespace misslab
