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

#include <span>
#include <vector>

#include "misslab/mixture.hpp"

namespace misslab {

/// argmax_h tau_h(x); ties go to the smallest index.
int predict_class(const MixtureParams& params, const VectorRef& x);

/// predict_class for every row of x.
std::vector<int> predict_classes(const MixtureParams& params, const Matrix& x);

/// Hubert-Arabie adjusted Rand index from the contingency table. Labels are
/// arbitrary integers; only the induced partitions matter. Requires n >= 2.
/// Two identical trivial partitions (both one block, or both all singletons)
/// give 1.
double adjusted_rand_index(std::span<const int> truth, std::span<const int> predicted);

/// -sum_b log tau_hat(b, alignment[z_b]) with tau_hat floored at 1e-300.
/// alignment[h] is the fitted component matched to true class h.
double log_loss(const MixtureParams& params, const Matrix& features, std::span<const int> labels,
                std::span<const int> alignment);

/// Minimum-cost assignment (Hungarian method) for a square cost matrix;
/// result[row] = assigned column.
std::vector<int> min_cost_assignment(const Matrix& cost);

/// Matches fitted components to true ones by minimizing the total Euclidean
/// distance between means. result[h_true] = fitted index.
std::vector<int> align_components(const MixtureParams& fitted, const MixtureParams& truth);

}  // namespace misslab
