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

#include "misslab/fit_report.hpp"
#include "misslab/mixture.hpp"

namespace misslab {

struct EmOptions {
  double tol = 1e-8;  // absolute objective change, per unit row weight
  int max_iter = 1000;
};

/// Starting values for a g-component fit.
///
/// When every class has at least p + 1 labelled rows, the per-class labelled
/// moments are used directly. Otherwise ten k-means++ seedings are tried
/// (classes with labelled rows keep their labelled mean as the centre), each
/// refined by a few constrained Lloyd passes, and the candidate with the
/// highest ignorance log-likelihood wins.
MixtureParams initialize_mixture(const SemiDataset& data, int g, std::uint64_t seed);

/// EM for the row-weighted ignorance objective
///   labelled_weight * (labelled block) + unlabelled_weight * (unlabelled block).
///
/// Labelled rows keep one-hot responsibilities at their label. A covariance
/// that fails to factorize, or whose smallest eigenvalue falls below the
/// floor, is shifted by lambda I and the event is recorded in notes.
/// Iteration stops when the objective changes by less than
/// tol * (total row weight) / n.
FitReport weighted_em(const SemiDataset& data, const MixtureParams& init, double labelled_weight,
                      double unlabelled_weight, const EmOptions& options = {});

/// Row-weighted objective maximized by weighted_em.
double weighted_objective(const MixtureParams& params, const SemiDataset& data,
                          double labelled_weight, double unlabelled_weight);

/// Maximizes the ignorance likelihood from the given starting point.
FitReport em_fit_ignorance(const SemiDataset& data, int g, const MixtureParams& init,
                           const EmOptions& options = {});

/// Same, with starting values from initialize_mixture(data, g, seed).
FitReport em_fit_ignorance(const SemiDataset& data, int g, std::uint64_t seed,
                           const EmOptions& options = {});

/// lambda for the covariance floor: 1e-8 times the mean feature variance.
double covariance_floor(const SemiDataset& data);

}  // namespace misslab
