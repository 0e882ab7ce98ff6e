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
#include <random>
#include <vector>

#include "misslab/mixture.hpp"

namespace misslab {

using Rng = std::mt19937_64;

/// Independent generator for stream `index` of a run seeded with `seed`.
/// The same (seed, index) pair always yields the same sequence.
Rng make_stream(std::uint64_t seed, std::uint64_t index);

/// Two equally weighted bivariate Gaussians: means (0, 0) and (0, 3),
/// covariances [[1, 0.7], [0.7, 1]] and I. The default benchmark truth.
MixtureParams default_benchmark_mixture();

/// Fully labelled draw from a mixture (labels are zero-based).
struct LabelledSample {
  Matrix features;
  std::vector<int> labels;
};

/// n i.i.d. draws: class from the weights, then a Gaussian draw through the
/// class covariance's Cholesky factor.
LabelledSample generate_mixture_sample(const MixtureParams& params, std::size_t n, Rng& rng);

/// expit(beta0 + beta1 * e_i) with e_i the entropy of row i under params.
Vector entropy_labelling_probabilities(const Matrix& features, const MixtureParams& params,
                                       double beta0, double beta1);

/// Keeps each label independently with probability expit(beta0 + beta1 e_i),
/// entropies computed under the true parameters.
SemiDataset apply_entropy_missingness(const Matrix& features, const std::vector<int>& labels,
                                      const MixtureParams& true_params, double beta0, double beta1,
                                      Rng& rng);

/// Keeps each label independently with probability keep_prob.
SemiDataset apply_mcar(const Matrix& features, const std::vector<int>& labels, double keep_prob,
                       Rng& rng);

}  // namespace misslab
