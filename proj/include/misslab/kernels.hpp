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

// Data-parallel row and grid kernels.
//
// The functions in misslab::kernels are OpenMP-parallel over rows (or grid
// points). Each output element is computed independently and any sum over
// rows is left to the caller, so results do not depend on the thread count.
// misslab::kernels::serial holds straightforward reference versions of the
// same kernels; they are kept for tests and for the benchmark target.

#include <span>

#include "misslab/mixture.hpp"

namespace misslab::kernels {

/// Below this many rows the parallel kernels run on one thread.
inline constexpr Eigen::Index kParallelThreshold = 512;

/// n x g matrix with (i, h) = log pi_h + log f(x_i; theta_h).
Matrix log_joint(const MixtureParams& params, const Matrix& x);

/// Row-wise softmax of a log-joint matrix (the posterior probabilities), its
/// logarithm, and the row-wise log-sum-exp (the log marginal density).
/// log_tau stays accurate for probabilities close to 1.
struct Posterior {
  Matrix tau;
  Matrix log_tau;
  Vector log_marginal;
};
Posterior posterior(const Matrix& log_joint);

/// Shannon entropy of each row of tau.
Vector row_entropies(const Matrix& tau);

/// Gaussian kernel sums at each grid point v:
///   mass(v)   = sum_i phi((v - x_i) / h)
///   marked(v) = sum_i m_i phi((v - x_i) / h)
/// marks may be empty, in which case marked is left empty.
struct KernelSums {
  Vector mass;
  Vector marked;
};
KernelSums gaussian_kernel_sums(std::span<const double> points, std::span<const double> marks,
                                double bandwidth, std::span<const double> grid);

namespace serial {

Matrix log_joint(const MixtureParams& params, const Matrix& x);
Posterior posterior(const Matrix& log_joint);
Vector row_entropies(const Matrix& tau);
KernelSums gaussian_kernel_sums(std::span<const double> points, std::span<const double> marks,
                                double bandwidth, std::span<const double> grid);

}  // namespace serial
}  // namespace misslab::kernels
