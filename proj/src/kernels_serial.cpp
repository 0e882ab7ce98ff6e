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

#include <cmath>
#include <numbers>

#include "misslab/error.hpp"
#include "misslab/kernels.hpp"

namespace misslab::kernels::serial {

Matrix log_joint(const MixtureParams& params, const Matrix& x) {
  if (x.rows() > 0 && x.cols() != params.dim()) throw InputError("dimension mismatch in log_joint");
  Matrix out(x.rows(), params.num_components());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (int h = 0; h < params.num_components(); ++h) {
      out(i, h) = params.log_joint(h, x.row(i).transpose());
    }
  }
  return out;
}

Posterior posterior(const Matrix& log_joint) {
  Posterior out{Matrix(log_joint.rows(), log_joint.cols()), Matrix(log_joint.rows(), log_joint.cols()),
                Vector(log_joint.rows())};
  for (Eigen::Index i = 0; i < log_joint.rows(); ++i) {
    const Vector row = log_joint.row(i).transpose();
    const double lse = log_sum_exp(row);
    out.log_marginal[i] = lse;
    out.log_tau.row(i) = (row.array() - lse).matrix().transpose();
    out.tau.row(i) = out.log_tau.row(i).array().exp().matrix();
  }
  return out;
}

Vector row_entropies(const Matrix& tau) {
  Vector e(tau.rows());
  for (Eigen::Index i = 0; i < tau.rows(); ++i) e[i] = shannon_entropy(tau.row(i).transpose());
  return e;
}

KernelSums gaussian_kernel_sums(std::span<const double> points, std::span<const double> marks,
                                double bandwidth, std::span<const double> grid) {
  if (!marks.empty() && marks.size() != points.size()) {
    throw InputError("marks and points differ in length");
  }
  const auto m = static_cast<Eigen::Index>(grid.size());
  KernelSums out{Vector::Zero(m), marks.empty() ? Vector() : Vector::Zero(m)};
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double u = (grid[j] - points[i]) / bandwidth;
      const double k = norm * std::exp(-0.5 * u * u);
      out.mass[j] += k;
      if (!marks.empty()) out.marked[j] += marks[i] * k;
    }
  }
  return out;
}

}  // namespace misslab::kernels::serial
