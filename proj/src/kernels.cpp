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

#include "misslab/kernels.hpp"

#include <cmath>
#include <vector>

#include "misslab/error.hpp"

namespace misslab::kernels {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;
}  // namespace

Matrix log_joint(const MixtureParams& params, const Matrix& x) {
  if (x.rows() > 0 && x.cols() != params.dim()) throw InputError("dimension mismatch in log_joint");
  const Eigen::Index n = x.rows();
  const int p = params.dim();
  const int g = params.num_components();
  std::vector<double> constant(g);
  for (int h = 0; h < g; ++h) {
    constant[h] = std::log(params.weight(h)) - 0.5 * (p * kLog2Pi + params.log_det(h));
  }
  Matrix out(n, g);

#pragma omp parallel if (n >= kParallelThreshold)
  {
    std::vector<double> y(p);
#pragma omp for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int h = 0; h < g; ++h) {
        const Matrix& factor = params.cov_factor(h);
        const Vector& mean = params.mean(h);
        double q = 0.0;
        // Forward substitution L y = x - mean.
        for (int r = 0; r < p; ++r) {
          double s = x(i, r) - mean[r];
          for (int c = 0; c < r; ++c) s -= factor(r, c) * y[c];
          y[r] = s / factor(r, r);
          q += y[r] * y[r];
        }
        out(i, h) = constant[h] - 0.5 * q;
      }
    }
  }
  return out;
}

Posterior posterior(const Matrix& log_joint) {
  const Eigen::Index n = log_joint.rows();
  const Eigen::Index g = log_joint.cols();
  Posterior out{Matrix(n, g), Matrix(n, g), Vector(n)};

#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index top = 0;
    for (Eigen::Index h = 1; h < g; ++h) {
      if (log_joint(i, h) > log_joint(i, top)) top = h;
    }
    const double m = log_joint(i, top);
    double rest = 0.0;
    for (Eigen::Index h = 0; h < g; ++h) {
      if (h != top) rest += std::exp(log_joint(i, h) - m);
    }
    const double log_total = std::log1p(rest);
    for (Eigen::Index h = 0; h < g; ++h) {
      const double lt = h == top ? -log_total : log_joint(i, h) - m - log_total;
      out.log_tau(i, h) = lt;
      out.tau(i, h) = std::exp(lt);
    }
    out.log_marginal[i] = m + log_total;
  }
  return out;
}

Vector row_entropies(const Matrix& tau) {
  const Eigen::Index n = tau.rows();
  Vector e(n);

#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (Eigen::Index i = 0; i < n; ++i) e[i] = shannon_entropy(tau.row(i).transpose());
  return e;
}

KernelSums gaussian_kernel_sums(std::span<const double> points, std::span<const double> marks,
                                double bandwidth, std::span<const double> grid) {
  if (!marks.empty() && marks.size() != points.size()) {
    throw InputError("marks and points differ in length");
  }
  const auto m = static_cast<Eigen::Index>(grid.size());
  const auto n = points.size();
  const bool with_marks = !marks.empty();
  KernelSums out{Vector::Zero(m), with_marks ? Vector::Zero(m) : Vector()};
  const double inv_h = 1.0 / bandwidth;

#pragma omp parallel for schedule(static) if (m * static_cast<Eigen::Index>(n) >= kParallelThreshold * 64)
  for (Eigen::Index j = 0; j < m; ++j) {
    double mass = 0.0;
    double marked = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = (grid[j] - points[i]) * inv_h;
      const double k = kInvSqrt2Pi * std::exp(-0.5 * u * u);
      mass += k;
      if (with_marks) marked += marks[i] * k;
    }
    out.mass[j] = mass;
    if (with_marks) out.marked[j] = marked;
  }
  return out;
}

}  // namespace misslab::kernels
