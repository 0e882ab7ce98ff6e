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

#include "misslab/bfgs.hpp"

#include <cmath>

#include "misslab/error.hpp"

namespace misslab {

namespace {
constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktrack = 60;
}  // namespace

BfgsResult minimize_bfgs(const GradientObjective& objective, Vector x0, const BfgsOptions& options) {
  const Eigen::Index n = x0.size();
  BfgsResult result;
  Vector grad(n);
  double value = objective(x0, &grad);
  if (!std::isfinite(value) || !grad.allFinite()) {
    throw NumericalError("objective is not finite at the starting point");
  }
  Vector x = std::move(x0);
  result.trace.push_back(value);

  Matrix inv_hessian = Matrix::Identity(n, n);
  bool scaled = false;
  int small_steps = 0;
  bool reset_once = false;

  for (int iter = 0; iter < options.max_iter; ++iter) {
    if (grad.lpNorm<Eigen::Infinity>() < options.grad_tol) {
      result.converged = true;
      result.message = "gradient tolerance reached";
      break;
    }
    if (!scaled) {
      // First step: a unit-length move along the steepest descent direction.
      inv_hessian = Matrix::Identity(n, n) / std::max(1.0, grad.norm());
    }
    Vector direction = -inv_hessian * grad;
    double slope = grad.dot(direction);
    if (!(slope < 0.0)) {
      inv_hessian = Matrix::Identity(n, n) / std::max(1.0, grad.norm());
      scaled = false;
      direction = -inv_hessian * grad;
      slope = grad.dot(direction);
    }

    double step = 1.0;
    bool accepted = false;
    Vector trial_x(n);
    Vector trial_grad(n);
    double trial_value = value;
    for (int k = 0; k < kMaxBacktrack; ++k, step *= 0.5) {
      trial_x = x + step * direction;
      trial_value = objective(trial_x, &trial_grad);
      if (std::isfinite(trial_value) && trial_grad.allFinite() &&
          trial_value <= value + kArmijo * step * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!reset_once) {
        // Retry once from a fresh steepest-descent scaling.
        reset_once = true;
        scaled = false;
        continue;
      }
      result.message = "line search failed";
      break;
    }
    reset_once = false;

    const Vector s = trial_x - x;
    const Vector y = trial_grad - grad;
    const double sy = s.dot(y);
    if (sy > 1e-10 * s.norm() * y.norm()) {
      if (!scaled) {
        inv_hessian = Matrix::Identity(n, n) * (sy / y.squaredNorm());
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Vector hy = inv_hessian * y;
      // H+ = (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      inv_hessian += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) -
                     rho * (hy * s.transpose() + s * hy.transpose());
    }

    const double change = std::abs(trial_value - value) / std::max(1.0, std::abs(value));
    x = trial_x;
    grad = trial_grad;
    value = trial_value;
    result.trace.push_back(value);
    ++result.iterations;
    small_steps = change < options.value_rel_tol ? small_steps + 1 : 0;
    if (small_steps >= 2) {
      result.converged = true;
      result.message = "relative objective change below tolerance";
      break;
    }
  }
  if (result.message.empty()) {
    result.converged = grad.lpNorm<Eigen::Infinity>() < options.grad_tol;
    result.message = result.converged ? "gradient tolerance reached" : "iteration limit reached";
  }
  result.x = std::move(x);
  result.value = value;
  return result;
}

}  // namespace misslab
