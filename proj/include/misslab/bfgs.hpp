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

#include <functional>
#include <string>
#include <vector>

#include "misslab/mixture.hpp"

namespace misslab {

/// Objective for minimize_bfgs. Returns f(x); when grad is non-null, also
/// writes the gradient. Infeasible points return +inf or NaN.
using GradientObjective = std::function<double(const Vector& x, Vector* grad)>;

struct BfgsOptions {
  double grad_tol = 1e-6;      // sup-norm of the gradient
  double value_rel_tol = 1e-12;  // stagnation: relative change on two consecutive steps
  int max_iter = 500;
};

struct BfgsResult {
  Vector x;
  double value = 0.0;
  std::vector<double> trace;  // f at the start and after every accepted step
  int iterations = 0;
  bool converged = false;
  std::string message;
};

/// Quasi-Newton minimization with inverse-Hessian BFGS updates and a
/// backtracking Armijo line search. Non-finite trial values shrink the step.
/// The returned point is the best one visited.
BfgsResult minimize_bfgs(const GradientObjective& objective, Vector x0, const BfgsOptions& options = {});

}  // namespace misslab
