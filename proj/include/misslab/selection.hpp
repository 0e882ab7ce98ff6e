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

#include <cmath>
#include <span>
#include <string>
#include <string_view>

#include "misslab/mixture.hpp"

namespace misslab {

/// Family of basis functions b_1..b_T applied to an observation's entropy.
enum class BasisFamily {
  identity,                // b_1(e) = e
  polynomial,              // b_t(e) = e^t, t = 1..degree; degree 0 is intercept-only
  transformed_polynomial,  // b_t(e) = e'(e)^t with e' the transformed entropy
};

/// Basis specification for the logistic labelling model.
struct SelectionSpec {
  BasisFamily family = BasisFamily::identity;
  int degree = 1;
  int classes = 2;  // only used by transformed_polynomial

  static SelectionSpec identity() { return {}; }
  static SelectionSpec polynomial(int degree);
  static SelectionSpec transformed_polynomial(int degree, int classes);

  /// Number of basis functions T.
  int num_terms() const { return family == BasisFamily::identity ? 1 : degree; }

  /// "identity", "poly:d" or "tpoly:d".
  std::string to_string() const;
  static SelectionSpec parse(std::string_view text, int classes);

  friend bool operator==(const SelectionSpec&, const SelectionSpec&) = default;
};

/// Logistic coefficients (beta_0, beta_1, ..., beta_T); all finite.
class SelectionCoeffs {
 public:
  explicit SelectionCoeffs(Vector beta);
  const Vector& beta() const { return beta_; }
  int num_terms() const { return static_cast<int>(beta_.size()) - 1; }

 private:
  Vector beta_;
};

/// Implicit logistic regression: labelled rows first (response 1), then
/// unlabelled rows (response 0). Column 0 of the design is the intercept.
struct LogisticDesign {
  Vector response;
  Matrix design;
};

inline double expit(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

/// log expit(x) without overflow or cancellation.
inline double log_expit(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

Vector basis_expand(double e, const SelectionSpec& spec);

/// Element-wise derivative of basis_expand with respect to e.
Vector basis_derivative(double e, const SelectionSpec& spec);

/// beta_0 + sum_t beta_t b_t(e).
double linear_predictor(double e, const SelectionSpec& spec, const SelectionCoeffs& coeffs);

LogisticDesign build_design(std::span<const double> labelled, std::span<const double> unlabelled,
                            const SelectionSpec& spec);

/// Penalized logistic regression by Newton's method with step halving.
///
/// Maximizes the Bernoulli log-likelihood minus (ridge/2)||beta_1..T||^2; the
/// intercept is never penalized. Iterates until the score's sup-norm drops
/// below 1e-10 (at most 100 iterations) and guarantees a sup-norm below 1e-8
/// on return. With ridge == 0, perfect or quasi-complete separation is
/// reported as SeparationError.
SelectionCoeffs logistic_fit(const LogisticDesign& design, double ridge = 0.0);

/// Penalized score X^T (y - expit(X beta)) - ridge (0, beta_1..T).
Vector logistic_score(const LogisticDesign& design, const Vector& beta, double ridge = 0.0);

/// sum_j log expit(eta_j) over labelled rows + sum_k log(1 - expit(eta_k))
/// over unlabelled rows.
double log_selection_likelihood(const SelectionCoeffs& coeffs, const SelectionSpec& spec,
                                std::span<const double> labelled,
                                std::span<const double> unlabelled);

/// Gradient of log_selection_likelihood with respect to beta.
Vector selection_likelihood_gradient(const SelectionCoeffs& coeffs, const SelectionSpec& spec,
                                     std::span<const double> labelled,
                                     std::span<const double> unlabelled);

}  // namespace misslab
