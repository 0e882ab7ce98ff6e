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

#include "misslab/selection.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "misslab/error.hpp"

namespace misslab {

namespace {

constexpr int kNewtonMaxIter = 100;
constexpr double kNewtonTol = 1e-10;
constexpr double kReturnTol = 1e-8;

double penalized_log_likelihood(const LogisticDesign& d, const Vector& beta, double ridge) {
  const Vector eta = d.design * beta;
  double s = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    s += d.response[i] > 0.5 ? log_expit(eta[i]) : log_expit(-eta[i]);
  }
  return s - 0.5 * ridge * beta.tail(beta.size() - 1).squaredNorm();
}

}  // namespace

SelectionSpec SelectionSpec::polynomial(int degree) {
  if (degree < 0) throw InputError("polynomial basis degree must be non-negative");
  return {BasisFamily::polynomial, degree, 2};
}

SelectionSpec SelectionSpec::transformed_polynomial(int degree, int classes) {
  if (degree < 1) throw InputError("polynomial basis degree must be at least 1");
  if (classes < 2) throw InputError("transformed entropy basis needs at least two classes");
  return {BasisFamily::transformed_polynomial, degree, classes};
}

std::string SelectionSpec::to_string() const {
  switch (family) {
    case BasisFamily::identity:
      return "identity";
    case BasisFamily::polynomial:
      return "poly:" + std::to_string(degree);
    case BasisFamily::transformed_polynomial:
      return "tpoly:" + std::to_string(degree);
  }
  return "identity";
}

SelectionSpec SelectionSpec::parse(std::string_view text, int classes) {
  if (text == "identity") return identity();
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw InputError("unknown basis '" + std::string(text) + "' (expected identity, poly:d or tpoly:d)");
  }
  const auto kind = text.substr(0, colon);
  const auto digits = text.substr(colon + 1);
  int degree = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), degree);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw InputError("bad basis degree in '" + std::string(text) + "'");
  }
  if (kind == "poly") return polynomial(degree);
  if (kind == "tpoly") return transformed_polynomial(degree, classes);
  throw InputError("unknown basis '" + std::string(text) + "' (expected identity, poly:d or tpoly:d)");
}

SelectionCoeffs::SelectionCoeffs(Vector beta) : beta_(std::move(beta)) {
  if (beta_.size() < 1) throw InputError("selection coefficients need an intercept");
  if (!beta_.allFinite()) throw InputError("selection coefficients must be finite");
}

Vector basis_expand(double e, const SelectionSpec& spec) {
  const int t_max = spec.num_terms();
  const double base =
      spec.family == BasisFamily::transformed_polynomial ? transformed_entropy(e, spec.classes) : e;
  Vector b(t_max);
  double power = 1.0;
  for (int t = 0; t < t_max; ++t) {
    power *= base;
    b[t] = power;
  }
  return b;
}

Vector basis_derivative(double e, const SelectionSpec& spec) {
  const int t_max = spec.num_terms();
  double base = e;
  double chain = 1.0;
  if (spec.family == BasisFamily::transformed_polynomial) {
    base = transformed_entropy(e, spec.classes);
    chain = transformed_entropy_derivative(e, spec.classes);
  }
  // d/de base^t = t base^(t-1) dbase/de
  Vector d(t_max);
  double power = 1.0;
  for (int t = 0; t < t_max; ++t) {
    d[t] = (t + 1) * power * chain;
    power *= base;
  }
  return d;
}

double linear_predictor(double e, const SelectionSpec& spec, const SelectionCoeffs& coeffs) {
  if (coeffs.num_terms() != spec.num_terms()) {
    throw InputError("selection coefficients do not match the basis size");
  }
  return coeffs.beta()[0] + coeffs.beta().tail(spec.num_terms()).dot(basis_expand(e, spec));
}

LogisticDesign build_design(std::span<const double> labelled, std::span<const double> unlabelled,
                            const SelectionSpec& spec) {
  const auto n1 = static_cast<Eigen::Index>(labelled.size());
  const auto n = n1 + static_cast<Eigen::Index>(unlabelled.size());
  const int t_max = spec.num_terms();
  LogisticDesign d{Vector::Zero(n), Matrix(n, t_max + 1)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double e = i < n1 ? labelled[i] : unlabelled[i - n1];
    d.design(i, 0) = 1.0;
    d.design.row(i).tail(t_max) = basis_expand(e, spec).transpose();
    if (i < n1) d.response[i] = 1.0;
  }
  return d;
}

Vector logistic_score(const LogisticDesign& design, const Vector& beta, double ridge) {
  const Vector eta = design.design * beta;
  Vector resid(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) resid[i] = design.response[i] - expit(eta[i]);
  Vector score = design.design.transpose() * resid;
  score.tail(beta.size() - 1) -= ridge * beta.tail(beta.size() - 1);
  return score;
}

SelectionCoeffs logistic_fit(const LogisticDesign& design, double ridge) {
  if (!(ridge >= 0.0)) throw InputError("ridge must be non-negative");
  const Eigen::Index k = design.design.cols();
  const Eigen::Index n = design.design.rows();
  if (n == 0) throw InputError("logistic regression needs at least one row");

  Vector penalty = Vector::Constant(k, ridge);
  penalty[0] = 0.0;

  Vector beta = Vector::Zero(k);
  double current = penalized_log_likelihood(design, beta, ridge);
  Vector score = logistic_score(design, beta, ridge);
  for (int iter = 0; iter < kNewtonMaxIter; ++iter) {
    if (score.lpNorm<Eigen::Infinity>() < kNewtonTol) break;

    const Vector eta = design.design * beta;
    Vector w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double p = expit(eta[i]);
      w[i] = p * (1.0 - p);
    }
    Matrix hessian = design.design.transpose() * w.asDiagonal() * design.design;
    hessian.diagonal() += penalty;
    Eigen::LDLT<Matrix> ldlt(hessian);
    Vector step = ldlt.solve(score);
    if (ldlt.info() != Eigen::Success || !step.allFinite()) {
      // Singular information: fall back to a tiny Levenberg shift.
      hessian.diagonal().array() += 1e-10 * (1.0 + hessian.diagonal().cwiseAbs().maxCoeff());
      step = hessian.ldlt().solve(score);
    }

    double t = 1.0;
    bool accepted = false;
    for (int half = 0; half < 60; ++half, t *= 0.5) {
      const Vector trial = beta + t * step;
      const double value = penalized_log_likelihood(design, trial, ridge);
      if (std::isfinite(value) && value >= current - 1e-12 * (1.0 + std::abs(current))) {
        beta = trial;
        current = value;
        accepted = true;
        break;
      }
    }
    score = logistic_score(design, beta, ridge);
    if (!accepted) break;
  }

  if (ridge == 0.0) {
    const Vector eta = design.design * beta;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(design.response[i] - expit(eta[i])));
    }
    if (worst < 1e-6 || beta.lpNorm<Eigen::Infinity>() > 50.0) {
      throw SeparationError(
          "logistic fit diverges (perfect or quasi-complete separation); use ridge > 0");
    }
  }
  if (!(score.lpNorm<Eigen::Infinity>() < kReturnTol)) {
    throw NumericalError("logistic fit did not converge (score sup-norm " +
                         std::to_string(score.lpNorm<Eigen::Infinity>()) + ")");
  }
  return SelectionCoeffs(std::move(beta));
}

double log_selection_likelihood(const SelectionCoeffs& coeffs, const SelectionSpec& spec,
                                std::span<const double> labelled,
                                std::span<const double> unlabelled) {
  double s = 0.0;
  for (double e : labelled) s += log_expit(linear_predictor(e, spec, coeffs));
  for (double e : unlabelled) s += log_expit(-linear_predictor(e, spec, coeffs));
  return s;
}

Vector selection_likelihood_gradient(const SelectionCoeffs& coeffs, const SelectionSpec& spec,
                                     std::span<const double> labelled,
                                     std::span<const double> unlabelled) {
  const int t_max = spec.num_terms();
  Vector grad = Vector::Zero(t_max + 1);
  auto accumulate = [&](double e, double r) {
    const double resid = r - expit(linear_predictor(e, spec, coeffs));
    grad[0] += resid;
    grad.tail(t_max) += resid * basis_expand(e, spec);
  };
  for (double e : labelled) accumulate(e, 1.0);
  for (double e : unlabelled) accumulate(e, 0.0);
  return grad;
}

}  // namespace misslab
