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

#include "misslab/joint.hpp"

#include <cmath>
#include <limits>

#include "misslab/bfgs.hpp"
#include "misslab/error.hpp"
#include "misslab/kernels.hpp"

namespace misslab {

namespace {

void check_spec(const SelectionSpec& spec, int g) {
  if (spec.family == BasisFamily::transformed_polynomial && spec.classes != g) {
    throw InputError("transformed entropy basis was built for a different number of classes");
  }
}

}  // namespace

EntropyVectors split_entropies(const MixtureParams& params, const SemiDataset& data) {
  check_compatible(params, data);
  EntropyVectors out;
  if (data.size() == 0) return out;
  const auto post = kernels::posterior(kernels::log_joint(params, data.features()));
  const Vector e = kernels::row_entropies(post.tau);
  out.labelled.reserve(data.num_labelled());
  out.unlabelled.reserve(data.num_unlabelled());
  for (std::size_t i = 0; i < data.size(); ++i) {
    (data.labelled(i) ? out.labelled : out.unlabelled).push_back(e[static_cast<Eigen::Index>(i)]);
  }
  return out;
}

double log_full_likelihood(const MixtureParams& params, const SelectionCoeffs& coeffs,
                           const SelectionSpec& spec, const SemiDataset& data) {
  check_spec(spec, params.num_components());
  const EntropyVectors e = split_entropies(params, data);
  return log_selection_likelihood(coeffs, spec, e.labelled, e.unlabelled) +
         log_ignorance_likelihood(params, data);
}

ProfileResult log_profile_likelihood(const MixtureParams& params, const SelectionSpec& spec,
                                     const SemiDataset& data) {
  check_spec(spec, params.num_components());
  const EntropyVectors e = split_entropies(params, data);
  SelectionCoeffs coeffs = logistic_fit(build_design(e.labelled, e.unlabelled, spec), kProfileRidge);
  const double value = log_selection_likelihood(coeffs, spec, e.labelled, e.unlabelled) +
                       log_ignorance_likelihood(params, data);
  ProfileResult out{value, std::move(coeffs), {}};
  if (data.num_unlabelled() == 0) {
    out.notes.push_back("selection model degenerate: no unlabelled rows; intercept limited by the fit tolerance");
  }
  if (data.num_labelled() == 0) {
    out.notes.push_back("selection model degenerate: no labelled rows; intercept limited by the fit tolerance");
  }
  return out;
}

FullLikelihood::FullLikelihood(const SemiDataset& data, SelectionSpec spec, int g)
    : data_(data), spec_(spec), layout_{g, data.dim(), spec.num_terms()} {
  check_spec(spec_, g);
  if (data.max_label() >= g) throw InputError("label out of range for the mixture");
}

double FullLikelihood::value(const Vector& theta) const { return evaluate(theta, nullptr); }

double FullLikelihood::value_and_gradient(const Vector& theta, Vector& grad) const {
  return evaluate(theta, &grad);
}

double FullLikelihood::evaluate(const Vector& theta, Vector* grad) const {
  const double bad = -std::numeric_limits<double>::infinity();
  std::optional<UnpackedParams> decoded;
  try {
    decoded.emplace(unpack(PackedParams{layout_, theta}));
  } catch (const Error&) {
    if (grad) grad->setConstant(layout_.size(), std::numeric_limits<double>::quiet_NaN());
    return bad;
  }
  const MixtureParams& params = decoded->params;
  const Vector& beta = decoded->coeffs->beta();
  const int g = layout_.g;
  const int p = layout_.p;
  const int t_max = spec_.num_terms();
  const Matrix& x = data_.features();
  const auto n = static_cast<Eigen::Index>(data_.size());

  const Matrix lj = kernels::log_joint(params, x);
  const kernels::Posterior post = kernels::posterior(lj);
  const Vector entropy = kernels::row_entropies(post.tau);

  double ignorance = 0.0;
  double selection = 0.0;
  Matrix w;  // d(objective) / d(log_joint(i, h))
  Vector grad_beta;
  if (grad) {
    w.resize(n, g);
    grad_beta = Vector::Zero(t_max + 1);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& label = data_.label(static_cast<std::size_t>(i));
    const double e = entropy[i];
    const Vector b = basis_expand(e, spec_);
    const double eta = beta[0] + beta.tail(t_max).dot(b);
    ignorance += label ? lj(i, *label) : post.log_marginal[i];
    selection += label ? log_expit(eta) : log_expit(-eta);
    if (!grad) continue;

    const double resid = (label ? 1.0 : 0.0) - expit(eta);
    grad_beta[0] += resid;
    grad_beta.tail(t_max) += resid * b;
    const double c = resid * beta.tail(t_max).dot(basis_derivative(e, spec_));
    for (int h = 0; h < g; ++h) {
      const double t = post.tau(i, h);
      const double base = label ? (*label == h ? 1.0 : 0.0) : t;
      // de/dl_h = -tau_h (log tau_h + e)
      const double de = t > 0.0 ? -t * (post.log_tau(i, h) + e) : 0.0;
      w(i, h) = base + c * de;
    }
  }
  const double total = selection + ignorance;
  if (!grad) return std::isfinite(total) ? total : bad;

  Vector& out = *grad;
  out.setZero(layout_.size());
  const Vector mass = w.colwise().sum().transpose();
  const double mass_total = mass.sum();
  for (int h = 0; h < g - 1; ++h) out[h] = mass[h] - params.weight(h) * mass_total;

  for (int h = 0; h < g; ++h) {
    const Matrix& factor = params.cov_factor(h);
    const auto lower = factor.triangularView<Eigen::Lower>();
    Vector grad_mean = Vector::Zero(p);
    Matrix outer = Matrix::Zero(p, p);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vector y = lower.solve(x.row(i).transpose() - params.mean(h));
      const Vector v = lower.transpose().solve(y);
      grad_mean += w(i, h) * v;
      outer += w(i, h) * (v * y.transpose());
    }
    out.segment(layout_.mean_offset() + h * p, p) = grad_mean;
    int k = layout_.chol_offset() + h * layout_.chol_block();
    for (int r = 0; r < p; ++r) {
      for (int c = 0; c <= r; ++c) {
        // d/dL = v y^T - diag(1/L_jj); diagonal entries are stored as logs.
        out[k++] = r == c ? (outer(r, r) - mass[h] / factor(r, r)) * factor(r, r) : outer(r, c);
      }
    }
  }
  out.tail(t_max + 1) = grad_beta;
  return std::isfinite(total) ? total : bad;
}

FitReport fit_full(const SemiDataset& data, int g, const SelectionSpec& spec,
                   const FullFitOptions& options) {
  check_spec(spec, g);
  return fit_full(data, spec, em_fit_ignorance(data, g, options.seed, options.em), options);
}

FitReport fit_full(const SemiDataset& data, const SelectionSpec& spec, const FitReport& init,
                   const FullFitOptions& options) {
  const int g = init.params.num_components();
  check_spec(spec, g);
  ProfileResult start = log_profile_likelihood(init.params, spec, data);

  if (data.num_labelled() == 0 || data.num_unlabelled() == 0) {
    FitReport report = init;
    report.coeffs = start.coeffs;
    report.objective = start.value;
    report.trace = {start.value};
    report.iterations = 0;
    report.notes.insert(report.notes.end(), start.notes.begin(), start.notes.end());
    return report;
  }

  const FullLikelihood likelihood(data, spec, g);
  const PackedParams packed = pack(init.params, start.coeffs);
  const GradientObjective negated = [&likelihood](const Vector& theta, Vector* grad) {
    if (!grad) return -likelihood.value(theta);
    const double v = likelihood.value_and_gradient(theta, *grad);
    *grad = -*grad;
    return -v;
  };
  BfgsOptions bfgs;
  bfgs.grad_tol = options.tol;
  bfgs.max_iter = options.max_iter;
  const BfgsResult result = minimize_bfgs(negated, packed.theta, bfgs);

  UnpackedParams best = unpack(PackedParams{packed.layout, result.x});
  FitReport report{std::move(best.params), std::move(best.coeffs), -result.value, {}, result.converged,
                   result.iterations, init.notes};
  report.trace.reserve(result.trace.size());
  for (double v : result.trace) report.trace.push_back(-v);
  if (!result.converged) report.notes.push_back("quasi-Newton: " + result.message);
  return report;
}

}  // namespace misslab
