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

#include "misslab/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "misslab/error.hpp"
#include "misslab/kernels.hpp"

namespace misslab {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;  // log(2 pi)

bool is_symmetric(const Matrix& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale) return false;
    }
  }
  return true;
}

// Throws FactorizationError unless cov is SPD; returns the lower factor.
Matrix cholesky_or_throw(const Matrix& cov) {
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw FactorizationError("covariance matrix is not positive definite");
  }
  Matrix factor = llt.matrixL();
  for (Eigen::Index j = 0; j < factor.rows(); ++j) {
    if (!(factor(j, j) > 0.0) || !std::isfinite(factor(j, j))) {
      throw FactorizationError("covariance matrix is not positive definite");
    }
  }
  return factor;
}

double log_det_from_factor(const Matrix& factor) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < factor.rows(); ++j) s += std::log(factor(j, j));
  return 2.0 * s;
}

}  // namespace

MixtureParams::MixtureParams(Vector weights, std::vector<GaussianComponent> components)
    : weights_(std::move(weights)), components_(std::move(components)) {
  if (components_.empty()) throw InputError("mixture needs at least one component");
  if (weights_.size() != static_cast<Eigen::Index>(components_.size())) {
    throw InputError("number of weights does not match number of components");
  }
  double total = 0.0;
  for (Eigen::Index h = 0; h < weights_.size(); ++h) {
    if (!(weights_[h] > 0.0) || !std::isfinite(weights_[h])) {
      throw InputError("mixture weights must be strictly positive");
    }
    total += weights_[h];
  }
  if (std::abs(total - 1.0) > 1e-12) throw InputError("mixture weights must sum to 1");

  const Eigen::Index p = components_.front().mean.size();
  if (p < 1) throw InputError("component dimension must be at least 1");
  factors_.reserve(components_.size());
  log_dets_.reserve(components_.size());
  for (const auto& c : components_) {
    if (c.mean.size() != p || c.cov.rows() != p || c.cov.cols() != p) {
      throw InputError("all components must share the same dimension");
    }
    if (!c.mean.allFinite() || !c.cov.allFinite()) {
      throw InputError("component parameters must be finite");
    }
    if (!is_symmetric(c.cov)) throw InputError("covariance matrix is not symmetric");
    factors_.push_back(cholesky_or_throw(c.cov));
    log_dets_.push_back(log_det_from_factor(factors_.back()));
  }
}

double MixtureParams::log_joint(int h, const VectorRef& x) const {
  const Vector y = factors_[h].triangularView<Eigen::Lower>().solve(x - components_[h].mean);
  return std::log(weights_[h]) - 0.5 * (dim() * kLog2Pi + log_dets_[h] + y.squaredNorm());
}

MixtureParams MixtureParams::permuted(std::span<const int> order) const {
  if (order.size() != components_.size()) throw InputError("permutation has the wrong length");
  Vector w(weights_.size());
  std::vector<GaussianComponent> comps;
  comps.reserve(order.size());
  for (std::size_t h = 0; h < order.size(); ++h) {
    w[static_cast<Eigen::Index>(h)] = weights_[order[h]];
    comps.push_back(components_[order[h]]);
  }
  return MixtureParams(std::move(w), std::move(comps));
}

bool operator==(const MixtureParams& a, const MixtureParams& b) {
  if (a.num_components() != b.num_components() || a.dim() != b.dim()) return false;
  if (a.weights_ != b.weights_) return false;
  for (int h = 0; h < a.num_components(); ++h) {
    if (a.mean(h) != b.mean(h) || a.cov(h) != b.cov(h)) return false;
  }
  return true;
}

SemiDataset::SemiDataset(Matrix features, std::vector<std::optional<int>> labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  if (static_cast<std::size_t>(features_.rows()) != labels_.size()) {
    throw InputError("feature rows and labels differ in length");
  }
  if (!features_.allFinite()) throw InputError("features must be finite");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i]) {
      if (*labels_[i] < 0) throw InputError("label index must be non-negative");
      labelled_rows_.push_back(i);
    } else {
      unlabelled_rows_.push_back(i);
    }
  }
}

int SemiDataset::max_label() const {
  int m = -1;
  for (const auto& l : labels_) {
    if (l) m = std::max(m, *l);
  }
  return m;
}

double log_component_density(const VectorRef& x, const VectorRef& mean, const Matrix& cov) {
  const Eigen::Index p = mean.size();
  if (x.size() != p || cov.rows() != p || cov.cols() != p) {
    throw InputError("dimension mismatch in log_component_density");
  }
  const Matrix factor = cholesky_or_throw(cov);
  const Vector y = factor.triangularView<Eigen::Lower>().solve(x - mean);
  return -0.5 * (static_cast<double>(p) * kLog2Pi + log_det_from_factor(factor) + y.squaredNorm());
}

double log_sum_exp(const VectorRef& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

Vector responsibilities(const VectorRef& x, const MixtureParams& params) {
  if (x.size() != params.dim()) throw InputError("dimension mismatch in responsibilities");
  const int g = params.num_components();
  Vector lj(g);
  for (int h = 0; h < g; ++h) lj[h] = params.log_joint(h, x);
  const double m = lj.maxCoeff();
  Vector tau = (lj.array() - m).exp();
  return tau / tau.sum();
}

double shannon_entropy(const VectorRef& tau) {
  if (tau.size() == 0) return 0.0;
  // The largest probability's term is -tau_k log tau_k = tau_k log1p(rest / tau_k),
  // with rest the sum of the others, so rows close to certainty keep their
  // relative accuracy.
  Eigen::Index top = 0;
  for (Eigen::Index h = 1; h < tau.size(); ++h) {
    if (tau[h] > tau[top]) top = h;
  }
  double rest = 0.0;
  double e = 0.0;
  for (Eigen::Index h = 0; h < tau.size(); ++h) {
    if (h == top || !(tau[h] > 0.0)) continue;
    rest += tau[h];
    e -= tau[h] * std::log(tau[h]);
  }
  if (tau[top] > 0.0) e += tau[top] * std::log1p(rest / tau[top]);
  return std::max(e, 0.0);
}

double renyi_entropy(const VectorRef& tau, double gamma) {
  if (!(gamma >= 0.0)) throw InputError("Renyi order must be non-negative");
  if (gamma == 1.0) throw InputError("Renyi order 1 is the Shannon entropy; use shannon_entropy");
  double s = 0.0;
  for (Eigen::Index h = 0; h < tau.size(); ++h) {
    // Order 0 counts the support, so zero-probability classes are skipped.
    if (tau[h] > 0.0) s += std::pow(tau[h], gamma);
  }
  return std::log(s) / (1.0 - gamma);
}

double transformed_entropy(double e, int g) {
  if (g < 2) throw InputError("transformed entropy needs at least two classes");
  const double log_g = std::log(static_cast<double>(g));
  const double clamped = std::clamp(e, kEntropyClamp, log_g - kEntropyClamp);
  const double u = clamped / log_g;
  return std::log(u / (1.0 - u));
}

double transformed_entropy_derivative(double e, int g) {
  if (g < 2) throw InputError("transformed entropy needs at least two classes");
  const double log_g = std::log(static_cast<double>(g));
  if (e <= kEntropyClamp || e >= log_g - kEntropyClamp) return 0.0;
  const double u = e / log_g;
  return 1.0 / (log_g * u * (1.0 - u));
}

void check_compatible(const MixtureParams& params, const SemiDataset& data) {
  if (data.size() > 0 && data.dim() != params.dim()) {
    throw InputError("dataset dimension " + std::to_string(data.dim()) +
                     " does not match mixture dimension " + std::to_string(params.dim()));
  }
  if (data.max_label() >= params.num_components()) {
    throw InputError("label " + std::to_string(data.max_label() + 1) + " is out of range 1.." +
                     std::to_string(params.num_components()));
  }
}

double labelled_block_log_likelihood(const MixtureParams& params, const SemiDataset& data) {
  check_compatible(params, data);
  double s = 0.0;
  for (std::size_t i : data.labelled_rows()) {
    s += params.log_joint(*data.label(i), data.row(i).transpose());
  }
  return s;
}

double unlabelled_block_log_likelihood(const MixtureParams& params, const SemiDataset& data) {
  check_compatible(params, data);
  if (data.num_unlabelled() == 0) return 0.0;
  const auto& rows = data.unlabelled_rows();
  Matrix x(static_cast<Eigen::Index>(rows.size()), data.dim());
  for (std::size_t k = 0; k < rows.size(); ++k) x.row(static_cast<Eigen::Index>(k)) = data.row(rows[k]);
  const auto post = kernels::posterior(kernels::log_joint(params, x));
  double s = 0.0;
  for (Eigen::Index k = 0; k < post.log_marginal.size(); ++k) s += post.log_marginal[k];
  return s;
}

double log_ignorance_likelihood(const MixtureParams& params, const SemiDataset& data) {
  return labelled_block_log_likelihood(params, data) + unlabelled_block_log_likelihood(params, data);
}

}  // namespace misslab
