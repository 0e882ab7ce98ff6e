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

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace misslab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

/// Mean and covariance of one multivariate Gaussian component.
struct GaussianComponent {
  Vector mean;
  Matrix cov;
};

/// Parameters of a finite Gaussian mixture: weights and components.
///
/// Instances are immutable and always valid: the constructor checks that the
/// weights form a strictly positive probability vector (sum within 1e-12),
/// that all components share one dimension, and that every covariance is
/// symmetric and positive definite. The lower Cholesky factor and log
/// determinant of each covariance are cached.
class MixtureParams {
 public:
  MixtureParams(Vector weights, std::vector<GaussianComponent> components);

  int num_components() const { return static_cast<int>(components_.size()); }
  int dim() const { return static_cast<int>(components_.front().mean.size()); }

  const Vector& weights() const { return weights_; }
  double weight(int h) const { return weights_[h]; }
  const GaussianComponent& component(int h) const { return components_[h]; }
  const Vector& mean(int h) const { return components_[h].mean; }
  const Matrix& cov(int h) const { return components_[h].cov; }

  /// Lower-triangular L with cov(h) = L L^T.
  const Matrix& cov_factor(int h) const { return factors_[h]; }
  double log_det(int h) const { return log_dets_[h]; }

  /// log pi_h + log f(x; theta_h).
  double log_joint(int h, const VectorRef& x) const;

  /// Component h of the result is component order[h] of this mixture.
  MixtureParams permuted(std::span<const int> order) const;

  friend bool operator==(const MixtureParams& a, const MixtureParams& b);

 private:
  Vector weights_;
  std::vector<GaussianComponent> components_;
  std::vector<Matrix> factors_;
  std::vector<double> log_dets_;
};

/// Features with partially observed class labels.
///
/// Labels are zero-based class indices; a missing label marks an unlabelled
/// row. The labelling indicator r_i is derived from label presence, so the
/// two can never disagree.
class SemiDataset {
 public:
  SemiDataset() = default;
  SemiDataset(Matrix features, std::vector<std::optional<int>> labels);

  std::size_t size() const { return labels_.size(); }
  int dim() const { return static_cast<int>(features_.cols()); }
  const Matrix& features() const { return features_; }
  auto row(std::size_t i) const { return features_.row(static_cast<Eigen::Index>(i)); }
  const std::optional<int>& label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::optional<int>>& labels() const { return labels_; }
  bool labelled(std::size_t i) const { return labels_[i].has_value(); }

  std::size_t num_labelled() const { return labelled_rows_.size(); }
  std::size_t num_unlabelled() const { return unlabelled_rows_.size(); }
  const std::vector<std::size_t>& labelled_rows() const { return labelled_rows_; }
  const std::vector<std::size_t>& unlabelled_rows() const { return unlabelled_rows_; }

  /// Largest label present, or -1 when no row is labelled.
  int max_label() const;

 private:
  Matrix features_;
  std::vector<std::optional<int>> labels_;
  std::vector<std::size_t> labelled_rows_;
  std::vector<std::size_t> unlabelled_rows_;
};

/// Log density of N(mean, cov) at x, via a Cholesky factorization.
/// Throws FactorizationError if cov is not positive definite.
double log_component_density(const VectorRef& x, const VectorRef& mean, const Matrix& cov);

/// Numerically stable log(sum(exp(v))).
double log_sum_exp(const VectorRef& v);

/// Posterior class probabilities tau_h(x), computed in log space.
Vector responsibilities(const VectorRef& x, const MixtureParams& params);

/// -sum tau_h log tau_h with 0 log 0 = 0.
double shannon_entropy(const VectorRef& tau);

/// Renyi entropy of order gamma (gamma >= 0, gamma != 1).
double renyi_entropy(const VectorRef& tau, double gamma);

/// Lower clamp applied to the entropy before the logit transform.
inline constexpr double kEntropyClamp = 1e-10;

/// logit(e / log g), with e clamped to [eps, log g - eps]. Requires g >= 2.
double transformed_entropy(double e, int g);

/// d/de of transformed_entropy; zero where the clamp is active.
double transformed_entropy_derivative(double e, int g);

/// Sum over labelled rows of log pi_z + log f(x; theta_z).
double labelled_block_log_likelihood(const MixtureParams& params, const SemiDataset& data);

/// Sum over unlabelled rows of log sum_h pi_h f(x; theta_h).
double unlabelled_block_log_likelihood(const MixtureParams& params, const SemiDataset& data);

/// The ignorance log-likelihood: labelled block plus unlabelled block.
double log_ignorance_likelihood(const MixtureParams& params, const SemiDataset& data);

/// Throws InputError unless data's dimension and labels are compatible with params.
void check_compatible(const MixtureParams& params, const SemiDataset& data);

}  // namespace misslab
