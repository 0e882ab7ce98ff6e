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

#include "misslab/simulation.hpp"

#include <optional>

#include "misslab/error.hpp"
#include "misslab/kernels.hpp"
#include "misslab/selection.hpp"

namespace misslab {

Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

MixtureParams default_benchmark_mixture() {
  Matrix cov1(2, 2);
  cov1 << 1.0, 0.7, 0.7, 1.0;
  Vector mu2(2);
  mu2 << 0.0, 3.0;
  return MixtureParams(Vector::Constant(2, 0.5),
                       {{Vector::Zero(2), cov1}, {mu2, Matrix::Identity(2, 2)}});
}

LabelledSample generate_mixture_sample(const MixtureParams& params, std::size_t n, Rng& rng) {
  const int g = params.num_components();
  const int p = params.dim();
  LabelledSample out{Matrix(static_cast<Eigen::Index>(n), p), std::vector<int>(n)};
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(p);
  for (std::size_t i = 0; i < n; ++i) {
    double u = unif(rng);
    int h = 0;
    for (; h < g - 1; ++h) {
      u -= params.weight(h);
      if (u < 0.0) break;
    }
    for (int k = 0; k < p; ++k) z[k] = normal(rng);
    out.labels[i] = h;
    out.features.row(static_cast<Eigen::Index>(i)) =
        (params.mean(h) + params.cov_factor(h).triangularView<Eigen::Lower>() * z).transpose();
  }
  return out;
}

Vector entropy_labelling_probabilities(const Matrix& features, const MixtureParams& params,
                                       double beta0, double beta1) {
  const Vector e = kernels::row_entropies(kernels::posterior(kernels::log_joint(params, features)).tau);
  Vector prob(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) prob[i] = expit(beta0 + beta1 * e[i]);
  return prob;
}

namespace {

SemiDataset mask_labels(const Matrix& features, const std::vector<int>& labels, const Vector& keep,
                        Rng& rng) {
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw InputError("features and labels differ in length");
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::optional<int>> kept(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (unif(rng) < keep[static_cast<Eigen::Index>(i)]) kept[i] = labels[i];
  }
  return SemiDataset(features, std::move(kept));
}

}  // namespace

SemiDataset apply_entropy_missingness(const Matrix& features, const std::vector<int>& labels,
                                      const MixtureParams& true_params, double beta0, double beta1,
                                      Rng& rng) {
  return mask_labels(features, labels,
                     entropy_labelling_probabilities(features, true_params, beta0, beta1), rng);
}

SemiDataset apply_mcar(const Matrix& features, const std::vector<int>& labels, double keep_prob,
                       Rng& rng) {
  if (!(keep_prob >= 0.0 && keep_prob <= 1.0)) throw InputError("keep probability must lie in [0, 1]");
  return mask_labels(features, labels, Vector::Constant(features.rows(), keep_prob), rng);
}

}  // namespace misslab
