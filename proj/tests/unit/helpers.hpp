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

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "misslab/mixture.hpp"
#include "misslab/simulation.hpp"

namespace misslab::testing {

inline Matrix random_spd(int p, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  Matrix a(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) a(i, j) = z(rng);
  }
  Matrix s = a * a.transpose() / p + 0.5 * Matrix::Identity(p, p);
  return 0.5 * (s + s.transpose());
}

inline MixtureParams random_mixture(int g, int p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.5, 2.0);
  std::normal_distribution<double> z;
  Vector w(g);
  for (int h = 0; h < g; ++h) w[h] = u(rng);
  w /= w.sum();
  std::vector<GaussianComponent> comps;
  for (int h = 0; h < g; ++h) {
    Vector m(p);
    for (int j = 0; j < p; ++j) m[j] = 2.0 * z(rng);
    comps.push_back({m, random_spd(p, rng)});
  }
  return MixtureParams(w, std::move(comps));
}

/// Sample from params; each row labelled with probability keep.
inline SemiDataset random_dataset(const MixtureParams& params, std::size_t n, double keep, std::uint64_t seed) {
  Rng rng = make_stream(seed, 99);
  const LabelledSample s = generate_mixture_sample(params, n, rng);
  return apply_mcar(s.features, s.labels, keep, rng);
}

inline SemiDataset make_dataset(std::vector<std::vector<double>> rows, std::vector<std::optional<int>> labels) {
  Matrix x(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 1 : static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return SemiDataset(std::move(x), std::move(labels));
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace misslab::testing
