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

#include "misslab/metrics.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "misslab/error.hpp"
#include "misslab/kernels.hpp"

namespace misslab {

int predict_class(const MixtureParams& params, const VectorRef& x) {
  const Vector tau = responsibilities(x, params);
  int best = 0;
  for (int h = 1; h < tau.size(); ++h) {
    if (tau[h] > tau[best]) best = h;
  }
  return best;
}

std::vector<int> predict_classes(const MixtureParams& params, const Matrix& x) {
  const Matrix tau = kernels::posterior(kernels::log_joint(params, x)).tau;
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    int best = 0;
    for (Eigen::Index h = 1; h < tau.cols(); ++h) {
      if (tau(i, h) > tau(i, best)) best = static_cast<int>(h);
    }
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

double adjusted_rand_index(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size()) throw InputError("label vectors differ in length");
  if (truth.size() < 2) throw InputError("adjusted Rand index needs at least two observations");
  using Wide = __int128;
  auto pairs = [](Wide k) -> Wide { return k * (k - 1) / 2; };

  std::map<std::pair<int, int>, long long> cells;
  std::map<int, long long> rows;
  std::map<int, long long> cols;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++cells[{truth[i], predicted[i]}];
    ++rows[truth[i]];
    ++cols[predicted[i]];
  }
  Wide index = 0;
  Wide a = 0;
  Wide b = 0;
  for (const auto& [key, count] : cells) index += pairs(count);
  for (const auto& [key, count] : rows) a += pairs(count);
  for (const auto& [key, count] : cols) b += pairs(count);
  const Wide total = pairs(static_cast<Wide>(truth.size()));

  // (index - ab/C) / ((a + b)/2 - ab/C), scaled by 2C to stay in integers.
  const Wide num = 2 * total * index - 2 * a * b;
  const Wide den = total * (a + b) - 2 * a * b;
  if (den == 0) return 1.0;
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

double log_loss(const MixtureParams& params, const Matrix& features, std::span<const int> labels,
                std::span<const int> alignment) {
  const int g = params.num_components();
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw InputError("features and labels differ in length");
  }
  if (alignment.size() != static_cast<std::size_t>(g)) throw InputError("alignment has the wrong length");
  std::vector<bool> seen(static_cast<std::size_t>(g), false);
  for (int a : alignment) {
    if (a < 0 || a >= g || seen[static_cast<std::size_t>(a)]) {
      throw InputError("alignment must be a permutation of the components");
    }
    seen[static_cast<std::size_t>(a)] = true;
  }
  const Matrix lj = kernels::log_joint(params, features);
  const kernels::Posterior post = kernels::posterior(lj);
  const double floor = std::log(1e-300);
  double loss = 0.0;
  for (std::size_t b = 0; b < labels.size(); ++b) {
    if (labels[b] < 0 || labels[b] >= g) throw InputError("test label out of range");
    const auto i = static_cast<Eigen::Index>(b);
    const double log_tau = lj(i, alignment[static_cast<std::size_t>(labels[b])]) - post.log_marginal[i];
    loss -= std::max(log_tau, floor);
  }
  return loss;
}

std::vector<int> min_cost_assignment(const Matrix& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw InputError("assignment cost matrix must be square");
  const double inf = std::numeric_limits<double>::infinity();
  // Potentials (u, v) and the column->row matching p, all 1-based with a
  // dummy column 0.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> result(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) result[static_cast<std::size_t>(p[j] - 1)] = j - 1;
  return result;
}

std::vector<int> align_components(const MixtureParams& fitted, const MixtureParams& truth) {
  const int g = truth.num_components();
  if (fitted.num_components() != g || fitted.dim() != truth.dim()) {
    throw InputError("cannot align mixtures of different shapes");
  }
  Matrix cost(g, g);
  for (int h = 0; h < g; ++h) {
    for (int k = 0; k < g; ++k) cost(h, k) = (truth.mean(h) - fitted.mean(k)).norm();
  }
  return min_cost_assignment(cost);
}

}  // namespace misslab
