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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "misslab/error.hpp"
#include "misslab/metrics.hpp"
#include "misslab/simulation.hpp"

using namespace misslab;
using namespace misslab::testing;

namespace {

// ARI from the pair-counting definition: enumerate all pairs.
double brute_force_ari(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = a.size();
  long both = 0, in_a = 0, in_b = 0, pairs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool sa = a[i] == a[j];
      const bool sb = b[i] == b[j];
      both += sa && sb;
      in_a += sa;
      in_b += sb;
      ++pairs;
    }
  }
  // (index - expected) / (max - expected), scaled by 2 * pairs to stay in integers
  const long num = 2 * pairs * both - 2 * in_a * in_b;
  const long den = pairs * (in_a + in_b) - 2 * in_a * in_b;
  if (den == 0) return 1.0;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

TEST_CASE("class prediction") {
  const std::vector<GaussianComponent> same{{Vector::Zero(2), Matrix::Identity(2, 2)}, {Vector::Zero(2), Matrix::Identity(2, 2)}};
  Vector w(2);
  w << 0.5, 0.5;
  const MixtureParams twin(w, same);
  Vector x(2);
  x << 0.3, -1.0;
  CHECK(predict_class(twin, x) == 0);
  const MixtureParams truth = default_benchmark_mixture();
  x << 0.0, 6.0;
  CHECK(predict_class(truth, x) == 1);
  x << 0.0, -2.0;
  CHECK(predict_class(truth, x) == 0);
  const MixtureParams single(Vector::Ones(1), {{Vector::Zero(2), Matrix::Identity(2, 2)}});
  CHECK(predict_class(single, x) == 0);
}

TEST_CASE("adjusted Rand index examples") {
  const std::vector<int> t{1, 1, 2, 2};
  CHECK(adjusted_rand_index(t, t) == 1.0);
  CHECK(adjusted_rand_index(t, std::vector<int>{2, 2, 1, 1}) == 1.0);
  const std::vector<int> crossed{1, 2, 1, 2};
  CHECK(adjusted_rand_index(t, crossed) == brute_force_ari(t, crossed));
  CHECK(adjusted_rand_index(t, crossed) == -0.5);
  CHECK_THROWS_AS(adjusted_rand_index(std::vector<int>{1}, std::vector<int>{1}), InputError);
  CHECK_THROWS_AS(adjusted_rand_index(t, std::vector<int>{1, 2}), InputError);
}

TEST_CASE("adjusted Rand index equals pair enumeration") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + trial % 11;
    const int ka = 1 + trial % 4;
    const int kb = 1 + (trial / 4) % 4;
    std::vector<int> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    for (auto& v : a) v = std::uniform_int_distribution<int>(0, ka - 1)(rng);
    for (auto& v : b) v = std::uniform_int_distribution<int>(0, kb - 1)(rng);
    const double ari = adjusted_rand_index(a, b);
    CHECK(ari == brute_force_ari(a, b));
    // relabelling either side changes nothing
    std::vector<int> relabelled(b);
    for (auto& v : relabelled) v = 10 - 3 * v;
    CHECK(adjusted_rand_index(a, relabelled) == ari);
    CHECK(adjusted_rand_index(b, a) == ari);
  }
}

TEST_CASE("log loss") {
  const MixtureParams truth = default_benchmark_mixture();
  const std::vector<int> identity{0, 1};
  Matrix far(2, 2);
  far << -40.0, -40.0, 0.0, 60.0;
  CHECK(log_loss(truth, far, std::vector<int>{0, 1}, identity) < 1e-12);

  const std::vector<GaussianComponent> same{{Vector::Zero(2), Matrix::Identity(2, 2)}, {Vector::Zero(2), Matrix::Identity(2, 2)}};
  Vector w(2);
  w << 0.5, 0.5;
  const MixtureParams twin(w, same);
  Rng rng = make_stream(1, 1);
  const LabelledSample s = generate_mixture_sample(truth, 25, rng);
  CHECK(log_loss(twin, s.features, s.labels, identity) == doctest::Approx(25 * std::log(2.0)).epsilon(1e-13));

  const LabelledSample five = generate_mixture_sample(truth, 5, rng);
  double naive = 0.0;
  for (int b = 0; b < 5; ++b) {
    const Vector tau = responsibilities(five.features.row(b).transpose(), truth);
    naive -= std::log(tau[five.labels[static_cast<std::size_t>(b)]]);
  }
  CHECK(std::abs(log_loss(truth, five.features, five.labels, identity) - naive) < 1e-10);
  const std::vector<int> swapped{1, 0};
  CHECK(log_loss(truth.permuted(swapped), five.features, five.labels, swapped) == doctest::Approx(naive).epsilon(1e-12));
  CHECK_THROWS_AS(log_loss(truth, five.features, five.labels, std::vector<int>{0, 0}), InputError);
}

TEST_CASE("minimum cost assignment agrees with enumeration") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + trial % 6;
    Matrix cost(k, k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) cost(i, j) = trial % 3 == 0 ? std::floor(u(rng) / 3) : u(rng);
    }
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double total = 0.0;
      for (int i = 0; i < k; ++i) total += cost(i, perm[static_cast<std::size_t>(i)]);
      best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const std::vector<int> assignment = min_cost_assignment(cost);
    std::vector<int> sorted(assignment);
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < k; ++i) CHECK(sorted[static_cast<std::size_t>(i)] == i);
    double total = 0.0;
    for (int i = 0; i < k; ++i) total += cost(i, assignment[static_cast<std::size_t>(i)]);
    CHECK(total == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("component alignment") {
  const MixtureParams truth = default_benchmark_mixture();
  const std::vector<int> order{1, 0};
  CHECK(align_components(truth, truth) == std::vector<int>{0, 1});
  CHECK(align_components(truth.permuted(order), truth) == std::vector<int>{1, 0});
}
