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

#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "misslab/error.hpp"
#include "misslab/simulation.hpp"
#include "misslab/study.hpp"

using namespace misslab;
using namespace misslab::testing;

TEST_CASE("random streams are reproducible and distinct") {
  Rng a = make_stream(5, 3);
  Rng b = make_stream(5, 3);
  Rng c = make_stream(5, 4);
  Rng d = make_stream(6, 3);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != d());
}

TEST_CASE("mixture sampling") {
  Rng rng = make_stream(1, 0);
  const LabelledSample empty = generate_mixture_sample(default_benchmark_mixture(), 0, rng);
  CHECK(empty.features.rows() == 0);
  CHECK(empty.labels.empty());

  const MixtureParams single(Vector::Ones(1), {{Vector::Zero(2), Matrix::Identity(2, 2)}});
  const LabelledSample s = generate_mixture_sample(single, 100000, rng);
  const Vector mean = s.features.colwise().mean().transpose();
  const Matrix c = s.features.rowwise() - mean.transpose();
  CHECK(mean.cwiseAbs().maxCoeff() < 0.05);
  CHECK(max_abs_diff(c.transpose() * c / 1e5, Matrix::Identity(2, 2)) < 0.05);

  const LabelledSample t = generate_mixture_sample(default_benchmark_mixture(), 100000, rng);
  double ones = 0;
  for (int z : t.labels) ones += z;
  CHECK(std::abs(ones / 1e5 - 0.5) < 0.01);
}

TEST_CASE("entropy labelling probabilities") {
  const MixtureParams truth = default_benchmark_mixture();
  Rng rng = make_stream(2, 0);
  const LabelledSample s = generate_mixture_sample(truth, 50, rng);
  const Vector flat = entropy_labelling_probabilities(s.features, truth, 0.0, 0.0);
  CHECK((flat.array() == 0.5).all());
  const Vector p = entropy_labelling_probabilities(s.features, truth, 1.0, -5.0);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double e = shannon_entropy(responsibilities(s.features.row(i).transpose(), truth));
    CHECK(p[i] == doctest::Approx(1.0 / (1.0 + std::exp(-(1.0 - 5.0 * e)))).epsilon(1e-12));
  }
  CHECK(expit(1.0) == doctest::Approx(0.731059).epsilon(1e-6));
  CHECK(expit(1.0 - 5.0 * std::log(2.0)) == doctest::Approx(0.0784).epsilon(1e-3));
}

TEST_CASE("missingness mechanisms") {
  const MixtureParams truth = default_benchmark_mixture();
  Rng rng = make_stream(3, 0);
  const LabelledSample s = generate_mixture_sample(truth, 100000, rng);
  CHECK(apply_mcar(s.features, s.labels, 1.0, rng).num_unlabelled() == 0);
  CHECK(apply_mcar(s.features, s.labels, 0.0, rng).num_labelled() == 0);
  const SemiDataset kept = apply_mcar(s.features, s.labels, 0.7, rng);
  CHECK(std::abs(static_cast<double>(kept.num_labelled()) / 1e5 - 0.7) < 0.01);
  for (std::size_t i : kept.labelled_rows()) CHECK(*kept.label(i) == s.labels[i]);

  const SemiDataset ent = apply_entropy_missingness(s.features, s.labels, truth, 1.0, -5.0, rng);
  const Vector p = entropy_labelling_probabilities(s.features, truth, 1.0, -5.0);
  const double expected = p.mean();
  const double se = std::sqrt((p.array() * (1.0 - p.array())).sum()) / 1e5;
  CHECK(std::abs(static_cast<double>(ent.num_labelled()) / 1e5 - expected) < 3.0 * se);
  CHECK_THROWS_AS(apply_mcar(s.features, s.labels, 1.5, rng), InputError);
}

TEST_CASE("benchmark configuration validation") {
  BenchConfig c;
  CHECK_NOTHROW(c.validate());
  c.replications = 0;
  CHECK_THROWS_AS(c.validate(), InputError);
  c = BenchConfig{};
  c.alpha_grid = {0.5, 1.2};
  CHECK_THROWS_AS(c.validate(), InputError);
  c = BenchConfig{};
  c.n_train = 1;
  CHECK_THROWS_AS(c.validate(), InputError);
  CHECK(default_alpha_grid().size() == 19);
}

TEST_CASE("small benchmark run") {
  BenchConfig c;
  c.replications = 3;
  c.n_train = 200;
  c.n_test = 300;
  c.alpha_grid = {0.5};
  c.mechanism = Mechanism::mcar(1.0);
  const BenchResult r = run_benchmark(c, 1);
  CHECK(r.estimators.size() == 4);
  const auto& ign = r.find("ignorance");
  const auto& half = r.find("fsc", 0.5);
  for (int k = 0; k < 3; ++k) {
    CHECK(std::abs(ign.ari[static_cast<std::size_t>(k)] - half.ari[static_cast<std::size_t>(k)]) < 1e-6);
    CHECK(std::abs(ign.log_loss[static_cast<std::size_t>(k)] - half.log_loss[static_cast<std::size_t>(k)]) < 1e-6);
  }
  CHECK(r.find("truth").failures == 0);
  CHECK_THROWS_AS(r.find("nope"), InputError);

  const BenchResult again = run_benchmark(c, 3);
  CHECK(again.replication_seeds == r.replication_seeds);
  for (std::size_t s = 0; s < r.estimators.size(); ++s) {
    CHECK(again.estimators[s].ari == r.estimators[s].ari);
    CHECK(again.estimators[s].log_loss == r.estimators[s].log_loss);
  }
}

TEST_CASE("truth has the lowest expected log loss") {
  BenchConfig c;
  c.replications = 8;
  c.alpha_grid = {0.2, 0.5, 0.8};
  const BenchResult r = run_benchmark(c);
  const auto& truth = r.find("truth");
  for (const auto& e : r.estimators) {
    if (e.name == "truth") continue;
    const PairedDifference d = paired_difference(truth.log_loss, e.log_loss);
    CHECK(d.mean <= 2.0 * d.se);
  }
}

TEST_CASE("paired differences") {
  const PairedDifference d = paired_difference({1.0, 2.0, NAN, 4.0}, {0.0, 1.0, 1.0, 2.0});
  CHECK(d.count == 3);
  CHECK(d.mean == doctest::Approx(4.0 / 3.0));
  CHECK(d.se == doctest::Approx(std::sqrt((1.0 / 9 + 1.0 / 9 + 4.0 / 9) / 2.0 / 3.0)));
}
