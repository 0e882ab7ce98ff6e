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

#include "misslab/study.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <omp.h>

#include "misslab/error.hpp"
#include "misslab/fsc.hpp"
#include "misslab/joint.hpp"
#include "misslab/metrics.hpp"

namespace misslab {

SemiDataset Mechanism::apply(const LabelledSample& sample, const MixtureParams& truth, Rng& rng) const {
  if (kind == Kind::mcar) return apply_mcar(sample.features, sample.labels, keep_prob, rng);
  return apply_entropy_missingness(sample.features, sample.labels, truth, beta0, beta1, rng);
}

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 19; ++k) grid.push_back(k * 0.05);
  return grid;
}

void BenchConfig::validate() const {
  if (replications < 1) throw InputError("replications must be at least 1");
  if (n_train < true_params.num_components()) throw InputError("n_train must be at least g");
  if (n_test < 2) throw InputError("n_test must be at least 2");
  for (double a : alpha_grid) {
    if (!(a >= 0.0 && a <= 1.0)) throw InputError("alpha grid entries must lie in [0, 1]");
  }
  if (mechanism.kind == Mechanism::Kind::mcar && !(mechanism.keep_prob >= 0.0 && mechanism.keep_prob <= 1.0)) {
    throw InputError("keep probability must lie in [0, 1]");
  }
}

std::string EstimatorRuns::label() const {
  if (!alpha) return name;
  std::ostringstream s;
  s << name << "@" << *alpha;
  return s.str();
}

const EstimatorRuns& BenchResult::find(const std::string& name, std::optional<double> alpha) const {
  for (const auto& e : estimators) {
    if (e.name != name) continue;
    if (!alpha && !e.alpha) return e;
    if (alpha && e.alpha && std::abs(*alpha - *e.alpha) < 1e-12) return e;
  }
  throw InputError("no estimator named " + name);
}

PairedDifference paired_difference(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (std::isfinite(a[i]) && std::isfinite(b[i])) d.push_back(a[i] - b[i]);
  }
  PairedDifference out;
  out.count = static_cast<int>(d.size());
  if (d.empty()) return out;
  double sum = 0.0;
  for (double v : d) sum += v;
  out.mean = sum / static_cast<double>(d.size());
  if (d.size() > 1) {
    double ss = 0.0;
    for (double v : d) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / static_cast<double>(d.size() - 1) / static_cast<double>(d.size()));
  }
  return out;
}

namespace {

struct Outcome {
  double ari = std::numeric_limits<double>::quiet_NaN();
  double log_loss = std::numeric_limits<double>::quiet_NaN();
  bool failed = true;
  bool converged = false;
  std::string error;
  std::vector<double> beta;
};

struct Slot {
  std::string name;
  std::optional<double> alpha;
};

void summarize(const std::vector<double>& values, const std::vector<bool>& failed, double& mean,
               double& se) {
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!failed[i]) {
      sum += values[i];
      ++count;
    }
  }
  mean = count > 0 ? sum / count : std::numeric_limits<double>::quiet_NaN();
  se = 0.0;
  if (count > 1) {
    double ss = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!failed[i]) ss += (values[i] - mean) * (values[i] - mean);
    }
    se = std::sqrt(ss / (count - 1) / count);
  }
}

std::vector<Outcome> run_replication(const BenchConfig& config, std::uint64_t rep_seed,
                                     std::size_t num_slots) {
  const MixtureParams& truth = config.true_params;
  const int g = truth.num_components();
  std::vector<Outcome> out(num_slots);

  Rng rng(rep_seed);
  const LabelledSample train = generate_mixture_sample(truth, static_cast<std::size_t>(config.n_train), rng);
  const LabelledSample test = generate_mixture_sample(truth, static_cast<std::size_t>(config.n_test), rng);
  const SemiDataset data = config.mechanism.apply(train, truth, rng);

  auto score = [&](Outcome& o, const MixtureParams& params, bool converged) {
    const std::vector<int> alignment = align_components(params, truth);
    o.ari = adjusted_rand_index(test.labels, predict_classes(params, test.features));
    o.log_loss = log_loss(params, test.features, test.labels, alignment);
    o.failed = false;
    o.converged = converged;
  };
  auto guarded = [](Outcome& o, auto&& body) {
    try {
      body();
    } catch (const std::exception& ex) {
      o = Outcome{};
      o.error = ex.what();
    }
  };

  guarded(out[0], [&] { score(out[0], truth, true); });

  std::optional<MixtureParams> init;
  std::optional<FitReport> ignorance;
  guarded(out[1], [&] {
    init = initialize_mixture(data, g, rep_seed);
    ignorance = em_fit_ignorance(data, g, *init, config.em);
    score(out[1], ignorance->params, ignorance->converged);
  });
  guarded(out[2], [&] {
    if (!ignorance) throw NumericalError("no ignorance fit to start from");
    FullFitOptions opts;
    opts.tol = config.full_tol;
    opts.max_iter = config.full_max_iter;
    opts.em = config.em;
    const FitReport full = fit_full(data, config.basis, *ignorance, opts);
    score(out[2], full.params, full.converged);
    if (full.coeffs) {
      const Vector& b = full.coeffs->beta();
      out[2].beta.assign(b.data(), b.data() + b.size());
    }
  });
  for (std::size_t k = 0; k < config.alpha_grid.size(); ++k) {
    Outcome& o = out[3 + k];
    guarded(o, [&] {
      if (!init) throw NumericalError("no initialization available");
      const FitReport fit = fit_fsc(data, g, FscWeight(config.alpha_grid[k]), *init, config.em);
      score(o, fit.params, fit.converged);
    });
  }
  return out;
}

}  // namespace

BenchResult run_benchmark(const BenchConfig& config, int threads) {
  config.validate();
  if (config.basis.family == BasisFamily::transformed_polynomial &&
      config.basis.classes != config.true_params.num_components()) {
    throw InputError("transformed entropy basis was built for a different number of classes");
  }
  const int reps = config.replications;
  std::vector<Slot> slots{{"truth", std::nullopt}, {"ignorance", std::nullopt}, {"full", std::nullopt}};
  for (double a : config.alpha_grid) slots.push_back({"fsc", a});

  BenchResult result;
  result.replication_seeds.resize(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    result.replication_seeds[static_cast<std::size_t>(r)] =
        make_stream(config.seed, static_cast<std::uint64_t>(r))();
  }

  std::vector<std::vector<Outcome>> outcomes(static_cast<std::size_t>(reps));
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(team) if (team != 1)
  for (int r = 0; r < reps; ++r) {
    outcomes[static_cast<std::size_t>(r)] =
        run_replication(config, result.replication_seeds[static_cast<std::size_t>(r)], slots.size());
  }

  for (std::size_t s = 0; s < slots.size(); ++s) {
    EstimatorRuns runs;
    runs.name = slots[s].name;
    runs.alpha = slots[s].alpha;
    for (int r = 0; r < reps; ++r) {
      const Outcome& o = outcomes[static_cast<std::size_t>(r)][s];
      runs.ari.push_back(o.ari);
      runs.log_loss.push_back(o.log_loss);
      runs.failed.push_back(o.failed);
      runs.converged.push_back(o.converged);
      runs.errors.push_back(o.error);
      runs.beta.push_back(o.beta);
      if (o.failed) ++runs.failures;
      if (!o.failed && !o.converged) ++runs.nonconverged;
    }
    summarize(runs.ari, runs.failed, runs.mean_ari, runs.se_ari);
    summarize(runs.log_loss, runs.failed, runs.mean_log_loss, runs.se_log_loss);
    result.estimators.push_back(std::move(runs));
  }
  return result;
}

}  // namespace misslab
