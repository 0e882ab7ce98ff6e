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


// Acceptance suite. Prints one PASS/FAIL line per criterion; an optional
// argument restricts the run to a single criterion.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "misslab/cli.hpp"
#include "misslab/diagnostics.hpp"
#include "misslab/em.hpp"
#include "misslab/fsc.hpp"
#include "misslab/io.hpp"
#include "misslab/joint.hpp"
#include "misslab/metrics.hpp"
#include "misslab/packing.hpp"
#include "misslab/selection.hpp"
#include "misslab/simulation.hpp"
#include "misslab/study.hpp"

namespace {

using namespace misslab;

// Pinned tolerances.
constexpr double kEquivalenceTol = 1e-10;
constexpr double kParamAgreementTol = 1e-6;
constexpr double kGradientRelTol = 1e-5;
constexpr double kGradientStep = 1e-5;
constexpr double kLogisticTol = 1e-6;
constexpr double kSignificance = 0.05;
constexpr double kPowerFloor = 0.90;
constexpr double kLevelCeiling = 0.10;

struct Verdict {
  bool pass = true;
  std::string detail;
};

void check(Verdict& v, bool ok, const std::string& what) {
  if (!ok) v.pass = false;
  if (!v.detail.empty()) v.detail += "; ";
  v.detail += what + (ok ? "" : " [fail]");
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Matrix random_spd(int p, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  Matrix a(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) a(i, j) = z(rng);
  }
  Matrix s = a * a.transpose() / p + 0.5 * Matrix::Identity(p, p);
  return 0.5 * (s + s.transpose());
}

MixtureParams random_mixture(int g, int p, std::mt19937_64& rng) {
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

double param_distance(const MixtureParams& a, const MixtureParams& b) {
  double d = (a.weights() - b.weights()).cwiseAbs().maxCoeff();
  for (int h = 0; h < a.num_components(); ++h) {
    d = std::max(d, (a.mean(h) - b.mean(h)).cwiseAbs().maxCoeff());
    d = std::max(d, (a.cov(h) - b.cov(h)).cwiseAbs().maxCoeff());
  }
  return d;
}

// 1. Simulation-study ordering.
Verdict criterion1() {
  Verdict v;
  BenchConfig config;  // benchmark mixture, entropy mechanism (1, -5), seed 1
  config.alpha_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  const BenchResult r = run_benchmark(config);
  const EstimatorRuns& full = r.find("full");

  const EstimatorRuns* best_ari = nullptr;
  const EstimatorRuns* best_loss = nullptr;
  for (const auto& e : r.estimators) {
    if (e.name != "fsc") continue;
    if (!best_ari || e.mean_ari > best_ari->mean_ari) best_ari = &e;
    if (!best_loss || e.mean_log_loss < best_loss->mean_log_loss) best_loss = &e;
  }
  const PairedDifference ari = paired_difference(full.ari, best_ari->ari);
  const PairedDifference loss = paired_difference(best_loss->log_loss, full.log_loss);
  check(v, ari.mean > ari.se,
        "full ARI - best FSC ARI (" + best_ari->label() + ") = " + fmt(ari.mean) + ", SE " + fmt(ari.se));
  check(v, loss.mean > loss.se,
        "best FSC log loss (" + best_loss->label() + ") - full = " + fmt(loss.mean) + ", SE " + fmt(loss.se));

  const EstimatorRuns& half = r.find("fsc", 0.5);
  check(v, best_ari->alpha && *best_ari->alpha == 0.5,
        "best FSC ARI at " + best_ari->label() + " (" + fmt(best_ari->mean_ari) + " vs fsc@0.5 " +
            fmt(half.mean_ari) + ")");
  const double a01 = r.find("fsc", 0.1).mean_ari;
  const double a09 = r.find("fsc", 0.9).mean_ari;
  check(v, a01 < best_ari->mean_ari && a09 < best_ari->mean_ari,
        "fsc@0.1 " + fmt(a01) + ", fsc@0.9 " + fmt(a09) + " below best");
  return v;
}

// 2. FSC at alpha = 0.5 against the ignorance likelihood.
Verdict criterion2() {
  Verdict v;
  std::mt19937_64 rng(2002);
  double worst_obj = 0.0;
  double worst_param = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const int g = 2 + rep % 2;
    const int p = 1 + rep % 3;
    const MixtureParams truth = random_mixture(g, p, rng);
    Rng stream = make_stream(2002, static_cast<std::uint64_t>(rep));
    const LabelledSample s = generate_mixture_sample(truth, 300, stream);
    const SemiDataset data = apply_mcar(s.features, s.labels, 0.4, stream);

    const MixtureParams psi = random_mixture(g, p, rng);
    const double diff =
        std::abs(log_fsc_objective(psi, FscWeight(0.5), data) - 0.5 * log_ignorance_likelihood(psi, data));
    worst_obj = std::max(worst_obj, diff);

    const MixtureParams init = initialize_mixture(data, g, static_cast<std::uint64_t>(rep));
    const FitReport a = fit_fsc(data, g, FscWeight(0.5), init);
    const FitReport b = em_fit_ignorance(data, g, init);
    worst_param = std::max(worst_param, param_distance(a.params, b.params));
  }
  check(v, worst_obj < kEquivalenceTol, "max objective gap " + fmt(worst_obj));
  check(v, worst_param < kParamAgreementTol, "max parameter gap " + fmt(worst_param));
  return v;
}

// 3. Full-likelihood gradient against central differences.
Verdict criterion3() {
  Verdict v;
  std::mt19937_64 rng(3003);
  std::normal_distribution<double> z;
  const std::vector<SelectionSpec> specs = {SelectionSpec::identity(), SelectionSpec::polynomial(2),
                                            SelectionSpec::transformed_polynomial(2, 2)};
  double worst = 0.0;
  int points = 0;
  for (double keep : {1.0, 0.5}) {
    const MixtureParams truth = random_mixture(2, 2, rng);
    Rng stream = make_stream(3003, keep == 1.0 ? 0 : 1);
    const LabelledSample s = generate_mixture_sample(truth, 200, stream);
    const SemiDataset data = apply_mcar(s.features, s.labels, keep, stream);
    for (int k = 0; k < 20; ++k) {
      const SelectionSpec& spec = specs[static_cast<std::size_t>(k) % specs.size()];
      Vector beta(spec.num_terms() + 1);
      for (Eigen::Index t = 0; t < beta.size(); ++t) beta[t] = z(rng);
      const PackedParams packed = pack(random_mixture(2, 2, rng), SelectionCoeffs(beta));
      const FullLikelihood f(data, spec, 2);
      Vector grad;
      f.value_and_gradient(packed.theta, grad);
      Vector dir(packed.theta.size());
      for (Eigen::Index t = 0; t < dir.size(); ++t) dir[t] = z(rng);
      dir.normalize();
      const double analytic = grad.dot(dir);
      const double numeric = (f.value(packed.theta + kGradientStep * dir) -
                              f.value(packed.theta - kGradientStep * dir)) /
                             (2.0 * kGradientStep);
      const double scale = std::max({1.0, std::abs(analytic), std::abs(numeric)});
      worst = std::max(worst, std::abs(analytic - numeric) / scale);
      ++points;
    }
  }
  check(v, worst < kGradientRelTol, std::to_string(points) + " points, max relative error " + fmt(worst));
  return v;
}

// Brute-force oracles for criterion 4.

double brute_ari(const std::vector<int>& a, const std::vector<int>& b) {
  long long ss = 0, sd = 0, ds = 0, dd = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const bool sa = a[i] == a[j];
      const bool sb = b[i] == b[j];
      if (sa && sb) ++ss;
      else if (sa) ++sd;
      else if (sb) ++ds;
      else ++dd;
    }
  }
  const long long num = 2 * (ss * dd - sd * ds);
  const long long den = (ss + sd) * (sd + dd) + (ss + ds) * (ds + dd);
  if (den == 0) return 1.0;
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

double brute_d_plus(const std::vector<double>& l, const std::vector<double>& u) {
  double d = 0.0;
  std::vector<double> pooled = l;
  pooled.insert(pooled.end(), u.begin(), u.end());
  for (double t : pooled) {
    const auto fl = std::count_if(l.begin(), l.end(), [t](double x) { return x <= t; });
    const auto fu = std::count_if(u.begin(), u.end(), [t](double x) { return x <= t; });
    d = std::max(d, static_cast<double>(fl) / static_cast<double>(l.size()) -
                        static_cast<double>(fu) / static_cast<double>(u.size()));
  }
  return d;
}

double brute_u(const std::vector<double>& l, const std::vector<double>& u) {
  double count = 0.0;
  for (double x : u) {
    for (double y : l) count += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
  }
  return count;
}

// Plain Newton-Raphson for logistic regression with Gaussian elimination.
std::vector<double> newton_oracle(const std::vector<std::vector<double>>& x, const std::vector<double>& y) {
  const std::size_t k = x[0].size();
  std::vector<double> beta(k, 0.0);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<std::vector<double>> h(k, std::vector<double>(k + 1, 0.0));
    for (std::size_t i = 0; i < x.size(); ++i) {
      double eta = 0.0;
      for (std::size_t a = 0; a < k; ++a) eta += x[i][a] * beta[a];
      const double p = 1.0 / (1.0 + std::exp(-eta));
      for (std::size_t a = 0; a < k; ++a) {
        h[a][k] += x[i][a] * (y[i] - p);
        for (std::size_t b = 0; b < k; ++b) h[a][b] += x[i][a] * x[i][b] * p * (1.0 - p);
      }
    }
    for (std::size_t c = 0; c < k; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < k; ++r) {
        if (std::abs(h[r][c]) > std::abs(h[piv][c])) piv = r;
      }
      std::swap(h[c], h[piv]);
      for (std::size_t r = 0; r < k; ++r) {
        if (r == c) continue;
        const double f = h[r][c] / h[c][c];
        for (std::size_t j = c; j <= k; ++j) h[r][j] -= f * h[c][j];
      }
    }
    double step = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      const double s = h[a][k] / h[a][a];
      beta[a] += s;
      step = std::max(step, std::abs(s));
    }
    if (step < 1e-14) break;
  }
  return beta;
}

// 4. Exact small-instance oracles.
Verdict criterion4() {
  Verdict v;
  std::mt19937_64 rng(4004);
  int ari_miss = 0, d_miss = 0, u_miss = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const int n = std::uniform_int_distribution<int>(2, 10)(rng);
    std::uniform_int_distribution<int> cls(0, std::uniform_int_distribution<int>(0, 3)(rng));
    std::vector<int> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      a[static_cast<std::size_t>(i)] = cls(rng);
      b[static_cast<std::size_t>(i)] = cls(rng);
    }
    if (adjusted_rand_index(a, b) != brute_ari(a, b)) ++ari_miss;

    // Values on a coarse lattice so ties occur.
    std::uniform_int_distribution<int> lattice(0, 5);
    const int nl = std::uniform_int_distribution<int>(1, n - 1)(rng);
    EntropySplit split;
    for (int i = 0; i < n; ++i) {
      (i < nl ? split.labelled : split.unlabelled).push_back(0.1 * lattice(rng));
    }
    if (ks_one_sided(split).statistic != brute_d_plus(split.labelled, split.unlabelled)) ++d_miss;
    if (mann_whitney_u(split).statistic != brute_u(split.labelled, split.unlabelled)) ++u_miss;
  }
  check(v, ari_miss == 0, "ARI mismatches " + std::to_string(ari_miss) + "/100");
  check(v, d_miss == 0, "D+ mismatches " + std::to_string(d_miss) + "/100");
  check(v, u_miss == 0, "U mismatches " + std::to_string(u_miss) + "/100");

  const std::vector<double> labelled = {0.05, 0.10, 0.30, 0.55};
  const std::vector<double> unlabelled = {0.20, 0.45, 0.60, 0.68};
  const SelectionSpec spec = SelectionSpec::polynomial(2);
  const LogisticDesign design = build_design(labelled, unlabelled, spec);
  const SelectionCoeffs fitted = logistic_fit(design);
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (double e : labelled) {
    x.push_back({1.0, e, e * e});
    y.push_back(1.0);
  }
  for (double e : unlabelled) {
    x.push_back({1.0, e, e * e});
    y.push_back(0.0);
  }
  const std::vector<double> oracle = newton_oracle(x, y);
  double gap = 0.0;
  for (std::size_t t = 0; t < oracle.size(); ++t) {
    gap = std::max(gap, std::abs(fitted.beta()[static_cast<Eigen::Index>(t)] - oracle[t]));
  }
  check(v, gap < kLogisticTol, "logistic fit gap " + fmt(gap));
  return v;
}

// 5. MCAR sanity.
Verdict criterion5() {
  Verdict v;
  std::ifstream in(MISSLAB_PILOT_FIXTURE);
  if (!in) {
    check(v, false, "pilot fixture missing");
    return v;
  }
  const double bound = nlohmann::json::parse(in).at("mean_abs_beta1_bound").get<double>();

  BenchConfig config;
  config.mechanism = Mechanism::mcar(0.5);
  config.n_train = 1000;
  config.n_test = 2000;
  config.replications = 50;
  config.alpha_grid = {};
  config.seed = 5005;
  const BenchResult r = run_benchmark(config);
  const EstimatorRuns& full = r.find("full");
  const EstimatorRuns& ign = r.find("ignorance");
  const PairedDifference ari = paired_difference(full.ari, ign.ari);
  const PairedDifference loss = paired_difference(full.log_loss, ign.log_loss);
  check(v, std::abs(ari.mean) < 2.0 * ari.se || ari.mean == 0.0,
        "ARI diff " + fmt(ari.mean) + ", SE " + fmt(ari.se));
  check(v, std::abs(loss.mean) < 2.0 * loss.se || loss.mean == 0.0,
        "log loss diff " + fmt(loss.mean) + ", SE " + fmt(loss.se));

  double sum = 0.0;
  int count = 0;
  for (const auto& b : full.beta) {
    if (b.size() < 2) continue;
    sum += std::abs(b[1]);
    ++count;
  }
  const double mean_beta1 = count > 0 ? sum / count : std::numeric_limits<double>::infinity();
  check(v, mean_beta1 < bound, "mean |beta1| " + fmt(mean_beta1) + " vs bound " + fmt(bound));
  return v;
}

// 6. Mechanism calibration.
Verdict criterion6() {
  Verdict v;
  constexpr std::size_t kDraws = 100000;
  const MixtureParams truth = default_benchmark_mixture();
  Rng rng = make_stream(6006, 0);
  const LabelledSample s = generate_mixture_sample(truth, kDraws, rng);
  const SemiDataset data = apply_entropy_missingness(s.features, s.labels, truth, 1.0, -5.0, rng);
  double expected = 0.0;
  for (std::size_t i = 0; i < kDraws; ++i) {
    const double e = shannon_entropy(responsibilities(s.features.row(static_cast<Eigen::Index>(i)).transpose(), truth));
    expected += expit(1.0 - 5.0 * e);
  }
  expected /= static_cast<double>(kDraws);
  const double observed = static_cast<double>(data.num_labelled()) / static_cast<double>(kDraws);
  const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(kDraws));
  check(v, std::abs(observed - expected) < 3.0 * se,
        "labelled " + fmt(observed) + ", expected " + fmt(expected) + ", SE " + fmt(se));
  return v;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 7. Determinism of the benchmark command.
Verdict criterion7() {
  Verdict v;
  const std::filesystem::path dir = MISSLAB_ACCEPTANCE_TMP;
  std::filesystem::create_directories(dir);
  io::RunConfig config;
  config.n_train = 300;
  config.n_test = 500;
  config.replications = 12;
  config.alpha_grid = {0.3, 0.5, 0.7};
  io::write_text(dir / "bench_config.json", io::to_json(config).dump(2) + "\n");

  auto run = [&](const std::string& name, const std::string& threads) {
    const std::filesystem::path out = dir / (name + ".json");
    const int code = cli::run({"misslab", "benchmark", "--config", (dir / "bench_config.json").string(), "--seed",
                               "77", "--threads", threads, "--out", out.string()});
    return std::make_pair(code, slurp(out) + "\n--\n" + slurp(dir / (name + ".csv")));
  };
  const auto serial_a = run("serial_a", "1");
  const auto serial_b = run("serial_b", "1");
  const auto parallel = run("parallel", "4");
  check(v, serial_a.first == 0 && serial_b.first == 0 && parallel.first == 0, "exit codes zero");
  check(v, serial_a.second == serial_b.second, "repeat run identical");
  check(v, serial_a.second == parallel.second, "1 vs 4 threads identical");
  return v;
}

// 8. Diagnostics power and level.
Verdict criterion8() {
  Verdict v;
  const MixtureParams truth = default_benchmark_mixture();
  DiagnosticsOptions options;
  options.grid_points = 32;

  auto rejection_rate = [&](Mechanism mechanism, int runs, std::uint64_t seed) {
    int rejected = 0;
    for (int rep = 0; rep < runs; ++rep) {
      Rng rng = make_stream(seed, static_cast<std::uint64_t>(rep));
      const LabelledSample s = generate_mixture_sample(truth, 500, rng);
      const SemiDataset data = mechanism.apply(s, truth, rng);
      options.seed = static_cast<std::uint64_t>(rep);
      if (run_diagnostics(data, truth.num_components(), options).mann_whitney.p_value < kSignificance) ++rejected;
    }
    return static_cast<double>(rejected) / runs;
  };
  const double power = rejection_rate(Mechanism::entropy(1.0, -5.0), 50, 8008);
  const double level = rejection_rate(Mechanism::mcar(0.5), 200, 8009);
  check(v, power >= kPowerFloor, "entropy rejection rate " + fmt(power));
  check(v, level <= kLevelCeiling, "MCAR rejection rate " + fmt(level));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Verdict()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                          criterion5, criterion6, criterion7, criterion8};
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "usage: acceptance [criterion 1-%zu]\n", criteria.size());
      return 2;
    }
  }
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (only != 0 && static_cast<int>(k) + 1 != only) continue;
    Verdict verdict;
    try {
      verdict = criteria[k]();
    } catch (const std::exception& e) {
      verdict = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %zu: %s - %s\n", k + 1, verdict.pass ? "PASS" : "FAIL", verdict.detail.c_str());
    std::fflush(stdout);
    all = all && verdict.pass;
  }
  return all ? 0 : 1;
}
