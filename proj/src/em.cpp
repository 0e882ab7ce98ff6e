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

#include "misslab/em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "misslab/error.hpp"
#include "misslab/kernels.hpp"

namespace misslab {

namespace {

constexpr int kRestarts = 10;
constexpr int kLloydPasses = 20;

// Shifts cov by the smallest multiple lambda * 10^k of I that makes it
// factorizable with smallest eigenvalue >= lambda. Returns the shift used.
double regularize(Matrix& cov, double lambda) {
  const Eigen::Index p = cov.rows();
  double shift = 0.0;
  for (int attempt = 0; attempt < 40; ++attempt) {
    const Matrix candidate = cov + shift * Matrix::Identity(p, p);
    Eigen::LLT<Matrix> llt(candidate);
    if (llt.info() == Eigen::Success && candidate.allFinite()) {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(candidate, Eigen::EigenvaluesOnly);
      if (eig.eigenvalues().minCoeff() >= lambda) {
        cov = candidate;
        return shift;
      }
    }
    shift = shift == 0.0 ? lambda : shift * 10.0;
  }
  throw NumericalError("covariance could not be regularized");
}

void check_labels(const SemiDataset& data, int g) {
  if (g < 1) throw InputError("number of components must be at least 1");
  if (data.size() < static_cast<std::size_t>(g)) {
    throw InputError("need at least as many rows as components");
  }
  if (data.max_label() >= g) {
    throw InputError("label " + std::to_string(data.max_label() + 1) + " is out of range 1.." +
                     std::to_string(g));
  }
}

Matrix biased_covariance(const Matrix& x, const Vector& mean) {
  const Matrix centered = x.rowwise() - mean.transpose();
  return centered.transpose() * centered / static_cast<double>(x.rows());
}

MixtureParams labelled_moments(const SemiDataset& data, int g, double lambda) {
  const int p = data.dim();
  std::vector<std::vector<std::size_t>> members(g);
  for (std::size_t i : data.labelled_rows()) members[*data.label(i)].push_back(i);
  Vector weights(g);
  std::vector<GaussianComponent> comps;
  for (int h = 0; h < g; ++h) {
    Matrix x(static_cast<Eigen::Index>(members[h].size()), p);
    for (std::size_t k = 0; k < members[h].size(); ++k) {
      x.row(static_cast<Eigen::Index>(k)) = data.row(members[h][k]);
    }
    const Vector mean = x.colwise().mean().transpose();
    Matrix cov = biased_covariance(x, mean);
    regularize(cov, lambda);
    weights[h] = static_cast<double>(members[h].size()) / static_cast<double>(data.num_labelled());
    comps.push_back({mean, cov});
  }
  return MixtureParams(weights, std::move(comps));
}

MixtureParams kmeans_candidate(const SemiDataset& data, int g, double lambda, std::mt19937_64& rng,
                               const Matrix& total_cov) {
  const auto n = static_cast<Eigen::Index>(data.size());
  const int p = data.dim();
  const Matrix& x = data.features();

  std::vector<Vector> centers(g);
  std::vector<bool> placed(g, false);
  {
    std::vector<Vector> sums(g, Vector::Zero(p));
    std::vector<int> counts(g, 0);
    for (std::size_t i : data.labelled_rows()) {
      sums[*data.label(i)] += data.row(i).transpose();
      ++counts[*data.label(i)];
    }
    for (int h = 0; h < g; ++h) {
      if (counts[h] > 0) {
        centers[h] = sums[h] / counts[h];
        placed[h] = true;
      }
    }
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int h = 0; h < g; ++h) {
    if (placed[h]) continue;
    // D^2 sampling relative to the centres placed so far.
    Vector d2(n);
    bool any = false;
    for (int c = 0; c < g; ++c) any = any || placed[c];
    for (Eigen::Index i = 0; i < n; ++i) {
      double best = any ? std::numeric_limits<double>::infinity() : 1.0;
      for (int c = 0; c < g; ++c) {
        if (placed[c]) best = std::min(best, (x.row(i).transpose() - centers[c]).squaredNorm());
      }
      d2[i] = best;
    }
    const double total = d2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      double target = unif(rng) * total;
      for (pick = 0; pick < n - 1; ++pick) {
        target -= d2[pick];
        if (target < 0.0) break;
      }
    } else {
      pick = static_cast<Eigen::Index>(unif(rng) * static_cast<double>(n)) % n;
    }
    centers[h] = x.row(pick).transpose();
    placed[h] = true;
  }

  std::vector<int> assign(static_cast<std::size_t>(n), 0);
  for (int pass = 0; pass < kLloydPasses; ++pass) {
    bool changed = pass == 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best_h = 0;
      if (data.labelled(static_cast<std::size_t>(i))) {
        best_h = *data.label(static_cast<std::size_t>(i));
      } else {
        double best = std::numeric_limits<double>::infinity();
        for (int h = 0; h < g; ++h) {
          const double d = (x.row(i).transpose() - centers[h]).squaredNorm();
          if (d < best) {
            best = d;
            best_h = h;
          }
        }
      }
      if (assign[static_cast<std::size_t>(i)] != best_h) changed = true;
      assign[static_cast<std::size_t>(i)] = best_h;
    }
    std::vector<Vector> sums(g, Vector::Zero(p));
    std::vector<int> counts(g, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums[assign[static_cast<std::size_t>(i)]] += x.row(i).transpose();
      ++counts[assign[static_cast<std::size_t>(i)]];
    }
    for (int h = 0; h < g; ++h) {
      if (counts[h] > 0) centers[h] = sums[h] / counts[h];
    }
    if (!changed) break;
  }

  Vector weights(g);
  std::vector<GaussianComponent> comps;
  for (int h = 0; h < g; ++h) {
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (assign[static_cast<std::size_t>(i)] == h) rows.push_back(i);
    }
    Matrix cov = total_cov;
    if (static_cast<int>(rows.size()) >= p + 1) {
      Matrix xm(static_cast<Eigen::Index>(rows.size()), p);
      for (std::size_t k = 0; k < rows.size(); ++k) xm.row(static_cast<Eigen::Index>(k)) = x.row(rows[k]);
      cov = biased_covariance(xm, centers[h]);
    }
    regularize(cov, lambda);
    weights[h] = (static_cast<double>(rows.size()) + 1.0) / (static_cast<double>(n) + g);
    comps.push_back({centers[h], cov});
  }
  return MixtureParams(weights, std::move(comps));
}

}  // namespace

double covariance_floor(const SemiDataset& data) {
  if (data.size() < 2) return 1e-8;
  const Matrix& x = data.features();
  const Vector mean = x.colwise().mean().transpose();
  const double mean_var =
      (x.rowwise() - mean.transpose()).array().square().colwise().sum().mean() /
      static_cast<double>(x.rows() - 1);
  return mean_var > 0.0 ? 1e-8 * mean_var : 1e-8;
}

MixtureParams initialize_mixture(const SemiDataset& data, int g, std::uint64_t seed) {
  check_labels(data, g);
  const int p = data.dim();
  const double lambda = covariance_floor(data);

  std::vector<int> counts(g, 0);
  for (std::size_t i : data.labelled_rows()) ++counts[*data.label(i)];
  if (std::all_of(counts.begin(), counts.end(), [p](int c) { return c >= p + 1; })) {
    return labelled_moments(data, g, lambda);
  }

  const Vector mean = data.features().colwise().mean().transpose();
  const Matrix total_cov = biased_covariance(data.features(), mean);
  std::mt19937_64 rng(seed);
  std::optional<MixtureParams> best;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < kRestarts; ++restart) {
    MixtureParams candidate = kmeans_candidate(data, g, lambda, rng, total_cov);
    const double value = log_ignorance_likelihood(candidate, data);
    if (!best || value > best_value) {
      best = std::move(candidate);
      best_value = value;
    }
  }
  return *best;
}

double weighted_objective(const MixtureParams& params, const SemiDataset& data,
                          double labelled_weight, double unlabelled_weight) {
  return labelled_weight * labelled_block_log_likelihood(params, data) +
         unlabelled_weight * unlabelled_block_log_likelihood(params, data);
}

FitReport weighted_em(const SemiDataset& data, const MixtureParams& init, double labelled_weight,
                      double unlabelled_weight, const EmOptions& options) {
  const int g = init.num_components();
  check_labels(data, g);
  check_compatible(init, data);
  if (!(labelled_weight >= 0.0) || !(unlabelled_weight >= 0.0)) {
    throw InputError("row weights must be non-negative");
  }
  const auto n = static_cast<Eigen::Index>(data.size());
  const int p = data.dim();
  const Matrix& x = data.features();
  const double lambda = covariance_floor(data);

  Vector row_weight(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    row_weight[i] = data.labelled(static_cast<std::size_t>(i)) ? labelled_weight : unlabelled_weight;
  }
  double total_weight = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) total_weight += row_weight[i];
  if (!(total_weight > 0.0)) throw InputError("total row weight must be positive");
  const double stop_tol = options.tol * total_weight / static_cast<double>(n);

  FitReport report{init, std::nullopt, 0.0, {}, false, 0, {}};
  MixtureParams params = init;
  while (true) {
    const Matrix lj = kernels::log_joint(params, x);
    kernels::Posterior post = kernels::posterior(lj);
    double objective = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& label = data.label(static_cast<std::size_t>(i));
      objective += row_weight[i] * (label ? lj(i, *label) : post.log_marginal[i]);
    }
    report.trace.push_back(objective);
    report.params = params;
    report.objective = objective;
    if (report.trace.size() >= 2 &&
        std::abs(objective - report.trace[report.trace.size() - 2]) < stop_tol) {
      report.converged = true;
      break;
    }
    if (report.iterations >= options.max_iter) break;

    Matrix& resp = post.tau;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& label = data.label(static_cast<std::size_t>(i));
      if (label) {
        resp.row(i).setZero();
        resp(i, *label) = 1.0;
      }
      resp.row(i) *= row_weight[i];
    }

    Vector weights(g);
    std::vector<GaussianComponent> comps;
    comps.reserve(g);
    double mass_total = 0.0;
    for (int h = 0; h < g; ++h) {
      double mass = 0.0;
      Vector mean = Vector::Zero(p);
      for (Eigen::Index i = 0; i < n; ++i) {
        mass += resp(i, h);
        mean += resp(i, h) * x.row(i).transpose();
      }
      if (!(mass > 0.0)) {
        throw NumericalError("component " + std::to_string(h + 1) + " lost all probability mass");
      }
      mean /= mass;
      Matrix cov = Matrix::Zero(p, p);
      for (Eigen::Index i = 0; i < n; ++i) {
        const Vector d = x.row(i).transpose() - mean;
        cov += resp(i, h) * (d * d.transpose());
      }
      cov /= mass;
      const double shift = regularize(cov, lambda);
      if (shift > 0.0) {
        std::ostringstream note;
        note << "covariance of component " << h + 1 << " regularized by " << shift
             << " at iteration " << report.iterations + 1;
        report.notes.push_back(note.str());
      }
      weights[h] = mass;
      mass_total += mass;
      comps.push_back({std::move(mean), std::move(cov)});
    }
    weights /= mass_total;
    params = MixtureParams(std::move(weights), std::move(comps));
    ++report.iterations;
  }
  return report;
}

FitReport em_fit_ignorance(const SemiDataset& data, int g, const MixtureParams& init,
                           const EmOptions& options) {
  if (init.num_components() != g) throw InputError("initial mixture has the wrong number of components");
  return weighted_em(data, init, 1.0, 1.0, options);
}

FitReport em_fit_ignorance(const SemiDataset& data, int g, std::uint64_t seed,
                           const EmOptions& options) {
  return weighted_em(data, initialize_mixture(data, g, seed), 1.0, 1.0, options);
}

}  // namespace misslab
