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

#include "misslab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "misslab/error.hpp"
#include "misslab/kernels.hpp"

namespace misslab {

namespace {

void require_both(const EntropySplit& split) {
  if (split.labelled.empty() || split.unlabelled.empty()) {
    throw InputError("both labelled and unlabelled values are required");
  }
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Sample quantile with linear interpolation between order statistics.
double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double resolve_bandwidth(std::span<const double> values, std::optional<double> requested, bool& floored) {
  floored = false;
  if (requested) {
    if (!(*requested > 0.0)) throw InputError("bandwidth must be positive");
    return *requested;
  }
  const double h = silverman_bandwidth(values);
  if (h > 0.0) return h;
  floored = true;
  return kBandwidthFloor;
}

}  // namespace

EntropySplit entropy_split(const SemiDataset& data, const MixtureParams& params) {
  const int g = params.num_components();
  if (g < 2) throw InputError("transformed entropy needs at least two components");
  check_compatible(params, data);
  EntropySplit split;
  if (data.size() == 0) return split;
  const Vector e = kernels::row_entropies(kernels::posterior(kernels::log_joint(params, data.features())).tau);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double v = transformed_entropy(e[static_cast<Eigen::Index>(i)], g);
    (data.labelled(i) ? split.labelled : split.unlabelled).push_back(v);
  }
  return split;
}

EntropySummary summarize_entropy(const EntropySplit& split) {
  require_both(split);
  return {mean_of(split.labelled), mean_of(split.unlabelled)};
}

std::string to_string(TestMethod method) {
  return method == TestMethod::ks_one_sided ? "ks_one_sided" : "mann_whitney_u";
}

TestResult ks_one_sided(const EntropySplit& split) {
  require_both(split);
  std::vector<double> l = split.labelled;
  std::vector<double> u = split.unlabelled;
  std::sort(l.begin(), l.end());
  std::sort(u.begin(), u.end());
  const double nl = static_cast<double>(l.size());
  const double nu = static_cast<double>(u.size());

  double d = 0.0;
  std::size_t il = 0;
  std::size_t iu = 0;
  while (il < l.size() || iu < u.size()) {
    // Next pooled point; advance both ECDFs past every copy of it.
    const double v = iu == u.size() || (il < l.size() && l[il] <= u[iu]) ? l[il] : u[iu];
    while (il < l.size() && l[il] <= v) ++il;
    while (iu < u.size() && u[iu] <= v) ++iu;
    d = std::max(d, static_cast<double>(il) / nl - static_cast<double>(iu) / nu);
  }
  const double m = nl * nu / (nl + nu);
  return {d, std::clamp(std::exp(-2.0 * m * d * d), 0.0, 1.0), TestMethod::ks_one_sided};
}

TestResult mann_whitney_u(const EntropySplit& split) {
  require_both(split);
  const std::size_t nl = split.labelled.size();
  const std::size_t nu = split.unlabelled.size();
  const std::size_t n = nl + nu;
  std::vector<std::pair<double, bool>> pooled;  // (value, is_unlabelled)
  pooled.reserve(n);
  for (double v : split.labelled) pooled.emplace_back(v, false);
  for (double v : split.unlabelled) pooled.emplace_back(v, true);
  std::sort(pooled.begin(), pooled.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  double rank_sum_u = 0.0;
  double tie_term = 0.0;  // sum of t^3 - t over tie groups
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start;
    while (end < n && pooled[end].first == pooled[start].first) ++end;
    const double t = static_cast<double>(end - start);
    const double mid_rank = 0.5 * (static_cast<double>(start + 1) + static_cast<double>(end));
    for (std::size_t k = start; k < end; ++k) {
      if (pooled[k].second) rank_sum_u += mid_rank;
    }
    tie_term += t * t * t - t;
    start = end;
  }
  const double dl = static_cast<double>(nl);
  const double du = static_cast<double>(nu);
  const double dn = static_cast<double>(n);
  const double u_stat = rank_sum_u - du * (du + 1.0) / 2.0;
  const double mean = dl * du / 2.0;
  double var = dl * du / 12.0 * (dn + 1.0);
  if (n > 1) var -= dl * du / 12.0 * tie_term / (dn * (dn - 1.0));
  double p = 1.0;
  if (var > 0.0) {
    const double z = (u_stat - mean - 0.5) / std::sqrt(var);
    p = 0.5 * std::erfc(z / std::sqrt(2.0));
  }
  return {u_stat, std::clamp(p, 0.0, 1.0), TestMethod::mann_whitney_u};
}

double silverman_bandwidth(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double mean = 0.0;
  for (double v : sorted) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : sorted) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) spread = sd;
  if (!(spread > 0.0)) return 0.0;
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

KdeResult kde(std::span<const double> values, std::optional<double> bandwidth,
              std::span<const double> grid) {
  if (values.empty()) throw InputError("kernel density estimate needs at least one value");
  KdeResult out;
  out.bandwidth = resolve_bandwidth(values, bandwidth, out.floored);
  const auto sums = kernels::gaussian_kernel_sums(values, {}, out.bandwidth, grid);
  const double scale = 1.0 / (static_cast<double>(values.size()) * out.bandwidth);
  out.density.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) out.density[j] = sums.mass[static_cast<Eigen::Index>(j)] * scale;
  return out;
}

NadarayaWatsonResult nadaraya_watson(std::span<const double> entropies, std::span<const int> indicators,
                                     std::optional<double> bandwidth, std::span<const double> grid) {
  if (entropies.size() != indicators.size()) throw InputError("entropies and indicators differ in length");
  if (entropies.empty()) throw InputError("Nadaraya-Watson estimate needs at least one value");
  NadarayaWatsonResult out;
  out.bandwidth = resolve_bandwidth(entropies, bandwidth, out.floored);
  std::vector<double> marks(indicators.size());
  for (std::size_t i = 0; i < indicators.size(); ++i) {
    if (indicators[i] != 0 && indicators[i] != 1) throw InputError("indicators must be 0 or 1");
    marks[i] = indicators[i];
  }
  const auto sums = kernels::gaussian_kernel_sums(entropies, marks, out.bandwidth, grid);
  out.probability.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto k = static_cast<Eigen::Index>(j);
    if (sums.mass[k] >= 1e-300) out.probability[j] = std::clamp(sums.marked[k] / sums.mass[k], 0.0, 1.0);
  }
  return out;
}

std::vector<double> ecdf(std::span<const double> values, std::span<const double> grid) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto count = std::upper_bound(sorted.begin(), sorted.end(), grid[j]) - sorted.begin();
    out[j] = sorted.empty() ? 0.0 : static_cast<double>(count) / static_cast<double>(sorted.size());
  }
  return out;
}

std::vector<double> linear_grid(double lo, double hi, int m) {
  if (m < 2) return {lo};
  std::vector<double> grid(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) grid[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (m - 1);
  return grid;
}

DiagnosticsReport run_diagnostics(const SemiDataset& data, int g, const DiagnosticsOptions& options) {
  if (data.num_labelled() == 0 || data.num_unlabelled() == 0) {
    throw InputError("diagnostics need both labelled and unlabelled rows");
  }
  if (g < 2) throw InputError("diagnostics need at least two components");
  FitReport fit = em_fit_ignorance(data, g, options.seed, options.em);
  EntropySplit split = entropy_split(data, fit.params);

  std::vector<double> all;
  std::vector<int> indicators;
  const Vector e = kernels::row_entropies(kernels::posterior(kernels::log_joint(fit.params, data.features())).tau);
  for (std::size_t i = 0; i < data.size(); ++i) {
    all.push_back(transformed_entropy(e[static_cast<Eigen::Index>(i)], g));
    indicators.push_back(data.labelled(i) ? 1 : 0);
  }
  const auto [lo_it, hi_it] = std::minmax_element(all.begin(), all.end());
  bool floored = false;
  const double pad = 3.0 * resolve_bandwidth(all, options.bandwidth, floored);
  std::vector<double> grid = linear_grid(*lo_it - pad, *hi_it + pad, options.grid_points);

  DiagnosticsReport report{std::move(fit), {}, {}, {}, {}, {}, {}, {}, {}, {}, {}};
  report.summary = summarize_entropy(split);
  report.ks = ks_one_sided(split);
  report.mann_whitney = mann_whitney_u(split);
  report.kde_labelled = kde(split.labelled, options.bandwidth, grid);
  report.kde_unlabelled = kde(split.unlabelled, options.bandwidth, grid);
  report.ecdf_labelled = ecdf(split.labelled, grid);
  report.ecdf_unlabelled = ecdf(split.unlabelled, grid);
  report.labelling_curve = nadaraya_watson(all, indicators, options.bandwidth, grid);
  report.split = std::move(split);
  report.grid = std::move(grid);
  return report;
}

}  // namespace misslab
