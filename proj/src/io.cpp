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

#include "misslab/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "misslab/error.hpp"

namespace misslab::io {

using nlohmann::json;

namespace {

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  if (line.empty()) cells.emplace_back();
  return cells;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail_at(const std::string& source, std::size_t line, std::size_t column,
                          const std::string& what) {
  throw InputError(source + ": line " + std::to_string(line) + ", column " + std::to_string(column) +
                   ": " + what);
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v[k]);
  return out;
}

json matrix_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
  return out;
}

Vector vector_from(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Matrix matrix_from(const json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw InputError("ragged matrix in configuration");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json mechanism_json(const Mechanism& m) {
  return {{"kind", m.kind == Mechanism::Kind::entropy ? "entropy" : "mcar"},
          {"beta0", m.beta0},
          {"beta1", m.beta1},
          {"keep_prob", m.keep_prob}};
}

Mechanism mechanism_from(const json& j) {
  Mechanism m;
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") {
      const auto kind = value.get<std::string>();
      if (kind == "entropy") {
        m.kind = Mechanism::Kind::entropy;
      } else if (kind == "mcar") {
        m.kind = Mechanism::Kind::mcar;
      } else {
        throw InputError("unknown mechanism kind '" + kind + "'");
      }
    } else if (key == "beta0") {
      m.beta0 = value.get<double>();
    } else if (key == "beta1") {
      m.beta1 = value.get<double>();
    } else if (key == "keep_prob") {
      m.keep_prob = value.get<double>();
    } else {
      throw InputError("unknown mechanism key '" + key + "'");
    }
  }
  return m;
}

std::string csv_value(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  const int len = std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return std::string(buffer, static_cast<std::size_t>(len));
}

SemiDataset read_dataset(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw InputError(source + ": empty file (a header is required)");
  const auto header = split_cells(line);
  std::optional<std::size_t> label_col;
  std::size_t p = 0;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name = trim(header[c]);
    if (name == "label") {
      if (label_col) fail_at(source, 1, c + 1, "duplicate label column");
      label_col = c;
    } else if (name == "x" + std::to_string(p + 1)) {
      ++p;
    } else {
      fail_at(source, 1, c + 1, "unexpected column '" + name + "' (expected x" + std::to_string(p + 1) +
                                     " or label)");
    }
  }
  if (p == 0) throw InputError(source + ": header has no feature columns");

  std::vector<std::vector<double>> rows;
  std::vector<std::optional<int>> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_cells(line);
    if (cells.size() != header.size()) {
      fail_at(source, line_no, std::min(cells.size(), header.size()) + 1,
              "expected " + std::to_string(header.size()) + " cells, found " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(p);
    std::optional<int> label;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string cell = trim(cells[c]);
      if (label_col && c == *label_col) {
        if (cell.empty()) continue;
        int value = 0;
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
        if (ec != std::errc() || ptr != cell.data() + cell.size()) {
          fail_at(source, line_no, c + 1, "label '" + cell + "' is not an integer");
        }
        if (value < 1) fail_at(source, line_no, c + 1, "label " + cell + " is below 1");
        label = value - 1;
        continue;
      }
      if (cell.empty()) fail_at(source, line_no, c + 1, "missing feature value");
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
        fail_at(source, line_no, c + 1, "'" + cell + "' is not a finite number");
      }
      row.push_back(value);
    }
    rows.push_back(std::move(row));
    labels.push_back(label);
  }

  Matrix x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < p; ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return SemiDataset(std::move(x), std::move(labels));
}

SemiDataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return read_dataset(in, path.string());
}

void write_dataset(std::ostream& out, const SemiDataset& data) {
  const int p = data.dim();
  for (int j = 0; j < p; ++j) out << 'x' << j + 1 << ',';
  out << "label\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto row = data.row(i);
    for (int j = 0; j < p; ++j) out << format_double(row[j]) << ',';
    if (const auto label = data.label(i)) out << *label + 1;
    out << '\n';
  }
}

void write_dataset(const std::filesystem::path& path, const SemiDataset& data) {
  std::ostringstream out;
  write_dataset(out, data);
  write_text(path, out.str());
}

BenchConfig RunConfig::bench_config() const {
  BenchConfig config;
  config.true_params = truth;
  config.mechanism = mechanism;
  config.n_train = n_train;
  config.n_test = n_test;
  config.replications = replications;
  config.alpha_grid = alpha_grid;
  config.seed = seed;
  config.basis = SelectionSpec::parse(basis, truth.num_components());
  config.em = em_options();
  config.full_tol = full_tol;
  config.full_max_iter = full_max_iter;
  return config;
}

void RunConfig::validate() const {
  if (method != "ignorance" && method != "full" && method != "fsc") {
    throw InputError("unknown method '" + method + "' (expected ignorance, full or fsc)");
  }
  if (g < 1) throw InputError("g must be at least 1");
  if (alpha && !(*alpha >= 0.0 && *alpha <= 1.0)) throw InputError("alpha must lie in [0, 1]");
  if (method == "fsc" && !alpha) throw InputError("method fsc needs --alpha");
  (void)selection_spec();
  if (!(tol > 0.0) || !(full_tol > 0.0)) throw InputError("tolerances must be positive");
  if (max_iter < 1 || full_max_iter < 1) throw InputError("iteration limits must be positive");
  if (grid_points < 2) throw InputError("grid_points must be at least 2");
  if (bandwidth && !(*bandwidth > 0.0)) throw InputError("bandwidth must be positive");
  if (n < 0) throw InputError("n must be non-negative");
  if (mechanism.kind == Mechanism::Kind::mcar && !(mechanism.keep_prob >= 0.0 && mechanism.keep_prob <= 1.0)) {
    throw InputError("keep_prob must lie in [0, 1]");
  }
  if (!std::isfinite(mechanism.beta0) || !std::isfinite(mechanism.beta1)) {
    throw InputError("mechanism coefficients must be finite");
  }
}

json to_json(const RunConfig& c) {
  return {{"method", c.method},
          {"g", c.g},
          {"alpha", optional_json(c.alpha)},
          {"basis", c.basis},
          {"seed", c.seed},
          {"tol", c.tol},
          {"max_iter", c.max_iter},
          {"full_tol", c.full_tol},
          {"full_max_iter", c.full_max_iter},
          {"grid_points", c.grid_points},
          {"bandwidth", optional_json(c.bandwidth)},
          {"truth", to_json(c.truth)},
          {"mechanism", mechanism_json(c.mechanism)},
          {"n", c.n},
          {"n_train", c.n_train},
          {"n_test", c.n_test},
          {"replications", c.replications},
          {"alpha_grid", c.alpha_grid}};
}

RunConfig run_config_from_json(const json& j) {
  if (!j.is_object()) throw InputError("configuration must be a JSON object");
  RunConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "method") c.method = value.get<std::string>();
      else if (key == "g") c.g = value.get<int>();
      else if (key == "alpha") c.alpha = optional_from(value);
      else if (key == "basis") c.basis = value.get<std::string>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "tol") c.tol = value.get<double>();
      else if (key == "max_iter") c.max_iter = value.get<int>();
      else if (key == "full_tol") c.full_tol = value.get<double>();
      else if (key == "full_max_iter") c.full_max_iter = value.get<int>();
      else if (key == "grid_points") c.grid_points = value.get<int>();
      else if (key == "bandwidth") c.bandwidth = optional_from(value);
      else if (key == "truth") c.truth = mixture_from_json(value);
      else if (key == "mechanism") c.mechanism = mechanism_from(value);
      else if (key == "n") c.n = value.get<int>();
      else if (key == "n_train") c.n_train = value.get<int>();
      else if (key == "n_test") c.n_test = value.get<int>();
      else if (key == "replications") c.replications = value.get<int>();
      else if (key == "alpha_grid") c.alpha_grid = value.get<std::vector<double>>();
      else throw InputError("unknown configuration key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("bad configuration value: ") + e.what());
  }
  return c;
}

RunConfig read_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return run_config_from_json(j);
}

json to_json(const MixtureParams& params) {
  json means = json::array();
  json covs = json::array();
  for (int h = 0; h < params.num_components(); ++h) {
    means.push_back(vector_json(params.mean(h)));
    covs.push_back(matrix_json(params.cov(h)));
  }
  return {{"weights", vector_json(params.weights())}, {"means", means}, {"covariances", covs}};
}

MixtureParams mixture_from_json(const json& j) {
  try {
    const Vector weights = vector_from(j.at("weights"));
    const auto& means = j.at("means");
    const auto& covs = j.at("covariances");
    if (means.size() != static_cast<std::size_t>(weights.size()) || covs.size() != means.size()) {
      throw InputError("weights, means and covariances differ in length");
    }
    std::vector<GaussianComponent> components;
    for (std::size_t h = 0; h < means.size(); ++h) {
      components.push_back({vector_from(means[h]), matrix_from(covs[h])});
    }
    return MixtureParams(weights, std::move(components));
  } catch (const json::exception& e) {
    throw InputError(std::string("bad mixture parameters: ") + e.what());
  }
}

json to_json(const FitReport& report) {
  json notes = report.notes;
  return {{"params", to_json(report.params)},
          {"beta", report.coeffs ? vector_json(report.coeffs->beta()) : json(nullptr)},
          {"objective", report.objective},
          {"trace", report.trace},
          {"converged", report.converged},
          {"iterations", report.iterations},
          {"notes", notes}};
}

json to_json(const TestResult& result) {
  return {{"method", to_string(result.method)}, {"statistic", result.statistic}, {"p_value", result.p_value}};
}

json to_json(const DiagnosticsReport& r) {
  return {{"fit", to_json(r.fit)},
          {"n_labelled", r.split.labelled.size()},
          {"n_unlabelled", r.split.unlabelled.size()},
          {"mean_entropy_labelled", r.summary.mean_labelled},
          {"mean_entropy_unlabelled", r.summary.mean_unlabelled},
          {"ks", to_json(r.ks)},
          {"mann_whitney", to_json(r.mann_whitney)},
          {"bandwidth",
           {{"labelled", r.kde_labelled.bandwidth},
            {"unlabelled", r.kde_unlabelled.bandwidth},
            {"labelling_curve", r.labelling_curve.bandwidth}}},
          {"bandwidth_floored",
           r.kde_labelled.floored || r.kde_unlabelled.floored || r.labelling_curve.floored}};
}

json to_json(const BenchResult& result) {
  json estimators = json::array();
  for (const auto& e : result.estimators) {
    json errors = e.errors;
    estimators.push_back({{"name", e.name},
                          {"alpha", optional_json(e.alpha)},
                          {"mean_ari", e.mean_ari},
                          {"se_ari", e.se_ari},
                          {"mean_log_loss", e.mean_log_loss},
                          {"se_log_loss", e.se_log_loss},
                          {"failures", e.failures},
                          {"nonconverged", e.nonconverged},
                          {"ari", e.ari},
                          {"log_loss", e.log_loss},
                          {"beta", e.beta},
                          {"errors", errors}});
  }
  return {{"replication_seeds", result.replication_seeds}, {"estimators", estimators}};
}

void write_kde_csv(std::ostream& out, const DiagnosticsReport& r) {
  out << "v,density_labelled,density_unlabelled\n";
  for (std::size_t k = 0; k < r.grid.size(); ++k) {
    out << format_double(r.grid[k]) << ',' << format_double(r.kde_labelled.density[k]) << ','
        << format_double(r.kde_unlabelled.density[k]) << '\n';
  }
}

void write_ecdf_csv(std::ostream& out, const DiagnosticsReport& r) {
  out << "v,ecdf_labelled,ecdf_unlabelled\n";
  for (std::size_t k = 0; k < r.grid.size(); ++k) {
    out << format_double(r.grid[k]) << ',' << format_double(r.ecdf_labelled[k]) << ','
        << format_double(r.ecdf_unlabelled[k]) << '\n';
  }
}

void write_labelling_curve_csv(std::ostream& out, const DiagnosticsReport& r) {
  out << "v,probability\n";
  for (std::size_t k = 0; k < r.grid.size(); ++k) {
    out << format_double(r.grid[k]) << ',';
    if (const auto& p = r.labelling_curve.probability[k]) out << format_double(*p);
    out << '\n';
  }
}

void write_benchmark_csv(std::ostream& out, const BenchResult& result) {
  out << "estimator,alpha,mean_ari,se_ari,mean_log_loss,se_log_loss,failures,nonconverged\n";
  for (const auto& e : result.estimators) {
    out << e.name << ',' << (e.alpha ? format_double(*e.alpha) : std::string()) << ','
        << csv_value(e.mean_ari) << ',' << csv_value(e.se_ari) << ',' << csv_value(e.mean_log_loss) << ','
        << csv_value(e.se_log_loss) << ',' << e.failures << ',' << e.nonconverged << '\n';
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("error writing " + path.string());
}

}  // namespace misslab::io
