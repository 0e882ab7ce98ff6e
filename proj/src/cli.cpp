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

#include "misslab/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "misslab/diagnostics.hpp"
#include "misslab/error.hpp"
#include "misslab/fsc.hpp"
#include "misslab/io.hpp"
#include "misslab/joint.hpp"
#include "misslab/study.hpp"

namespace misslab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Flags {
  std::string data;
  std::string config;
  std::optional<std::string> method;
  std::optional<double> alpha;
  std::optional<int> g;
  std::optional<std::string> basis;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<int> n;
  int threads = 0;
};

io::RunConfig load_config(const Flags& f) {
  io::RunConfig c = f.config.empty() ? io::RunConfig{} : io::read_run_config(f.config);
  if (f.method) c.method = *f.method;
  if (f.alpha) c.alpha = *f.alpha;
  if (f.g) c.g = *f.g;
  if (f.basis) c.basis = *f.basis;
  if (f.seed) c.seed = *f.seed;
  if (f.n) c.n = *f.n;
  // --tol and --max-iter steer the optimizer of the chosen method.
  if (f.tol) (c.method == "full" ? c.full_tol : c.tol) = *f.tol;
  if (f.max_iter) (c.method == "full" ? c.full_max_iter : c.max_iter) = *f.max_iter;
  c.validate();
  return c;
}

SemiDataset load_data(const Flags& f, int g) {
  if (f.data.empty()) throw InputError("--data is required");
  SemiDataset data = io::read_dataset(fs::path(f.data));
  if (data.size() == 0) throw InputError(f.data + ": no data rows");
  if (data.max_label() >= g) {
    throw InputError("label " + std::to_string(data.max_label() + 1) + " is out of range 1.." + std::to_string(g));
  }
  return data;
}

fs::path sibling(const fs::path& out, const std::string& suffix) {
  fs::path p = out;
  p.replace_extension();
  return p.string() + suffix;
}

void emit(const Flags& f, const json& report) {
  const std::string text = report.dump(2) + "\n";
  if (f.out.empty()) {
    std::cout << text;
  } else {
    io::write_text(f.out, text);
  }
}

int cmd_fit(const Flags& f) {
  const io::RunConfig c = load_config(f);
  const SemiDataset data = load_data(f, c.g);
  json report = {{"method", c.method}, {"g", c.g}, {"seed", c.seed}, {"n", data.size()},
                 {"n_labelled", data.num_labelled()}};
  std::optional<FitReport> fit;
  if (c.method == "ignorance") {
    fit = em_fit_ignorance(data, c.g, c.seed, c.em_options());
  } else if (c.method == "fsc") {
    report["alpha"] = *c.alpha;
    fit = fit_fsc(data, c.g, FscWeight(*c.alpha), c.seed, c.em_options());
  } else {
    const SelectionSpec spec = c.selection_spec();
    report["basis"] = spec.to_string();
    fit = fit_full(data, c.g, spec, FullFitOptions{c.full_tol, c.full_max_iter, c.em_options(), c.seed});
    const double ignorance = log_ignorance_likelihood(fit->params, data);
    report["log_ignorance_likelihood"] = ignorance;
    report["log_selection_likelihood"] = fit->objective - ignorance;
  }
  report.update(io::to_json(*fit));
  emit(f, report);
  return fit->converged ? kExitSuccess : kExitNonConvergence;
}

int cmd_diagnose(const Flags& f) {
  if (f.out.empty()) throw InputError("--out is required");
  const io::RunConfig c = load_config(f);
  const SemiDataset data = load_data(f, c.g);
  DiagnosticsOptions options;
  options.grid_points = c.grid_points;
  options.bandwidth = c.bandwidth;
  options.em = c.em_options();
  options.seed = c.seed;
  const DiagnosticsReport r = run_diagnostics(data, c.g, options);
  json report = {{"g", c.g}, {"seed", c.seed}};
  report.update(io::to_json(r));
  const fs::path out(f.out);
  io::write_text(out, report.dump(2) + "\n");
  std::ostringstream kde;
  io::write_kde_csv(kde, r);
  io::write_text(sibling(out, ".kde.csv"), kde.str());
  std::ostringstream ecdf;
  io::write_ecdf_csv(ecdf, r);
  io::write_text(sibling(out, ".ecdf.csv"), ecdf.str());
  std::ostringstream nw;
  io::write_labelling_curve_csv(nw, r);
  io::write_text(sibling(out, ".nw.csv"), nw.str());
  return r.fit.converged ? kExitSuccess : kExitNonConvergence;
}

int cmd_simulate(const Flags& f) {
  if (f.out.empty()) throw InputError("--out is required");
  const io::RunConfig c = load_config(f);
  Rng rng = make_stream(c.seed, 0);
  const LabelledSample sample = generate_mixture_sample(c.truth, static_cast<std::size_t>(c.n), rng);
  const SemiDataset data = c.mechanism.apply(sample, c.truth, rng);
  const fs::path out(f.out);
  io::write_dataset(out, data);
  std::vector<int> labels;
  for (int z : sample.labels) labels.push_back(z + 1);
  const json truth = {{"seed", c.seed},
                      {"n", c.n},
                      {"params", io::to_json(c.truth)},
                      {"mechanism", io::to_json(c)["mechanism"]},
                      {"labels", labels}};
  io::write_text(sibling(out, ".truth.json"), truth.dump(2) + "\n");
  return kExitSuccess;
}

int cmd_benchmark(const Flags& f) {
  if (f.out.empty()) throw InputError("--out is required");
  const io::RunConfig c = load_config(f);
  const BenchConfig config = c.bench_config();
  config.validate();
  const BenchResult result = run_benchmark(config, f.threads);
  const json report = {{"config", io::to_json(c)}, {"result", io::to_json(result)}};
  const fs::path out(f.out);
  io::write_text(out, report.dump(2) + "\n");
  std::ostringstream csv;
  io::write_benchmark_csv(csv, result);
  io::write_text(sibling(out, ".csv"), csv.str());
  return kExitSuccess;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "RunConfig JSON file");
  sub->add_option("--seed", f.seed, "Random seed");
  sub->add_option("--out", f.out, "Output path");
}

void add_model(CLI::App* sub, Flags& f) {
  sub->add_option("--data", f.data, "Dataset CSV");
  sub->add_option("--g", f.g, "Number of mixture components");
  sub->add_option("--tol", f.tol, "Convergence tolerance");
  sub->add_option("--max-iter", f.max_iter, "Iteration limit");
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Semi-supervised Gaussian mixtures with informative missing labels", "misslab"};
  app.require_subcommand(1);
  Flags f;

  auto* fit = app.add_subcommand("fit", "Fit a mixture by the ignorance, full or fractional likelihood");
  add_common(fit, f);
  add_model(fit, f);
  fit->add_option("--method", f.method, "ignorance, full or fsc");
  fit->add_option("--alpha", f.alpha, "Labelled-block weight for fsc");
  fit->add_option("--basis", f.basis, "Selection basis: identity, poly:d or tpoly:d");

  auto* diagnose = app.add_subcommand("diagnose", "Entropy diagnostics for the missing-label mechanism");
  add_common(diagnose, f);
  add_model(diagnose, f);

  auto* simulate = app.add_subcommand("simulate", "Draw a dataset with missing labels");
  add_common(simulate, f);
  simulate->add_option("--n", f.n, "Number of rows");

  auto* benchmark = app.add_subcommand("benchmark", "Run the replication study");
  add_common(benchmark, f);
  benchmark->add_option("--basis", f.basis, "Selection basis: identity, poly:d or tpoly:d");
  benchmark->add_option("--threads", f.threads, "OpenMP threads (0 = runtime default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitSuccess : kExitInputError;
  }

  try {
    if (*fit) return cmd_fit(f);
    if (*diagnose) return cmd_diagnose(f);
    if (*simulate) return cmd_simulate(f);
    return cmd_benchmark(f);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNonConvergence;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace misslab::cli
