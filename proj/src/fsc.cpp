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

#include "misslab/fsc.hpp"

#include <cmath>
#include <vector>

#include "misslab/error.hpp"

namespace misslab {

FscWeight::FscWeight(double alpha) : alpha_(alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("alpha must lie in [0, 1]");
}

double log_fsc_objective(const MixtureParams& params, FscWeight weight, const SemiDataset& data) {
  const double a = weight.alpha();
  return a * labelled_block_log_likelihood(params, data) +
         (1.0 - a) * unlabelled_block_log_likelihood(params, data);
}

namespace {

void check_identifiable(const SemiDataset& data, int g, double alpha) {
  if (alpha == 1.0) {
    std::vector<int> counts(static_cast<std::size_t>(g), 0);
    for (std::size_t i : data.labelled_rows()) {
      if (*data.label(i) < g) ++counts[static_cast<std::size_t>(*data.label(i))];
    }
    bool all_present = true;
    for (int c : counts) all_present = all_present && c > 0;
    if (data.num_labelled() < static_cast<std::size_t>(g) || !all_present) {
      throw InputError("alpha = 1 uses labelled rows only; every class needs a labelled row");
    }
  }
  if (alpha == 0.0 && data.num_unlabelled() < static_cast<std::size_t>(g)) {
    throw InputError("alpha = 0 uses unlabelled rows only; need at least g unlabelled rows");
  }
}

}  // namespace

FitReport fit_fsc(const SemiDataset& data, int g, FscWeight weight, const MixtureParams& init,
                  const EmOptions& options) {
  if (init.num_components() != g) throw InputError("initial mixture has the wrong number of components");
  check_identifiable(data, g, weight.alpha());
  return weighted_em(data, init, weight.alpha(), 1.0 - weight.alpha(), options);
}

FitReport fit_fsc(const SemiDataset& data, int g, FscWeight weight, std::uint64_t seed,
                  const EmOptions& options) {
  check_identifiable(data, g, weight.alpha());
  return weighted_em(data, initialize_mixture(data, g, seed), weight.alpha(), 1.0 - weight.alpha(),
                     options);
}

}  // namespace misslab
