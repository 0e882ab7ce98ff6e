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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "misslab/em.hpp"
#include "misslab/fit_report.hpp"
#include "misslab/packing.hpp"
#include "misslab/selection.hpp"

namespace misslab {

/// Per-row Shannon entropies under a mixture, split by labelling status.
/// Each side keeps the dataset's row order.
struct EntropyVectors {
  std::vector<double> labelled;
  std::vector<double> unlabelled;
};
EntropyVectors split_entropies(const MixtureParams& params, const SemiDataset& data);

/// Log of the full likelihood: selection-model term plus ignorance term, with
/// the entropies recomputed from params.
double log_full_likelihood(const MixtureParams& params, const SelectionCoeffs& coeffs,
                           const SelectionSpec& spec, const SemiDataset& data);

/// Ridge used by the inner logistic fit of the profile likelihood.
inline constexpr double kProfileRidge = 1e-8;

struct ProfileResult {
  double value = 0.0;
  SelectionCoeffs coeffs;
  std::vector<std::string> notes;
};

/// Full likelihood with beta maximized out at fixed params.
ProfileResult log_profile_likelihood(const MixtureParams& params, const SelectionSpec& spec,
                                     const SemiDataset& data);

/// The full log-likelihood as a function of packed coordinates, with its
/// analytic gradient.
class FullLikelihood {
 public:
  FullLikelihood(const SemiDataset& data, SelectionSpec spec, int g);

  const PackingLayout& layout() const { return layout_; }

  /// Returns -inf if theta does not decode to valid parameters.
  double value(const Vector& theta) const;
  double value_and_gradient(const Vector& theta, Vector& grad) const;

 private:
  double evaluate(const Vector& theta, Vector* grad) const;

  const SemiDataset& data_;
  SelectionSpec spec_;
  PackingLayout layout_;
};

struct FullFitOptions {
  double tol = 1e-6;
  int max_iter = 500;
  EmOptions em;
  std::uint64_t seed = 0;  // seeds the EM initialization policy
};

/// Joint maximum-likelihood fit of (params, beta) by BFGS, warm-started from
/// the ignorance EM fit and one inner logistic fit. Without both labelled and
/// unlabelled rows the selection model is degenerate; the EM fit is returned
/// with the ridge-guarded coefficients and a note.
FitReport fit_full(const SemiDataset& data, int g, const SelectionSpec& spec,
                   const FullFitOptions& options = {});

/// Same, starting from an existing ignorance fit.
FitReport fit_full(const SemiDataset& data, const SelectionSpec& spec, const FitReport& init,
                   const FullFitOptions& options = {});

}  // namespace misslab
