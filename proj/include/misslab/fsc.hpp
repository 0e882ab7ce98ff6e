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

#include "misslab/em.hpp"
#include "misslab/fit_report.hpp"
#include "misslab/mixture.hpp"

namespace misslab {

/// Weight alpha in [0, 1] on the labelled block; 1 - alpha goes to the
/// unlabelled block.
class FscWeight {
 public:
  explicit FscWeight(double alpha);
  double alpha() const { return alpha_; }

 private:
  double alpha_;
};

/// alpha * (labelled block) + (1 - alpha) * (unlabelled block).
double log_fsc_objective(const MixtureParams& params, FscWeight weight, const SemiDataset& data);

/// Weighted EM for the fractionally supervised objective.
///
/// Boundary weights are accepted only when the retained block identifies all
/// components: alpha = 1 needs every class labelled at least once (and
/// n1 >= g); alpha = 0 needs n2 >= g.
FitReport fit_fsc(const SemiDataset& data, int g, FscWeight weight, const MixtureParams& init,
                  const EmOptions& options = {});

/// Same, with starting values from initialize_mixture(data, g, seed).
FitReport fit_fsc(const SemiDataset& data, int g, FscWeight weight, std::uint64_t seed,
                  const EmOptions& options = {});

}  // namespace misslab
