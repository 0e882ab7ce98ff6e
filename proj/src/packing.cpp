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

#include "misslab/packing.hpp"

#include <cmath>

#include "misslab/error.hpp"

namespace misslab {

PackedParams pack(const MixtureParams& params, const std::optional<SelectionCoeffs>& coeffs) {
  PackingLayout layout{params.num_components(), params.dim(),
                       coeffs ? coeffs->num_terms() : -1};
  Vector theta(layout.size());
  const int g = layout.g;
  const int p = layout.p;
  const double log_last = std::log(params.weight(g - 1));
  for (int h = 0; h < g - 1; ++h) theta[h] = std::log(params.weight(h)) - log_last;
  for (int h = 0; h < g; ++h) theta.segment(layout.mean_offset() + h * p, p) = params.mean(h);
  for (int h = 0; h < g; ++h) {
    const Matrix& factor = params.cov_factor(h);
    int k = layout.chol_offset() + h * layout.chol_block();
    for (int r = 0; r < p; ++r) {
      for (int c = 0; c <= r; ++c) theta[k++] = r == c ? std::log(factor(r, r)) : factor(r, c);
    }
  }
  if (coeffs) theta.tail(coeffs->beta().size()) = coeffs->beta();
  return {layout, std::move(theta)};
}

UnpackedParams unpack(const PackedParams& packed) {
  const PackingLayout& layout = packed.layout;
  const Vector& theta = packed.theta;
  if (theta.size() != layout.size()) throw InputError("packed vector has the wrong length");
  if (!theta.allFinite()) throw InputError("packed vector must be finite");
  const int g = layout.g;
  const int p = layout.p;

  Vector logits(g);
  logits.head(g - 1) = theta.head(g - 1);
  logits[g - 1] = 0.0;
  const double m = logits.maxCoeff();
  Vector weights = (logits.array() - m).exp();
  weights /= weights.sum();

  std::vector<GaussianComponent> comps;
  comps.reserve(g);
  for (int h = 0; h < g; ++h) {
    Matrix factor = Matrix::Zero(p, p);
    int k = layout.chol_offset() + h * layout.chol_block();
    for (int r = 0; r < p; ++r) {
      for (int c = 0; c <= r; ++c) factor(r, c) = r == c ? std::exp(theta[k++]) : theta[k++];
    }
    comps.push_back({theta.segment(layout.mean_offset() + h * p, p), factor * factor.transpose()});
  }
  UnpackedParams out{MixtureParams(std::move(weights), std::move(comps)), std::nullopt};
  if (layout.has_selection()) out.coeffs = SelectionCoeffs(theta.tail(layout.selection_terms + 1));
  return out;
}

}  // namespace misslab
