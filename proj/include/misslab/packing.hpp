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

#include <optional>

#include "misslab/mixture.hpp"
#include "misslab/selection.hpp"

namespace misslab {

/// Sizes of the blocks in a packed parameter vector.
///
/// Layout: (g - 1) weight logits relative to the last component, then the g
/// means (p each), then g log-Cholesky blocks of p(p+1)/2 entries (row-major
/// lower triangle, diagonal entries stored as logs), then optionally the
/// T + 1 selection coefficients.
struct PackingLayout {
  int g = 1;
  int p = 1;
  int selection_terms = -1;  // T, or -1 when no selection block is present

  int weight_size() const { return g - 1; }
  int mean_offset() const { return weight_size(); }
  int chol_block() const { return p * (p + 1) / 2; }
  int chol_offset() const { return mean_offset() + g * p; }
  int selection_offset() const { return chol_offset() + g * chol_block(); }
  bool has_selection() const { return selection_terms >= 0; }
  int size() const { return selection_offset() + (has_selection() ? selection_terms + 1 : 0); }

  friend bool operator==(const PackingLayout&, const PackingLayout&) = default;
};

/// Unconstrained coordinates for (mixture parameters, optional coefficients).
struct PackedParams {
  PackingLayout layout;
  Vector theta;
};

struct UnpackedParams {
  MixtureParams params;
  std::optional<SelectionCoeffs> coeffs;
};

PackedParams pack(const MixtureParams& params,
                  const std::optional<SelectionCoeffs>& coeffs = std::nullopt);

/// Inverse of pack. Throws FactorizationError if the decoded covariance is
/// numerically singular (e.g. exp underflow on a log-diagonal entry).
UnpackedParams unpack(const PackedParams& packed);

}  // namespace misslab
