// Copyright 2026 The tbert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TBERT_FUSION_H_
#define TBERT_FUSION_H_

#include <cstddef>
#include <string>
#include <vector>

#include "tbert/embeddings.h"
#include "tbert/json_util.h"
#include "tbert/matrix.h"

namespace tbert {

struct FusionConfig {
  double gamma = 15.0;
  // L2-normalize sentence embeddings before fusing so gamma has the same
  // meaning for every embedding provider. Disable for raw mode.
  bool normalize_embeddings = true;

  void validate() const;  // gamma finite and >= 0
};

// Contextual topic vectors: row i is [gamma * omega_i ; h_i]. The topic
// mixture and the sentence embedding live in different spaces (k != d), so
// the weighted combination is a concatenation, not an elementwise sum.
struct FusedMatrix {
  std::vector<std::string> ids;
  Matrix data;  // M x (k + d)
  std::size_t k = 0;
  std::size_t d = 0;
  double gamma = 0.0;
};

// Throws std::invalid_argument on row-count mismatch or NaN input.
FusedMatrix fuse(const Matrix& omega, const Matrix& embeddings,
                 const FusionConfig& config);

// Applies the normalization flag, then fuses. Row order follows
// `embeddings.ids`.
FusedMatrix fuse(const Matrix& omega, const EmbeddingMatrix& embeddings,
                 const FusionConfig& config);

// TBEM payload (dim = k + d) plus a JSON sidecar {"k", "d", "gamma"}.
void write_fused(const std::string& tbem_path, const std::string& sidecar_path,
                 const FusedMatrix& fused);
FusedMatrix read_fused(const std::string& tbem_path,
                       const std::string& sidecar_path);

}  // namespace tbert

#endif  // TBERT_FUSION_H_
