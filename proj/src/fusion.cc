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

#include "tbert/fusion.h"

#include <cmath>
#include <stdexcept>

namespace tbert {

void FusionConfig::validate() const {
  if (!std::isfinite(gamma) || gamma < 0.0) {
    throw std::invalid_argument("fusion: gamma must be finite and >= 0");
  }
}

FusedMatrix fuse(const Matrix& omega, const Matrix& embeddings,
                 const FusionConfig& config) {
  config.validate();
  if (omega.rows() != embeddings.rows()) {
    throw std::invalid_argument(
        "fusion: topic matrix has " + std::to_string(omega.rows()) +
        " rows but embeddings have " + std::to_string(embeddings.rows()));
  }
  if (!all_finite(omega) || !all_finite(embeddings)) {
    throw std::invalid_argument("fusion: non-finite input");
  }
  FusedMatrix out;
  out.k = omega.cols();
  out.d = embeddings.cols();
  out.gamma = config.gamma;
  out.data = Matrix(omega.rows(), out.k + out.d);
  for (std::size_t r = 0; r < omega.rows(); ++r) {
    auto row = out.data.row(r);
    for (std::size_t t = 0; t < out.k; ++t) row[t] = config.gamma * omega(r, t);
    for (std::size_t c = 0; c < out.d; ++c) row[out.k + c] = embeddings(r, c);
  }
  out.ids.reserve(omega.rows());
  for (std::size_t r = 0; r < omega.rows(); ++r) {
    out.ids.push_back(std::to_string(r));
  }
  return out;
}

FusedMatrix fuse(const Matrix& omega, const EmbeddingMatrix& embeddings,
                 const FusionConfig& config) {
  const EmbeddingMatrix h = config.normalize_embeddings
                                ? l2_normalize(embeddings)
                                : embeddings;
  FusedMatrix out = fuse(omega, h.to_matrix(), config);
  out.ids = embeddings.ids;
  return out;
}

void write_fused(const std::string& tbem_path, const std::string& sidecar_path,
                 const FusedMatrix& fused) {
  write_tbem(tbem_path, EmbeddingMatrix::from_matrix(fused.ids, fused.data));
  Json side;
  side["k"] = fused.k;
  side["d"] = fused.d;
  side["gamma"] = fused.gamma;
  write_text_file(sidecar_path, dump_json(side, 2) + "\n");
}

FusedMatrix read_fused(const std::string& tbem_path,
                       const std::string& sidecar_path) {
  const EmbeddingMatrix m = load_embeddings(tbem_path);
  const Json side = parse_json_file(sidecar_path);
  FusedMatrix out;
  out.ids = m.ids;
  out.data = m.to_matrix();
  out.k = side.at("k").get<std::size_t>();
  out.d = side.at("d").get<std::size_t>();
  out.gamma = side.at("gamma").get<double>();
  if (out.k + out.d != m.dim) {
    throw std::runtime_error("fused sidecar k + d does not match TBEM dim");
  }
  return out;
}

}  // namespace tbert
