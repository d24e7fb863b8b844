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

#ifndef TBERT_EMBEDDINGS_H_
#define TBERT_EMBEDDINGS_H_

#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "tbert/matrix.h"

namespace tbert {

// n x d sentence embeddings, one row per document, stored as float32.
struct EmbeddingMatrix {
  std::vector<std::string> ids;
  std::size_t dim = 0;
  std::vector<float> data;  // row-major, ids.size() * dim

  std::size_t rows() const { return ids.size(); }
  std::span<const float> row(std::size_t r) const {
    return {data.data() + r * dim, dim};
  }

  Matrix to_matrix() const;
  static EmbeddingMatrix from_matrix(std::vector<std::string> ids,
                                     const Matrix& m);

  // Throws std::runtime_error on shape mismatch, non-finite values or
  // duplicate ids.
  void validate() const;

  bool operator==(const EmbeddingMatrix&) const = default;
};

// TBEM: "TBEM", u32 version = 1, u32 count, u32 dim, count*dim float32
// row-major, then count records of u16 byte length + UTF-8 id. All
// integers and floats little-endian.
void write_tbem(std::ostream& out, const EmbeddingMatrix& m);
void write_tbem(const std::string& path, const EmbeddingMatrix& m);
EmbeddingMatrix read_tbem(std::istream& in);

// One {"id": ..., "vector": [...]} object per line.
void write_embeddings_jsonl(std::ostream& out, const EmbeddingMatrix& m);
EmbeddingMatrix read_embeddings_jsonl(std::istream& in);

// Reads TBEM or JSONL, chosen by the leading magic bytes.
EmbeddingMatrix load_embeddings(const std::string& path);

// Client for the POST {endpoint}/embed contract. Texts go out in batches of
// `batch_size`; rows come back in input order. `ids` defaults to the row
// index as a string. Throws std::runtime_error on transport failure,
// non-2xx status, or count/dim mismatch.
EmbeddingMatrix fetch_embeddings(const std::string& endpoint,
                                 std::span<const std::string> texts,
                                 std::size_t batch_size,
                                 std::span<const std::string> ids = {});

// Endpoint from TBERT_EMBED_ENDPOINT, or empty when unset.
std::string default_embed_endpoint();

// Divides each nonzero row by its Euclidean norm. Zero rows stay zero and
// their indices are appended to `zero_rows` when given.
EmbeddingMatrix l2_normalize(const EmbeddingMatrix& m,
                             std::vector<std::size_t>* zero_rows = nullptr);

// Column mean of a T x d matrix. Throws std::invalid_argument when T = 0.
std::vector<double> mean_pool(const Matrix& token_vectors);

// Reorders `m` to follow `ids`. Throws std::runtime_error naming the first
// missing id.
EmbeddingMatrix align_embeddings(const EmbeddingMatrix& m,
                                 std::span<const std::string> ids);

}  // namespace tbert

#endif  // TBERT_EMBEDDINGS_H_
