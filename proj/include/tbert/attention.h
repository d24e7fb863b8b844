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

#ifndef TBERT_ATTENTION_H_
#define TBERT_ATTENTION_H_

#include <cstddef>
#include <vector>

#include "tbert/json_util.h"
#include "tbert/matrix.h"
#include "tbert/random.h"

// Forward-only reference encoder block: multi-head scaled dot-product
// self-attention and a ReLU feed-forward layer, both with residual
// connections and no layer normalization. Used to check the equations at
// desk scale; the production pipeline consumes external embeddings.
namespace tbert::attention {

struct HeadProjection {
  Matrix query;  // d_model x d_head
  Matrix key;    // d_model x d_head
  Matrix value;  // d_model x d_head
};

struct AttentionParams {
  std::size_t d_model = 0;
  std::size_t n_heads = 0;
  std::vector<HeadProjection> heads;
  Matrix output;  // (n_heads * d_head) x d_model
  Matrix ffn_in;  // d_model x d_ff
  std::vector<double> ffn_in_bias;
  Matrix ffn_out;  // d_ff x d_model
  std::vector<double> ffn_out_bias;

  std::size_t d_head() const { return n_heads == 0 ? 0 : d_model / n_heads; }
  std::size_t d_ff() const { return ffn_in.cols(); }

  // Throws std::invalid_argument when d_model != n_heads * d_head, a shape
  // is off, or a weight is non-finite.
  void validate() const;

  static AttentionParams zeros(std::size_t d_model, std::size_t n_heads,
                               std::size_t d_ff);
  // Entries uniform in [-scale, scale].
  static AttentionParams random(std::size_t d_model, std::size_t n_heads,
                                std::size_t d_ff, Rng& rng,
                                double scale = 0.5);
};

struct TokenSequence {
  Matrix tokens;  // T x d_model
  bool use_positions = false;
};

// softmax(Q K^T / sqrt(d_k)), row-wise.
Matrix attention_weights(const Matrix& query, const Matrix& key);

Matrix scaled_dot_attention(const Matrix& query, const Matrix& key,
                            const Matrix& value);

// Concat(head_1, ..., head_h) W^M with head_i = Attention(X W^Q_i, X W^K_i,
// X W^V_i).
Matrix multi_head(const Matrix& x, const AttentionParams& params);

// Sinusoidal table: sin on even columns, cos on odd columns.
Matrix sinusoidal_positions(std::size_t length, std::size_t d_model);

// X' = X + MultiHead(X); H = X' + FFN(X'), positions added to X first when
// enabled.
Matrix encode(const TokenSequence& seq, const AttentionParams& params);

Json params_to_json(const AttentionParams& params);
AttentionParams params_from_json(const Json& j);

}  // namespace tbert::attention

#endif  // TBERT_ATTENTION_H_
