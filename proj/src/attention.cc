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

#include "tbert/attention.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tbert::attention {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("attention: " + what);
}

void require_shape(const Matrix& m, std::size_t rows, std::size_t cols,
                   const std::string& name) {
  require(m.rows() == rows && m.cols() == cols,
          name + " has shape " + std::to_string(m.rows()) + "x" +
              std::to_string(m.cols()) + ", expected " +
              std::to_string(rows) + "x" + std::to_string(cols));
}

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng,
                     double scale) {
  Matrix m(rows, cols);
  for (double& v : m.values()) v = (2.0 * rng.uniform() - 1.0) * scale;
  return m;
}

void softmax_rows(Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    const double peak = *std::max_element(row.begin(), row.end());
    double sum = 0.0;
    for (double& v : row) {
      v = std::exp(v - peak);
      sum += v;
    }
    for (double& v : row) v /= sum;
  }
}

}  // namespace

void AttentionParams::validate() const {
  require(n_heads >= 1, "n_heads must be >= 1");
  require(d_model % n_heads == 0, "d_model must be a multiple of n_heads");
  require(heads.size() == n_heads, "one projection triple per head required");
  const std::size_t dh = d_head();
  for (std::size_t h = 0; h < heads.size(); ++h) {
    const std::string tag = "head " + std::to_string(h);
    require_shape(heads[h].query, d_model, dh, tag + " W^Q");
    require_shape(heads[h].key, d_model, dh, tag + " W^K");
    require_shape(heads[h].value, d_model, dh, tag + " W^V");
    require(all_finite(heads[h].query) && all_finite(heads[h].key) &&
                all_finite(heads[h].value),
            tag + " has non-finite weights");
  }
  require_shape(output, n_heads * dh, d_model, "W^M");
  require(ffn_in.rows() == d_model, "ffn_in must have d_model rows");
  require(ffn_in_bias.size() == ffn_in.cols(), "ffn_in_bias size");
  require_shape(ffn_out, ffn_in.cols(), d_model, "ffn_out");
  require(ffn_out_bias.size() == d_model, "ffn_out_bias size");
  require(all_finite(output) && all_finite(ffn_in) && all_finite(ffn_out),
          "non-finite weights");
}

AttentionParams AttentionParams::zeros(std::size_t d_model,
                                       std::size_t n_heads, std::size_t d_ff) {
  require(n_heads >= 1 && d_model % n_heads == 0,
          "d_model must be a positive multiple of n_heads");
  AttentionParams p;
  p.d_model = d_model;
  p.n_heads = n_heads;
  const std::size_t dh = d_model / n_heads;
  p.heads.assign(n_heads, HeadProjection{Matrix(d_model, dh),
                                         Matrix(d_model, dh),
                                         Matrix(d_model, dh)});
  p.output = Matrix(d_model, d_model);
  p.ffn_in = Matrix(d_model, d_ff);
  p.ffn_in_bias.assign(d_ff, 0.0);
  p.ffn_out = Matrix(d_ff, d_model);
  p.ffn_out_bias.assign(d_model, 0.0);
  return p;
}

AttentionParams AttentionParams::random(std::size_t d_model,
                                        std::size_t n_heads, std::size_t d_ff,
                                        Rng& rng, double scale) {
  AttentionParams p = zeros(d_model, n_heads, d_ff);
  const std::size_t dh = p.d_head();
  for (auto& head : p.heads) {
    head.query = random_matrix(d_model, dh, rng, scale);
    head.key = random_matrix(d_model, dh, rng, scale);
    head.value = random_matrix(d_model, dh, rng, scale);
  }
  p.output = random_matrix(d_model, d_model, rng, scale);
  p.ffn_in = random_matrix(d_model, d_ff, rng, scale);
  for (double& b : p.ffn_in_bias) b = (2.0 * rng.uniform() - 1.0) * scale;
  p.ffn_out = random_matrix(d_ff, d_model, rng, scale);
  for (double& b : p.ffn_out_bias) b = (2.0 * rng.uniform() - 1.0) * scale;
  return p;
}

Matrix attention_weights(const Matrix& query, const Matrix& key) {
  require(query.cols() == key.cols(), "query and key widths differ");
  require(query.cols() > 0, "d_k must be positive");
  Matrix scores = matmul_transposed(query, key);
  const double inv_scale = 1.0 / std::sqrt(static_cast<double>(query.cols()));
  for (double& v : scores.values()) v *= inv_scale;
  softmax_rows(scores);
  return scores;
}

Matrix scaled_dot_attention(const Matrix& query, const Matrix& key,
                            const Matrix& value) {
  require(key.rows() == value.rows(), "key and value lengths differ");
  return matmul(attention_weights(query, key), value);
}

Matrix multi_head(const Matrix& x, const AttentionParams& params) {
  params.validate();
  require(x.cols() == params.d_model, "input width does not match d_model");
  const std::size_t dh = params.d_head();
  Matrix concat(x.rows(), params.n_heads * dh);
  for (std::size_t h = 0; h < params.n_heads; ++h) {
    const auto& proj = params.heads[h];
    const Matrix head = scaled_dot_attention(
        matmul(x, proj.query), matmul(x, proj.key), matmul(x, proj.value));
    for (std::size_t t = 0; t < x.rows(); ++t) {
      for (std::size_t c = 0; c < dh; ++c) concat(t, h * dh + c) = head(t, c);
    }
  }
  return matmul(concat, params.output);
}

Matrix sinusoidal_positions(std::size_t length, std::size_t d_model) {
  Matrix pe(length, d_model);
  for (std::size_t pos = 0; pos < length; ++pos) {
    for (std::size_t i = 0; i < d_model; ++i) {
      const double exponent =
          static_cast<double>(2 * (i / 2)) / static_cast<double>(d_model);
      const double angle =
          static_cast<double>(pos) / std::pow(10000.0, exponent);
      pe(pos, i) = (i % 2 == 0) ? std::sin(angle) : std::cos(angle);
    }
  }
  return pe;
}

Matrix encode(const TokenSequence& seq, const AttentionParams& params) {
  params.validate();
  require(seq.tokens.rows() >= 1, "token sequence is empty");
  require(seq.tokens.cols() == params.d_model,
          "token width does not match d_model");
  Matrix x = seq.tokens;
  if (seq.use_positions) {
    const Matrix pe = sinusoidal_positions(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.values().size(); ++i) {
      x.values()[i] += pe.values()[i];
    }
  }
  Matrix residual = multi_head(x, params);
  for (std::size_t i = 0; i < x.values().size(); ++i) {
    residual.values()[i] += x.values()[i];
  }

  Matrix hidden = matmul(residual, params.ffn_in);
  for (std::size_t r = 0; r < hidden.rows(); ++r) {
    auto row = hidden.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      row[c] = std::max(0.0, row[c] + params.ffn_in_bias[c]);
    }
  }
  Matrix out = matmul(hidden, params.ffn_out);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      row[c] += params.ffn_out_bias[c] + residual(r, c);
    }
  }
  return out;
}

Json params_to_json(const AttentionParams& params) {
  Json j;
  j["d_model"] = params.d_model;
  j["n_heads"] = params.n_heads;
  Json heads = Json::array();
  for (const auto& h : params.heads) {
    Json hj;
    hj["query"] = matrix_to_json(h.query);
    hj["key"] = matrix_to_json(h.key);
    hj["value"] = matrix_to_json(h.value);
    heads.push_back(std::move(hj));
  }
  j["heads"] = std::move(heads);
  j["output"] = matrix_to_json(params.output);
  j["ffn_in"] = matrix_to_json(params.ffn_in);
  j["ffn_in_bias"] = params.ffn_in_bias;
  j["ffn_out"] = matrix_to_json(params.ffn_out);
  j["ffn_out_bias"] = params.ffn_out_bias;
  return j;
}

AttentionParams params_from_json(const Json& j) {
  AttentionParams p;
  p.d_model = j.at("d_model").get<std::size_t>();
  p.n_heads = j.at("n_heads").get<std::size_t>();
  for (const auto& hj : j.at("heads")) {
    p.heads.push_back({matrix_from_json(hj.at("query")),
                       matrix_from_json(hj.at("key")),
                       matrix_from_json(hj.at("value"))});
  }
  p.output = matrix_from_json(j.at("output"));
  p.ffn_in = matrix_from_json(j.at("ffn_in"));
  p.ffn_in_bias = j.at("ffn_in_bias").get<std::vector<double>>();
  p.ffn_out = matrix_from_json(j.at("ffn_out"));
  p.ffn_out_bias = j.at("ffn_out_bias").get<std::vector<double>>();
  p.validate();
  return p;
}

}  // namespace tbert::attention
