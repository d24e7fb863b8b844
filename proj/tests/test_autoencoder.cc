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

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "tbert/autoencoder.h"

using tbert::AeConfig;
using tbert::Matrix;

namespace {

// Points c1 * u + c2 * v in R^10 for fixed random directions u and v.
Matrix subspace_data(std::size_t n, std::uint64_t seed) {
  tbert::Rng rng(seed);
  std::vector<double> u(10), v(10);
  for (auto& x : u) x = rng.normal();
  for (auto& x : v) x = rng.normal();
  Matrix m(n, 10);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * rng.uniform() - 1.0;
    const double b = 2.0 * rng.uniform() - 1.0;
    for (std::size_t c = 0; c < 10; ++c) m(i, c) = a * u[c] + b * v[c];
  }
  return m;
}

AeConfig small_config() {
  AeConfig cfg;
  cfg.latent_dim = 4;
  cfg.epochs = 3;
  cfg.batch_size = 16;
  cfg.dropout = 0.0;
  cfg.seed = 3;
  return cfg;
}

}  // namespace

TEST_CASE("recovers a two dimensional subspace") {
  const Matrix data = subspace_data(200, 12);
  AeConfig cfg;
  cfg.latent_dim = 2;
  cfg.epochs = 600;
  cfg.batch_size = 32;
  cfg.learning_rate = 1e-2;
  cfg.dropout = 0.0;
  cfg.l1 = 0.0;
  cfg.l2 = 0.0;
  cfg.seed = 1;
  const auto model = tbert::train_autoencoder(data, cfg);
  CHECK(tbert::reconstruction_mse(model, data) < 1e-3);
  const Matrix rec = tbert::reconstruct(model, data);
  double worst = 0.0;
  for (std::size_t i = 0; i < data.values().size(); ++i) {
    worst = std::max(worst, std::abs(rec.values()[i] - data.values()[i]));
  }
  CHECK(worst < 0.05);
  CHECK(model.train_loss.back() < model.initial_loss);
  CHECK_FALSE(model.val_loss.empty());
}

TEST_CASE("encode with zero or negative pre-activations") {
  auto model = tbert::init_autoencoder(3, small_config());
  const Matrix x = Matrix::from_rows({{1, 2, 3}, {-1, 0, 4}});
  for (double& w : model.encoder_weights.values()) w = 0.0;
  CHECK(tbert::encode(model, x) == Matrix(2, 4));
  for (double& b : model.encoder_bias) b = -1.0;
  for (double& w : model.encoder_weights.values()) w = 0.01;
  CHECK(tbert::encode(model, Matrix::from_rows({{1, 1, 1}})) == Matrix(1, 4));
}

TEST_CASE("identity model reproduces nonnegative input") {
  AeConfig cfg = small_config();
  cfg.latent_dim = 3;
  cfg.allow_expansion = true;
  auto model = tbert::init_autoencoder(3, cfg);
  model.encoder_weights = Matrix::identity(3);
  model.decoder_weights = Matrix::identity(3);
  const Matrix x = Matrix::from_rows({{0, 1, 2}, {3.5, 0.25, 9}});
  CHECK(tbert::reconstruct(model, x) == x);
  CHECK(tbert::reconstruction_mse(model, x) == 0.0);
}

TEST_CASE("gradient check on random small models") {
  tbert::Rng rng(77);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    AeConfig cfg = small_config();
    cfg.seed = seed;
    cfg.l1 = 1e-3;
    cfg.l2 = 1e-3;
    auto model = tbert::init_autoencoder(10, cfg);
    for (double& b : model.encoder_bias) b = 0.1 * rng.normal();
    std::vector<double> sample(10);
    for (double& s : sample) s = rng.normal();
    CHECK(tbert::gradient_check(model, sample) < 1e-4);
  }
}

TEST_CASE("zero model on zero input has zero gradients") {
  AeConfig cfg = small_config();
  cfg.l1 = 0.0;
  auto model = tbert::init_autoencoder(10, cfg);
  for (double& w : model.encoder_weights.values()) w = 0.0;
  for (double& w : model.decoder_weights.values()) w = 0.0;
  const std::vector<double> zeros(10, 0.0);
  CHECK(tbert::gradient_check(model, zeros) == 0.0);
  tbert::AeGradients g;
  CHECK(tbert::ae_loss(model, Matrix(1, 10), &g) == 0.0);
  for (double v : g.decoder_bias) CHECK(v == 0.0);
}

TEST_CASE("training is deterministic") {
  const Matrix data = subspace_data(60, 4);
  AeConfig cfg = small_config();
  cfg.dropout = 0.2;
  const auto a = tbert::train_autoencoder(data, cfg);
  const auto b = tbert::train_autoencoder(data, cfg);
  CHECK(a.encoder_weights == b.encoder_weights);
  CHECK(a.decoder_bias == b.decoder_bias);
  CHECK(a.train_loss == b.train_loss);
  cfg.seed = 4;
  CHECK_FALSE(tbert::train_autoencoder(data, cfg).encoder_weights ==
              a.encoder_weights);
}

TEST_CASE("configuration and input errors") {
  AeConfig cfg = small_config();
  CHECK_THROWS_AS(tbert::train_autoencoder(Matrix(0, 5), cfg),
                  std::invalid_argument);
  cfg.latent_dim = 10;
  CHECK_THROWS_AS(tbert::train_autoencoder(subspace_data(5, 1), cfg),
                  std::invalid_argument);
  cfg = small_config();
  cfg.dropout = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  const std::vector<std::string> ids{"only-one"};
  CHECK_THROWS(tbert::train_autoencoder(subspace_data(5, 1), cfg, ids));
}

TEST_CASE("divergence is reported") {
  AeConfig cfg = small_config();
  cfg.learning_rate = 1e6;
  cfg.epochs = 50;
  Matrix data = subspace_data(40, 2);
  for (double& v : data.values()) v *= 1e3;
  CHECK_THROWS_AS(tbert::train_autoencoder(data, cfg), std::runtime_error);
}

TEST_CASE("validation split is a stable function of the id") {
  int held = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::string id = "doc" + std::to_string(i);
    CHECK(tbert::is_validation_id(id) == tbert::is_validation_id(id));
    held += tbert::is_validation_id(id) ? 1 : 0;
  }
  CHECK(held > 50);
  CHECK(held < 150);
}

TEST_CASE("json and loss history") {
  const auto model = tbert::train_autoencoder(subspace_data(30, 9), small_config());
  const auto back = tbert::ae_from_json(tbert::ae_to_json(model));
  CHECK(back.encoder_weights == model.encoder_weights);
  CHECK(back.decoder_weights == model.decoder_weights);
  CHECK(back.encoder_bias == model.encoder_bias);
  CHECK(back.train_loss == model.train_loss);
  const std::string csv = tbert::loss_history_csv(model);
  CHECK(csv.rfind("epoch,train_loss,val_loss\r\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n' ? 1 : 0;
  CHECK(lines == model.train_loss.size() + 1);
  CHECK(tbert::weight_penalty(model) > 0.0);
}
