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

#ifndef TBERT_AUTOENCODER_H_
#define TBERT_AUTOENCODER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tbert/fusion.h"
#include "tbert/json_util.h"
#include "tbert/matrix.h"
#include "tbert/random.h"

namespace tbert {

struct AeConfig {
  std::size_t latent_dim = 64;
  std::size_t epochs = 50;
  std::size_t batch_size = 128;
  double learning_rate = 1e-3;
  double l1 = 1e-4;  // L1 penalty on weights (biases excluded)
  double l2 = 0.0;   // L2 penalty on weights (biases excluded)
  double dropout = 0.01;  // drop probability on encoder activations
  std::uint64_t seed = 42;
  // Permit latent_dim >= input dim.
  bool allow_expansion = false;
  // Hold out ~10% of rows (by id hash) for the validation loss curve.
  bool validation_split = true;

  void validate() const;
};

// input -> ReLU(latent) -> linear reconstruction.
struct AeModel {
  AeConfig config;
  std::size_t input_dim = 0;
  Matrix encoder_weights;  // input x latent
  std::vector<double> encoder_bias;
  Matrix decoder_weights;  // latent x input
  std::vector<double> decoder_bias;
  double initial_loss = 0.0;
  std::vector<double> train_loss;  // per epoch, reconstruction MSE + penalty
  std::vector<double> val_loss;    // empty when no rows were held out
};

struct AeGradients {
  Matrix encoder_weights;
  std::vector<double> encoder_bias;
  Matrix decoder_weights;
  std::vector<double> decoder_bias;
};

// Glorot-uniform weights, zero biases.
AeModel init_autoencoder(std::size_t input_dim, const AeConfig& config);

// Mini-batch Adam on mean-squared reconstruction error plus the weight
// penalties. Deterministic for a fixed seed. Throws std::invalid_argument on
// empty data and std::runtime_error when the loss diverges.
AeModel train_autoencoder(const Matrix& data, const AeConfig& config,
                          std::span<const std::string> ids = {});
AeModel train_autoencoder(const FusedMatrix& data, const AeConfig& config);

// ReLU(X W_e + b_e); dropout never applies here.
Matrix encode(const AeModel& model, const Matrix& data);
Matrix reconstruct(const AeModel& model, const Matrix& data);
double reconstruction_mse(const AeModel& model, const Matrix& data);
double weight_penalty(const AeModel& model);

// Total loss (MSE + penalty) of `batch` without dropout; fills `grads` when
// non-null. L1 uses subgradient 0 at exactly-zero weights.
double ae_loss(const AeModel& model, const Matrix& batch,
               AeGradients* grads = nullptr);

// Max relative error between analytic and central-difference gradients
// (h = 1e-5) over every parameter for one sample. With l1 > 0, weights
// within 1e-6 of zero are skipped.
double gradient_check(const AeModel& model, std::span<const double> sample);

// Train/validation membership by FNV-1a hash of the id.
bool is_validation_id(const std::string& id);

Json ae_to_json(const AeModel& model);
AeModel ae_from_json(const Json& j);
// `epoch,train_loss,val_loss`, one row per epoch.
std::string loss_history_csv(const AeModel& model);

}  // namespace tbert

#endif  // TBERT_AUTOENCODER_H_
