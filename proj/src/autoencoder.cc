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

#include "tbert/autoencoder.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "tbert/adam.h"

namespace tbert {

void AeConfig::validate() const {
  if (latent_dim < 1) throw std::invalid_argument("ae: latent_dim must be >= 1");
  if (epochs < 1) throw std::invalid_argument("ae: epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("ae: batch_size must be >= 1");
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("ae: learning_rate must be > 0");
  }
  if (l1 < 0.0 || l2 < 0.0) {
    throw std::invalid_argument("ae: penalties must be >= 0");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw std::invalid_argument("ae: dropout must be in [0, 1)");
  }
}

namespace {

constexpr std::uint64_t kShuffleStream = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kDropoutStream = 0xD1B54A32D192ED03ULL;

void check_width(const AeModel& model, const Matrix& data) {
  if (data.cols() != model.input_dim) {
    throw std::invalid_argument("ae: data has " + std::to_string(data.cols()) +
                                " columns, model expects " +
                                std::to_string(model.input_dim));
  }
}

Matrix pre_activation(const AeModel& model, const Matrix& x) {
  Matrix pre = matmul(x, model.encoder_weights);
  for (std::size_t r = 0; r < pre.rows(); ++r) {
    auto row = pre.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += model.encoder_bias[c];
  }
  return pre;
}

Matrix decode(const AeModel& model, const Matrix& hidden) {
  Matrix out = matmul(hidden, model.decoder_weights);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += model.decoder_bias[c];
  }
  return out;
}

double l1_norm(const Matrix& m) {
  double s = 0.0;
  for (double v : m.values()) s += std::abs(v);
  return s;
}

double sq_norm(const Matrix& m) {
  double s = 0.0;
  for (double v : m.values()) s += v * v;
  return s;
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void add_penalty_gradient(const Matrix& w, Matrix& g, double l1, double l2) {
  auto gv = g.values();
  auto wv = w.values();
  for (std::size_t i = 0; i < wv.size(); ++i) {
    gv[i] += l1 * sign(wv[i]) + 2.0 * l2 * wv[i];
  }
}

// Loss of one batch. `mask` (same shape as the hidden layer) holds the
// inverted-dropout scale per unit, or is null for no dropout.
double batch_loss(const AeModel& model, const Matrix& x, const Matrix* mask,
                  AeGradients* grads) {
  const Matrix pre = pre_activation(model, x);
  Matrix hidden = pre;
  for (double& v : hidden.values()) v = std::max(0.0, v);
  if (mask != nullptr) {
    for (std::size_t i = 0; i < hidden.values().size(); ++i) {
      hidden.values()[i] *= mask->values()[i];
    }
  }
  const Matrix out = decode(model, hidden);

  const double denom = static_cast<double>(x.rows() * x.cols());
  Matrix diff(x.rows(), x.cols());
  double sse = 0.0;
  for (std::size_t i = 0; i < diff.values().size(); ++i) {
    const double d = out.values()[i] - x.values()[i];
    diff.values()[i] = d;
    sse += d * d;
  }
  const double loss = sse / denom + weight_penalty(model);
  if (grads == nullptr) return loss;

  const std::size_t latent = model.encoder_weights.cols();
  const std::size_t input = model.input_dim;
  grads->encoder_weights = Matrix(input, latent);
  grads->encoder_bias.assign(latent, 0.0);
  grads->decoder_weights = Matrix(latent, input);
  grads->decoder_bias.assign(input, 0.0);

  Matrix d_out = diff;
  for (double& v : d_out.values()) v *= 2.0 / denom;

  Matrix d_pre(x.rows(), latent);
  for (std::size_t b = 0; b < x.rows(); ++b) {
    const auto h_row = hidden.row(b);
    const auto dy_row = d_out.row(b);
    for (std::size_t i = 0; i < input; ++i) grads->decoder_bias[i] += dy_row[i];
    for (std::size_t l = 0; l < latent; ++l) {
      const double h = h_row[l];
      auto g_row = grads->decoder_weights.row(l);
      if (h != 0.0) {
        for (std::size_t i = 0; i < input; ++i) g_row[i] += h * dy_row[i];
      }
      if (pre(b, l) <= 0.0) continue;
      double dh = dot(dy_row, model.decoder_weights.row(l));
      if (mask != nullptr) dh *= (*mask)(b, l);
      d_pre(b, l) = dh;
    }
    const auto x_row = x.row(b);
    const auto dz_row = d_pre.row(b);
    for (std::size_t l = 0; l < latent; ++l) grads->encoder_bias[l] += dz_row[l];
    for (std::size_t i = 0; i < input; ++i) {
      const double xi = x_row[i];
      if (xi == 0.0) continue;
      auto g_row = grads->encoder_weights.row(i);
      for (std::size_t l = 0; l < latent; ++l) g_row[l] += xi * dz_row[l];
    }
  }
  add_penalty_gradient(model.encoder_weights, grads->encoder_weights,
                       model.config.l1, model.config.l2);
  add_penalty_gradient(model.decoder_weights, grads->decoder_weights,
                       model.config.l1, model.config.l2);
  return loss;
}

Matrix gather_rows(const Matrix& data, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), data.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = data.row(rows[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

bool is_validation_id(const std::string& id) { return fnv1a(id) % 10 == 0; }

AeModel init_autoencoder(std::size_t input_dim, const AeConfig& config) {
  config.validate();
  if (input_dim < 1) throw std::invalid_argument("ae: input_dim must be >= 1");
  AeModel model;
  model.config = config;
  model.input_dim = input_dim;
  const std::size_t latent = config.latent_dim;
  Rng rng(config.seed);
  const double limit =
      std::sqrt(6.0 / static_cast<double>(input_dim + latent));
  model.encoder_weights = Matrix(input_dim, latent);
  for (double& v : model.encoder_weights.values()) {
    v = (2.0 * rng.uniform() - 1.0) * limit;
  }
  model.decoder_weights = Matrix(latent, input_dim);
  for (double& v : model.decoder_weights.values()) {
    v = (2.0 * rng.uniform() - 1.0) * limit;
  }
  model.encoder_bias.assign(latent, 0.0);
  model.decoder_bias.assign(input_dim, 0.0);
  return model;
}

AeModel train_autoencoder(const Matrix& data, const AeConfig& config,
                          std::span<const std::string> ids) {
  config.validate();
  if (data.rows() == 0 || data.cols() == 0) {
    throw std::invalid_argument("ae: empty training data");
  }
  if (!ids.empty() && ids.size() != data.rows()) {
    throw std::invalid_argument("ae: ids do not match data rows");
  }
  if (config.latent_dim >= data.cols() && !config.allow_expansion) {
    throw std::invalid_argument(
        "ae: latent_dim " + std::to_string(config.latent_dim) +
        " does not compress input dim " + std::to_string(data.cols()) +
        " (set allow_expansion to override)");
  }

  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> val_rows;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const bool val = config.validation_split &&
                     is_validation_id(ids.empty() ? std::to_string(r) : ids[r]);
    (val ? val_rows : train_rows).push_back(r);
  }
  if (train_rows.empty()) {
    train_rows.swap(val_rows);
  }
  const Matrix train = gather_rows(data, train_rows);
  const Matrix val = gather_rows(data, val_rows);

  AeModel model = init_autoencoder(data.cols(), config);
  const std::size_t latent = config.latent_dim;
  AdamState enc_w_state(model.encoder_weights.values().size());
  AdamState enc_b_state(latent);
  AdamState dec_w_state(model.decoder_weights.values().size());
  AdamState dec_b_state(model.input_dim);

  Rng shuffle_rng(config.seed ^ kShuffleStream);
  Rng dropout_rng(config.seed ^ kDropoutStream);
  const double keep_scale = 1.0 / (1.0 - config.dropout);

  model.initial_loss = ae_loss(model, train);
  std::vector<std::size_t> order(train.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  AeGradients grads;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const Matrix batch = gather_rows(
          train, std::span<const std::size_t>(order).subspan(start, end - start));
      Matrix mask;
      if (config.dropout > 0.0) {
        mask = Matrix(batch.rows(), latent);
        for (double& m : mask.values()) {
          m = dropout_rng.uniform() < config.dropout ? 0.0 : keep_scale;
        }
      }
      batch_loss(model, batch, config.dropout > 0.0 ? &mask : nullptr, &grads);
      adam_step(model.encoder_weights.values(), grads.encoder_weights.values(),
                enc_w_state, config.learning_rate);
      adam_step(model.encoder_bias, grads.encoder_bias, enc_b_state,
                config.learning_rate);
      adam_step(model.decoder_weights.values(), grads.decoder_weights.values(),
                dec_w_state, config.learning_rate);
      adam_step(model.decoder_bias, grads.decoder_bias, dec_b_state,
                config.learning_rate);
    }
    const double loss = ae_loss(model, train);
    if (!std::isfinite(loss) || loss > 1e6 * model.initial_loss) {
      std::ostringstream msg;
      msg << "ae: training diverged at epoch " << epoch + 1 << " (loss "
          << loss << ", initial " << model.initial_loss
          << "); lower the learning rate";
      throw std::runtime_error(msg.str());
    }
    model.train_loss.push_back(loss);
    if (val.rows() > 0) model.val_loss.push_back(ae_loss(model, val));
  }
  return model;
}

AeModel train_autoencoder(const FusedMatrix& data, const AeConfig& config) {
  return train_autoencoder(data.data, config, data.ids);
}

Matrix encode(const AeModel& model, const Matrix& data) {
  check_width(model, data);
  Matrix latent = pre_activation(model, data);
  for (double& v : latent.values()) v = std::max(0.0, v);
  return latent;
}

Matrix reconstruct(const AeModel& model, const Matrix& data) {
  return decode(model, encode(model, data));
}

double reconstruction_mse(const AeModel& model, const Matrix& data) {
  const Matrix out = reconstruct(model, data);
  double sse = 0.0;
  for (std::size_t i = 0; i < out.values().size(); ++i) {
    const double d = out.values()[i] - data.values()[i];
    sse += d * d;
  }
  return sse / static_cast<double>(data.rows() * data.cols());
}

double weight_penalty(const AeModel& model) {
  const auto& c = model.config;
  double p = 0.0;
  if (c.l1 > 0.0) {
    p += c.l1 * (l1_norm(model.encoder_weights) + l1_norm(model.decoder_weights));
  }
  if (c.l2 > 0.0) {
    p += c.l2 * (sq_norm(model.encoder_weights) + sq_norm(model.decoder_weights));
  }
  return p;
}

double ae_loss(const AeModel& model, const Matrix& batch, AeGradients* grads) {
  check_width(model, batch);
  return batch_loss(model, batch, nullptr, grads);
}

double gradient_check(const AeModel& model, std::span<const double> sample) {
  const Matrix x(1, sample.size(),
                 std::vector<double>(sample.begin(), sample.end()));
  AeGradients analytic;
  ae_loss(model, x, &analytic);

  constexpr double kStep = 1e-5;
  AeModel probe = model;
  double worst = 0.0;
  const auto check = [&](std::span<double> params,
                         std::span<const double> grad, bool is_weight) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double saved = params[i];
      if (is_weight && model.config.l1 > 0.0 && std::abs(saved) < 1e-6) {
        continue;
      }
      params[i] = saved + kStep;
      const double up = ae_loss(probe, x);
      params[i] = saved - kStep;
      const double down = ae_loss(probe, x);
      params[i] = saved;
      const double numeric = (up - down) / (2.0 * kStep);
      const double scale =
          std::max({std::abs(grad[i]), std::abs(numeric), 1e-8});
      worst = std::max(worst, std::abs(grad[i] - numeric) / scale);
    }
  };
  check(probe.encoder_weights.values(), analytic.encoder_weights.values(), true);
  check(probe.encoder_bias, analytic.encoder_bias, false);
  check(probe.decoder_weights.values(), analytic.decoder_weights.values(), true);
  check(probe.decoder_bias, analytic.decoder_bias, false);
  return worst;
}

Json ae_to_json(const AeModel& model) {
  const auto& c = model.config;
  Json config;
  config["latent_dim"] = c.latent_dim;
  config["epochs"] = c.epochs;
  config["batch_size"] = c.batch_size;
  config["learning_rate"] = c.learning_rate;
  config["l1"] = c.l1;
  config["l2"] = c.l2;
  config["dropout"] = c.dropout;
  config["seed"] = c.seed;
  config["allow_expansion"] = c.allow_expansion;
  config["validation_split"] = c.validation_split;

  Json j;
  j["input_dim"] = model.input_dim;
  j["latent_dim"] = c.latent_dim;
  j["config"] = std::move(config);
  j["encoder_weights"] = matrix_to_json(model.encoder_weights);
  j["encoder_bias"] = model.encoder_bias;
  j["decoder_weights"] = matrix_to_json(model.decoder_weights);
  j["decoder_bias"] = model.decoder_bias;
  j["initial_loss"] = model.initial_loss;
  j["train_loss"] = model.train_loss;
  j["val_loss"] = model.val_loss;
  return j;
}

AeModel ae_from_json(const Json& j) {
  AeModel model;
  const Json& c = j.at("config");
  model.config.latent_dim = c.at("latent_dim").get<std::size_t>();
  model.config.epochs = c.at("epochs").get<std::size_t>();
  model.config.batch_size = c.at("batch_size").get<std::size_t>();
  model.config.learning_rate = c.at("learning_rate").get<double>();
  model.config.l1 = c.at("l1").get<double>();
  model.config.l2 = c.at("l2").get<double>();
  model.config.dropout = c.at("dropout").get<double>();
  model.config.seed = c.at("seed").get<std::uint64_t>();
  model.config.allow_expansion = c.value("allow_expansion", false);
  model.config.validation_split = c.value("validation_split", true);
  model.input_dim = j.at("input_dim").get<std::size_t>();
  model.encoder_weights = matrix_from_json(j.at("encoder_weights"));
  model.encoder_bias = j.at("encoder_bias").get<std::vector<double>>();
  model.decoder_weights = matrix_from_json(j.at("decoder_weights"));
  model.decoder_bias = j.at("decoder_bias").get<std::vector<double>>();
  model.initial_loss = j.value("initial_loss", 0.0);
  model.train_loss = j.at("train_loss").get<std::vector<double>>();
  model.val_loss = j.at("val_loss").get<std::vector<double>>();
  if (model.encoder_weights.rows() != model.input_dim ||
      model.encoder_weights.cols() != model.config.latent_dim ||
      model.decoder_weights.rows() != model.config.latent_dim ||
      model.decoder_weights.cols() != model.input_dim ||
      model.encoder_bias.size() != model.config.latent_dim ||
      model.decoder_bias.size() != model.input_dim) {
    throw std::runtime_error("autoencoder json: inconsistent shapes");
  }
  return model;
}

std::string loss_history_csv(const AeModel& model) {
  std::string out = "epoch,train_loss,val_loss\r\n";
  for (std::size_t e = 0; e < model.train_loss.size(); ++e) {
    out += std::to_string(e + 1) + "," + format_double(model.train_loss[e]) +
           "," +
           (e < model.val_loss.size() ? format_double(model.val_loss[e])
                                      : std::string()) +
           "\r\n";
  }
  return out;
}

}  // namespace tbert
