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

#include "tbert/sentiment.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "tbert/adam.h"
#include "tbert/csv.h"
#include "tbert/random.h"

namespace tbert {

std::optional<std::size_t> sentiment_index(std::string_view name) {
  for (std::size_t c = 0; c < kNumSentiments; ++c) {
    if (kSentimentNames[c] == name) return c;
  }
  return std::nullopt;
}

void SentimentTrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("sentiment: epochs must be >= 1");
  if (batch_size < 1 && !full_batch) {
    throw std::invalid_argument("sentiment: batch_size must be >= 1");
  }
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("sentiment: learning_rate must be > 0");
  }
  if (weight_decay < 0.0) {
    throw std::invalid_argument("sentiment: weight_decay must be >= 0");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("sentiment: epsilon must be > 0");
  }
}

std::array<double, kNumSentiments> softmax(
    const std::array<double, kNumSentiments>& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::array<double, kNumSentiments> p{};
  double z = 0.0;
  for (std::size_t c = 0; c < kNumSentiments; ++c) {
    p[c] = std::exp(logits[c] - top);
    z += p[c];
  }
  for (double& v : p) v /= z;
  return p;
}

namespace {

std::array<double, kNumSentiments> logits_for(const SentimentModel& model,
                                              std::span<const double> x) {
  std::array<double, kNumSentiments> out{};
  for (std::size_t c = 0; c < kNumSentiments; ++c) out[c] = model.bias[c];
  for (std::size_t j = 0; j < x.size(); ++j) {
    const auto w = model.weights.row(j);
    for (std::size_t c = 0; c < kNumSentiments; ++c) out[c] += x[j] * w[c];
  }
  return out;
}

Matrix gather(const Matrix& x, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = x.row(rows[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace

double sentiment_loss(const SentimentModel& model, const Matrix& x,
                      std::span<const std::size_t> labels,
                      SentimentGradients* grads) {
  if (x.cols() != model.dim()) {
    throw std::invalid_argument("sentiment: embedding dim " +
                                std::to_string(x.cols()) + ", model expects " +
                                std::to_string(model.dim()));
  }
  if (labels.size() != x.rows() || x.rows() == 0) {
    throw std::invalid_argument("sentiment: label count mismatch");
  }
  if (grads != nullptr) {
    grads->weights = Matrix(model.dim(), kNumSentiments);
    grads->bias.assign(kNumSentiments, 0.0);
  }
  const double scale = 1.0 / static_cast<double>(x.rows());
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto row = x.row(i);
    const auto logits = logits_for(model, row);
    const double top = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (double l : logits) z += std::exp(l - top);
    const double log_z = top + std::log(z);
    loss += log_z - logits[labels[i]];
    if (grads == nullptr) continue;
    std::array<double, kNumSentiments> delta{};
    for (std::size_t c = 0; c < kNumSentiments; ++c) {
      delta[c] = (std::exp(logits[c] - log_z) - (c == labels[i] ? 1.0 : 0.0)) *
                 scale;
      grads->bias[c] += delta[c];
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      auto g = grads->weights.row(j);
      for (std::size_t c = 0; c < kNumSentiments; ++c) g[c] += row[j] * delta[c];
    }
  }
  return loss * scale;
}

SentimentModel train_classifier(const LabeledSet& data,
                                const SentimentTrainConfig& config) {
  config.validate();
  data.embeddings.validate();
  if (data.labels.size() != data.embeddings.rows()) {
    throw std::invalid_argument("sentiment: label count mismatch");
  }
  std::array<bool, kNumSentiments> present{};
  for (std::size_t l : data.labels) {
    if (l >= kNumSentiments) {
      throw std::invalid_argument("sentiment: label index out of range");
    }
    present[l] = true;
  }
  if (std::count(present.begin(), present.end(), true) < 2) {
    throw std::invalid_argument(
        "sentiment: training data needs at least two classes");
  }

  const Matrix x = data.embeddings.to_matrix();
  SentimentModel model;
  model.weights = Matrix(x.cols(), kNumSentiments);
  AdamState w_state(model.weights.values().size(), config.epsilon);
  AdamState b_state(kNumSentiments, config.epsilon);
  Rng rng(config.seed);
  std::vector<std::size_t> order(x.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t batch =
      config.full_batch ? x.rows() : std::min(config.batch_size, x.rows());

  SentimentGradients grads;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (!config.full_batch) rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      const auto idx =
          std::span<const std::size_t>(order).subspan(start, end - start);
      std::vector<std::size_t> labels;
      labels.reserve(idx.size());
      for (std::size_t i : idx) labels.push_back(data.labels[i]);
      const double loss =
          config.full_batch
              ? sentiment_loss(model, x, data.labels, &grads)
              : sentiment_loss(model, gather(x, idx), labels, &grads);
      if (!std::isfinite(loss)) {
        throw std::runtime_error("sentiment: non-finite loss at epoch " +
                                 std::to_string(epoch + 1) +
                                 "; lower the learning rate");
      }
      adam_step(model.weights.values(), grads.weights.values(), w_state,
                config.learning_rate, config.weight_decay);
      adam_step(model.bias, grads.bias, b_state, config.learning_rate,
                config.weight_decay);
    }
    const double epoch_loss = sentiment_loss(model, x, data.labels);
    if (!std::isfinite(epoch_loss)) {
      throw std::runtime_error("sentiment: non-finite loss at epoch " +
                               std::to_string(epoch + 1));
    }
    model.loss_history.push_back(epoch_loss);
  }
  return model;
}

std::vector<Prediction> predict(const SentimentModel& model,
                                const EmbeddingMatrix& embeddings) {
  if (embeddings.dim != model.dim()) {
    throw std::invalid_argument("sentiment: embedding dim " +
                                std::to_string(embeddings.dim) +
                                ", model expects " +
                                std::to_string(model.dim()));
  }
  std::vector<Prediction> out;
  out.reserve(embeddings.rows());
  std::vector<double> row(embeddings.dim);
  for (std::size_t r = 0; r < embeddings.rows(); ++r) {
    const auto src = embeddings.row(r);
    std::copy(src.begin(), src.end(), row.begin());
    Prediction p;
    p.probabilities = softmax(logits_for(model, row));
    p.label = static_cast<std::size_t>(
        std::max_element(p.probabilities.begin(), p.probabilities.end()) -
        p.probabilities.begin());
    out.push_back(p);
  }
  return out;
}

SentimentEvaluation evaluate(const SentimentModel& model,
                             const LabeledSet& data) {
  const auto preds = predict(model, data.embeddings);
  std::vector<std::size_t> labels(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) labels[i] = preds[i].label;
  SentimentEvaluation ev;
  ev.counts = confusion_counts(data.labels, labels, kNumSentiments);
  ev.accuracy = accuracy(ev.counts);
  ev.weighted_f1 = weighted_f1(ev.counts);
  ev.per_class_accuracy = per_class_accuracy(data.labels, labels);
  return ev;
}

std::vector<std::pair<std::string, std::string>> read_labels_csv(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open labels file " + path);
  const auto rows = read_csv(in);
  if (rows.empty() || rows[0].size() < 2 || rows[0][0] != "id" ||
      rows[0][1] != "label") {
    throw std::runtime_error(path + ": expected an id,label header");
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() == 1 && rows[i][0].empty()) continue;
    if (rows[i].size() < 2) {
      throw std::runtime_error(path + ": row " + std::to_string(i + 1) +
                               " has fewer than 2 fields");
    }
    out.emplace_back(rows[i][0], rows[i][1]);
  }
  return out;
}

std::map<std::string, std::string> read_label_map(const std::string& path) {
  const Json j = parse_json_file(path);
  if (!j.is_object()) throw std::runtime_error(path + ": expected an object");
  std::map<std::string, std::string> out;
  for (const auto& [key, value] : j.items()) {
    const auto target = value.get<std::string>();
    if (!sentiment_index(target)) {
      throw std::runtime_error(path + ": unknown target class '" + target +
                               "'");
    }
    out[key] = target;
  }
  return out;
}

LabeledSet make_labeled_set(
    const EmbeddingMatrix& embeddings,
    std::span<const std::pair<std::string, std::string>> labels,
    const std::map<std::string, std::string>& label_map) {
  std::unordered_map<std::string, std::size_t> by_id;
  for (const auto& [id, raw] : labels) {
    std::string name = raw;
    if (!label_map.empty()) {
      const auto it = label_map.find(raw);
      if (it == label_map.end()) {
        throw std::runtime_error("label '" + raw + "' for id " + id +
                                 " is not in the label map");
      }
      name = it->second;
    }
    const auto c = sentiment_index(name);
    if (!c) {
      throw std::runtime_error("unknown sentiment label '" + name +
                               "' for id " + id);
    }
    by_id[id] = *c;
  }
  std::vector<std::string> ids;
  for (const auto& id : embeddings.ids) {
    if (by_id.contains(id)) ids.push_back(id);
  }
  LabeledSet set;
  set.embeddings = align_embeddings(embeddings, ids);
  for (const auto& id : ids) set.labels.push_back(by_id.at(id));
  return set;
}

void write_predictions_csv(std::ostream& out, std::span<const std::string> ids,
                           std::span<const Prediction> predictions) {
  if (ids.size() != predictions.size()) {
    throw std::invalid_argument("predictions: id count mismatch");
  }
  write_csv_row(out, {"id", "sentiment", "p_positive", "p_negative",
                      "p_neutral"});
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& p = predictions[i];
    write_csv_row(out, {ids[i], std::string(kSentimentNames[p.label]),
                        format_double(p.probabilities[0]),
                        format_double(p.probabilities[1]),
                        format_double(p.probabilities[2])});
  }
}

Json sentiment_to_json(const SentimentModel& model) {
  Json j;
  j["classes"] = Json::array();
  for (auto name : kSentimentNames) j["classes"].push_back(std::string(name));
  j["dim"] = model.dim();
  j["weights"] = matrix_to_json(model.weights);
  j["bias"] = model.bias;
  j["loss_history"] = model.loss_history;
  return j;
}

SentimentModel sentiment_from_json(const Json& j) {
  SentimentModel model;
  const auto classes = j.at("classes").get<std::vector<std::string>>();
  if (classes.size() != kNumSentiments) {
    throw std::runtime_error("sentiment json: expected 3 classes");
  }
  for (std::size_t c = 0; c < kNumSentiments; ++c) {
    if (classes[c] != kSentimentNames[c]) {
      throw std::runtime_error("sentiment json: unexpected class order");
    }
  }
  model.weights = matrix_from_json(j.at("weights"));
  model.bias = j.at("bias").get<std::vector<double>>();
  model.loss_history = j.value("loss_history", std::vector<double>{});
  if (model.weights.cols() != kNumSentiments ||
      model.bias.size() != kNumSentiments) {
    throw std::runtime_error("sentiment json: inconsistent shapes");
  }
  return model;
}

}  // namespace tbert
