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

#ifndef TBERT_SENTIMENT_H_
#define TBERT_SENTIMENT_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tbert/embeddings.h"
#include "tbert/json_util.h"
#include "tbert/matrix.h"
#include "tbert/metrics.h"

namespace tbert {

inline constexpr std::size_t kNumSentiments = 3;
// Fixed class order.
inline constexpr std::array<std::string_view, kNumSentiments> kSentimentNames = {
    "positive", "negative", "neutral"};

std::optional<std::size_t> sentiment_index(std::string_view name);

struct LabeledSet {
  EmbeddingMatrix embeddings;
  std::vector<std::size_t> labels;  // class index per row
};

struct SentimentTrainConfig {
  std::size_t epochs = 10;
  std::size_t batch_size = 32;
  double learning_rate = 1e-3;
  double weight_decay = 0.01;  // decoupled, applied to weights and biases
  double epsilon = 1e-8;
  std::uint64_t seed = 42;
  // One step per epoch over the whole set, no shuffling.
  bool full_batch = false;

  void validate() const;
};

// Softmax regression: logits = x W + b.
struct SentimentModel {
  Matrix weights;  // d x 3
  std::vector<double> bias = std::vector<double>(kNumSentiments, 0.0);
  std::vector<double> loss_history;  // mean cross-entropy after each epoch

  std::size_t dim() const { return weights.rows(); }
};

struct SentimentGradients {
  Matrix weights;
  std::vector<double> bias;
};

// AdamW on mean cross-entropy. Throws std::invalid_argument with fewer than
// two classes present and std::runtime_error on a non-finite loss.
SentimentModel train_classifier(const LabeledSet& data,
                                const SentimentTrainConfig& config);

// Mean cross-entropy over the rows of `x`; fills `grads` when non-null.
double sentiment_loss(const SentimentModel& model, const Matrix& x,
                      std::span<const std::size_t> labels,
                      SentimentGradients* grads = nullptr);

struct Prediction {
  std::size_t label = 0;  // argmax, ties to the lowest index
  std::array<double, kNumSentiments> probabilities{};
};

std::array<double, kNumSentiments> softmax(
    const std::array<double, kNumSentiments>& logits);
std::vector<Prediction> predict(const SentimentModel& model,
                                const EmbeddingMatrix& embeddings);

struct SentimentEvaluation {
  ConfusionCounts counts{kNumSentiments};
  double accuracy = 0.0;
  double weighted_f1 = 0.0;
  std::map<std::size_t, double> per_class_accuracy;
};

SentimentEvaluation evaluate(const SentimentModel& model,
                             const LabeledSet& data);

// `id,label` CSV with a header. Labels are kept as written.
std::vector<std::pair<std::string, std::string>> read_labels_csv(
    const std::string& path);
// {"happy": "positive", ...}; every target must be a known class.
std::map<std::string, std::string> read_label_map(const std::string& path);
// Maps raw labels through `label_map` (identity when empty) and aligns them
// with the embedding rows by id. Rows without a label are dropped. Throws
// std::runtime_error on an unknown label.
LabeledSet make_labeled_set(
    const EmbeddingMatrix& embeddings,
    std::span<const std::pair<std::string, std::string>> labels,
    const std::map<std::string, std::string>& label_map = {});

void write_predictions_csv(std::ostream& out, std::span<const std::string> ids,
                           std::span<const Prediction> predictions);

Json sentiment_to_json(const SentimentModel& model);
SentimentModel sentiment_from_json(const Json& j);

}  // namespace tbert

#endif  // TBERT_SENTIMENT_H_
