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

#ifndef TBERT_METRICS_H_
#define TBERT_METRICS_H_

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "tbert/matrix.h"

namespace tbert {

// Multi-class confusion matrix; entry (t, p) counts examples of true class t
// predicted as p. Per-class TP/FP/FN/TN are one-vs-rest views of it.
class ConfusionCounts {
 public:
  explicit ConfusionCounts(std::size_t num_classes = 2);
  // Binary counts with class 0 as the positive class.
  static ConfusionCounts binary(std::size_t tp, std::size_t tn, std::size_t fp,
                                std::size_t fn);

  void add(std::size_t truth, std::size_t predicted, std::size_t n = 1);

  std::size_t num_classes() const { return n_; }
  std::size_t at(std::size_t truth, std::size_t predicted) const;
  std::size_t total() const { return total_; }
  std::size_t tp(std::size_t c) const;
  std::size_t fp(std::size_t c) const;
  std::size_t fn(std::size_t c) const;
  std::size_t tn(std::size_t c) const;
  std::size_t support(std::size_t c) const { return tp(c) + fn(c); }

 private:
  std::size_t n_;
  std::vector<std::size_t> cells_;
  std::size_t total_ = 0;
};

// Throws std::invalid_argument on length mismatch or a label >= num_classes.
ConfusionCounts confusion_counts(std::span<const std::size_t> labels,
                                 std::span<const std::size_t> predictions,
                                 std::size_t num_classes);

double precision(const ConfusionCounts& counts, std::size_t c);
double recall(const ConfusionCounts& counts, std::size_t c);
// 2PR/(P+R); 0 when either ratio is undefined or P+R is 0.
double f1_score(const ConfusionCounts& counts, std::size_t c);
// Support-weighted mean of per-class F1.
double weighted_f1(const ConfusionCounts& counts);
// Correct / total (for binary counts, (TP+TN)/(TP+TN+FP+FN)). Throws
// std::invalid_argument on an empty matrix.
double accuracy(const ConfusionCounts& counts);

// Per-class recall; classes absent from `labels` have no entry.
std::map<std::size_t, double> per_class_accuracy(
    std::span<const std::size_t> labels,
    std::span<const std::size_t> predictions);

// Mean silhouette with Euclidean distance. Singleton clusters score 0.
// Throws std::invalid_argument when n < 2, sizes differ or fewer than two
// clusters are populated.
double silhouette(const Matrix& data, std::span<const std::size_t> assignments);
// Per-point scores, same conventions.
std::vector<double> silhouette_samples(const Matrix& data,
                                       std::span<const std::size_t> assignments);

}  // namespace tbert

#endif  // TBERT_METRICS_H_
