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

#include "tbert/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tbert {

ConfusionCounts::ConfusionCounts(std::size_t num_classes)
    : n_(num_classes), cells_(num_classes * num_classes, 0) {
  if (num_classes < 1) {
    throw std::invalid_argument("confusion counts need at least one class");
  }
}

ConfusionCounts ConfusionCounts::binary(std::size_t tp, std::size_t tn,
                                        std::size_t fp, std::size_t fn) {
  ConfusionCounts c(2);
  c.add(0, 0, tp);
  c.add(1, 1, tn);
  c.add(1, 0, fp);
  c.add(0, 1, fn);
  return c;
}

void ConfusionCounts::add(std::size_t truth, std::size_t predicted,
                          std::size_t n) {
  if (truth >= n_ || predicted >= n_) {
    throw std::invalid_argument("class index out of range: " +
                                std::to_string(std::max(truth, predicted)));
  }
  cells_[truth * n_ + predicted] += n;
  total_ += n;
}

std::size_t ConfusionCounts::at(std::size_t truth,
                                std::size_t predicted) const {
  return cells_.at(truth * n_ + predicted);
}

std::size_t ConfusionCounts::tp(std::size_t c) const { return at(c, c); }

std::size_t ConfusionCounts::fp(std::size_t c) const {
  std::size_t s = 0;
  for (std::size_t t = 0; t < n_; ++t) {
    if (t != c) s += at(t, c);
  }
  return s;
}

std::size_t ConfusionCounts::fn(std::size_t c) const {
  std::size_t s = 0;
  for (std::size_t p = 0; p < n_; ++p) {
    if (p != c) s += at(c, p);
  }
  return s;
}

std::size_t ConfusionCounts::tn(std::size_t c) const {
  return total_ - tp(c) - fp(c) - fn(c);
}

ConfusionCounts confusion_counts(std::span<const std::size_t> labels,
                                 std::span<const std::size_t> predictions,
                                 std::size_t num_classes) {
  if (labels.size() != predictions.size()) {
    throw std::invalid_argument("labels and predictions differ in length");
  }
  ConfusionCounts counts(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    counts.add(labels[i], predictions[i]);
  }
  return counts;
}

double precision(const ConfusionCounts& counts, std::size_t c) {
  const std::size_t denom = counts.tp(c) + counts.fp(c);
  return denom == 0 ? 0.0
                    : static_cast<double>(counts.tp(c)) /
                          static_cast<double>(denom);
}

double recall(const ConfusionCounts& counts, std::size_t c) {
  const std::size_t denom = counts.tp(c) + counts.fn(c);
  return denom == 0 ? 0.0
                    : static_cast<double>(counts.tp(c)) /
                          static_cast<double>(denom);
}

double f1_score(const ConfusionCounts& counts, std::size_t c) {
  if (counts.tp(c) + counts.fp(c) == 0 || counts.tp(c) + counts.fn(c) == 0) {
    return 0.0;
  }
  const double p = precision(counts, c);
  const double r = recall(counts, c);
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

double weighted_f1(const ConfusionCounts& counts) {
  if (counts.total() == 0) return 0.0;
  double s = 0.0;
  for (std::size_t c = 0; c < counts.num_classes(); ++c) {
    s += static_cast<double>(counts.support(c)) * f1_score(counts, c);
  }
  return s / static_cast<double>(counts.total());
}

double accuracy(const ConfusionCounts& counts) {
  if (counts.total() == 0) {
    throw std::invalid_argument("accuracy of an empty confusion matrix");
  }
  std::size_t correct = 0;
  for (std::size_t c = 0; c < counts.num_classes(); ++c) correct += counts.tp(c);
  return static_cast<double>(correct) / static_cast<double>(counts.total());
}

std::map<std::size_t, double> per_class_accuracy(
    std::span<const std::size_t> labels,
    std::span<const std::size_t> predictions) {
  if (labels.size() != predictions.size()) {
    throw std::invalid_argument("labels and predictions differ in length");
  }
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> tally;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto& [hit, seen] = tally[labels[i]];
    ++seen;
    if (predictions[i] == labels[i]) ++hit;
  }
  std::map<std::size_t, double> out;
  for (const auto& [c, t] : tally) {
    out[c] = static_cast<double>(t.first) / static_cast<double>(t.second);
  }
  return out;
}

std::vector<double> silhouette_samples(
    const Matrix& data, std::span<const std::size_t> assignments) {
  const std::size_t n = data.rows();
  if (assignments.size() != n) {
    throw std::invalid_argument("silhouette: assignment count mismatch");
  }
  if (n < 2) throw std::invalid_argument("silhouette: need at least 2 points");
  std::size_t k = 0;
  for (std::size_t a : assignments) k = std::max(k, a + 1);
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t a : assignments) ++sizes[a];
  const auto populated = std::count_if(sizes.begin(), sizes.end(),
                                       [](std::size_t s) { return s > 0; });
  if (populated < 2) {
    throw std::invalid_argument("silhouette: need at least 2 clusters");
  }

  // sums[i * k + c] = total distance from point i to cluster c.
  std::vector<double> sums(n * k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::sqrt(squared_distance(data.row(i), data.row(j)));
      sums[i * k + assignments[j]] += d;
      sums[j * k + assignments[i]] += d;
    }
  }
  std::vector<double> s(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t own = assignments[i];
    if (sizes[own] == 1) continue;
    const double a = sums[i * k + own] / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c == own || sizes[c] == 0) continue;
      b = std::min(b, sums[i * k + c] / static_cast<double>(sizes[c]));
    }
    const double m = std::max(a, b);
    s[i] = m > 0.0 ? (b - a) / m : 0.0;
  }
  return s;
}

double silhouette(const Matrix& data,
                  std::span<const std::size_t> assignments) {
  const auto s = silhouette_samples(data, assignments);
  double total = 0.0;
  for (double v : s) total += v;
  return total / static_cast<double>(s.size());
}

}  // namespace tbert
