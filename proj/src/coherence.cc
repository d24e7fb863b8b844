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

#include "tbert/coherence.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace tbert {

namespace {
constexpr double kNpmiEpsilon = 1e-12;
}  // namespace

CooccurrenceStats::CooccurrenceStats(
    std::span<const std::vector<std::size_t>> docs,
    std::span<const std::size_t> terms, std::size_t window)
    : window_(window) {
  for (std::size_t t : terms) slot_.try_emplace(t, slot_.size());
  const std::size_t n = slot_.size();
  single_.assign(n, 0);
  pair_.assign(n * n, 0);

  std::vector<char> present(n, 0);
  std::vector<std::size_t> hits;
  const auto count_context = [&](std::span<const std::size_t> tokens) {
    hits.clear();
    for (std::size_t t : tokens) {
      const auto it = slot_.find(t);
      if (it == slot_.end() || present[it->second]) continue;
      present[it->second] = 1;
      hits.push_back(it->second);
    }
    for (std::size_t i = 0; i < hits.size(); ++i) {
      ++single_[hits[i]];
      for (std::size_t j = i + 1; j < hits.size(); ++j) {
        ++pair_[hits[i] * n + hits[j]];
        ++pair_[hits[j] * n + hits[i]];
      }
    }
    for (std::size_t h : hits) present[h] = 0;
    ++num_contexts_;
  };

  for (const auto& doc : docs) {
    if (window_ == 0 || doc.size() <= window_) {
      count_context(doc);
      continue;
    }
    const std::span<const std::size_t> tokens(doc);
    for (std::size_t start = 0; start + window_ <= doc.size(); ++start) {
      count_context(tokens.subspan(start, window_));
    }
  }
}

std::size_t CooccurrenceStats::count(std::size_t term) const {
  const auto it = slot_.find(term);
  return it == slot_.end() ? 0 : single_[it->second];
}

std::size_t CooccurrenceStats::count(std::size_t a, std::size_t b) const {
  const auto ia = slot_.find(a);
  const auto ib = slot_.find(b);
  if (ia == slot_.end() || ib == slot_.end()) return 0;
  if (ia->second == ib->second) return single_[ia->second];
  return pair_[ia->second * slot_.size() + ib->second];
}

double umass_coherence(std::span<const std::size_t> words,
                       const CooccurrenceStats& stats) {
  std::vector<std::size_t> ranked(words.begin(), words.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [&](std::size_t a, std::size_t b) {
                     return stats.count(a) > stats.count(b);
                   });
  const auto scorable = std::count_if(
      ranked.begin(), ranked.end(),
      [&](std::size_t w) { return stats.count(w) > 0; });
  if (scorable < 2) {
    throw std::invalid_argument(
        "umass coherence needs at least two words that occur in the corpus");
  }
  double score = 0.0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    for (std::size_t j = i + 1; j < ranked.size(); ++j) {
      const std::size_t dj = stats.count(ranked[j]);
      if (dj == 0) continue;
      score += std::log(
          (static_cast<double>(stats.count(ranked[i], ranked[j])) + 1.0) /
          static_cast<double>(dj));
    }
  }
  return score;
}

double npmi(const CooccurrenceStats& stats, std::size_t a, std::size_t b) {
  const double n = static_cast<double>(stats.num_contexts());
  if (n == 0.0) return 0.0;
  const double pa = static_cast<double>(stats.count(a)) / n;
  const double pb = static_cast<double>(stats.count(b)) / n;
  if (pa == 0.0 || pb == 0.0) return 0.0;
  // Both terms in every context: the normalizer -log p(a,b) vanishes.
  if (stats.count(a, b) == stats.num_contexts()) return 1.0;
  const double pab = static_cast<double>(stats.count(a, b)) / n + kNpmiEpsilon;
  return std::log(pab / (pa * pb)) / -std::log(pab);
}

double cv_coherence(std::span<const std::size_t> words,
                    const CooccurrenceStats& stats, bool* degenerate) {
  if (words.size() < 2) {
    throw std::invalid_argument("cv coherence needs at least two words");
  }
  const std::size_t n = words.size();
  std::vector<std::vector<double>> vectors(n, std::vector<double>(n));
  std::vector<double> total(n, 0.0);
  bool all_zero = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = npmi(stats, words[i], words[j]);
      vectors[i][j] = v;
      total[j] += v;
      if (v != 0.0) all_zero = false;
    }
  }
  if (degenerate != nullptr) *degenerate = all_zero;
  if (all_zero) return 0.0;
  const double total_norm =
      std::sqrt(std::inner_product(total.begin(), total.end(), total.begin(), 0.0));
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& v = vectors[i];
    const double norm =
        std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (norm == 0.0 || total_norm == 0.0) continue;
    sum += std::inner_product(v.begin(), v.end(), total.begin(), 0.0) /
           (norm * total_norm);
  }
  return sum / static_cast<double>(n);
}

std::vector<std::size_t> collect_terms(
    std::span<const std::vector<std::size_t>> topics) {
  std::vector<std::size_t> out;
  std::unordered_set<std::size_t> seen;
  for (const auto& topic : topics) {
    for (std::size_t t : topic) {
      if (seen.insert(t).second) out.push_back(t);
    }
  }
  return out;
}

}  // namespace tbert
