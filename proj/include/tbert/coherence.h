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

#ifndef TBERT_COHERENCE_H_
#define TBERT_COHERENCE_H_

#include <cstddef>
#include <span>
#include <unordered_map>
#include <vector>

namespace tbert {

inline constexpr std::size_t kDefaultCvWindow = 110;
inline constexpr std::size_t kDefaultTopN = 10;

// Boolean co-occurrence counts for a fixed set of terms. Each context is
// either a whole document (window 0) or one position of a sliding window;
// a document no longer than the window is a single context.
class CooccurrenceStats {
 public:
  // `docs` holds term-index sequences in reading order. Only `terms` are
  // counted; duplicates in `terms` are ignored.
  CooccurrenceStats(std::span<const std::vector<std::size_t>> docs,
                    std::span<const std::size_t> terms, std::size_t window);

  std::size_t window() const { return window_; }
  std::size_t num_contexts() const { return num_contexts_; }
  // Contexts containing the term / both terms. Untracked terms count 0.
  std::size_t count(std::size_t term) const;
  std::size_t count(std::size_t a, std::size_t b) const;

 private:
  std::size_t window_;
  std::size_t num_contexts_ = 0;
  std::unordered_map<std::size_t, std::size_t> slot_;
  std::vector<std::size_t> single_;
  std::vector<std::size_t> pair_;  // dense, symmetric
};

// Sum over pairs of log((D(w_i, w_j) + 1) / D(w_j)) with words ranked by
// descending count (ties keep input order) and i ranked before j. Pairs
// with D(w_j) = 0 are skipped. Throws std::invalid_argument when fewer than
// two words have nonzero count.
double umass_coherence(std::span<const std::size_t> words,
                       const CooccurrenceStats& stats);

// NPMI context vectors over the word set, one-set segmentation: the mean
// over words of cos(v(w), sum of all v). `degenerate` (optional) is set when
// every vector is zero, in which case the score is 0.
double cv_coherence(std::span<const std::size_t> words,
                    const CooccurrenceStats& stats,
                    bool* degenerate = nullptr);

double npmi(const CooccurrenceStats& stats, std::size_t a, std::size_t b);

// Union of the term ids in `topics`, in first-seen order.
std::vector<std::size_t> collect_terms(
    std::span<const std::vector<std::size_t>> topics);

}  // namespace tbert

#endif  // TBERT_COHERENCE_H_
