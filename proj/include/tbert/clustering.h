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

#ifndef TBERT_CLUSTERING_H_
#define TBERT_CLUSTERING_H_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "tbert/corpus.h"
#include "tbert/json_util.h"
#include "tbert/matrix.h"

namespace tbert {

struct KMeansConfig {
  std::size_t k = 8;
  std::size_t max_iters = 300;
  std::size_t n_init = 10;
  std::uint64_t seed = 42;
  double tol = 1e-6;  // max centroid shift (Euclidean) that counts as converged

  void validate() const;
};

struct ClusterModel {
  Matrix centroids;                      // k x dim
  std::vector<std::size_t> assignments;  // one per row, each < k
  double inertia = 0.0;
  std::size_t iterations = 0;  // Lloyd iterations of the winning restart
  std::size_t best_restart = 0;
  std::vector<double> restart_inertia;

  std::size_t k() const { return centroids.rows(); }
};

// k-means++ seeding then Lloyd iterations; best of n_init restarts by
// inertia (earliest restart wins ties). Restart r uses seed + r. Throws
// std::invalid_argument when rows < k.
ClusterModel kmeans(const Matrix& data, const KMeansConfig& config);

// Index of the nearest centroid; ties go to the lowest index.
std::size_t nearest_centroid(const Matrix& centroids,
                             std::span<const double> point);

struct TermCount {
  std::size_t term = 0;
  std::string text;
  std::size_t count = 0;
};

// Per cluster, terms ranked by total count over the cluster's documents,
// ties by term index, at most n each.
std::vector<std::vector<TermCount>> cluster_top_terms(
    std::span<const std::size_t> assignments, std::size_t k,
    const BowCorpus& corpus, std::size_t n);

// Term indices only, for coherence scoring.
std::vector<std::vector<std::size_t>> term_ids(
    const std::vector<std::vector<TermCount>>& top);

// `id,cluster` rows with a header.
void write_assignments_csv(std::ostream& out, std::span<const std::string> ids,
                           std::span<const std::size_t> assignments);

// {"0": [{"term": ..., "count": ...}, ...], ...}
Json wordcloud_json(const std::vector<std::vector<TermCount>>& top);

}  // namespace tbert

#endif  // TBERT_CLUSTERING_H_
