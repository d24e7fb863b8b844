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

#include "tbert/clustering.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "tbert/csv.h"
#include "tbert/random.h"

namespace tbert {

void KMeansConfig::validate() const {
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (n_init < 1) throw std::invalid_argument("kmeans: n_init must be >= 1");
  if (!(tol >= 0.0)) throw std::invalid_argument("kmeans: tol must be >= 0");
}

std::size_t nearest_centroid(const Matrix& centroids,
                             std::span<const double> point) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.rows(); ++c) {
    const double d = squared_distance(point, centroids.row(c));
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

namespace {

Matrix seed_plus_plus(const Matrix& data, std::size_t k, Rng& rng) {
  const std::size_t n = data.rows();
  Matrix centroids(k, data.cols());
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::size_t pick = rng.below(n);
  for (std::size_t c = 0; c < k; ++c) {
    const auto src = data.row(pick);
    std::copy(src.begin(), src.end(), centroids.row(c).begin());
    if (c + 1 == k) break;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(data.row(i), src));
      total += d2[i];
    }
    if (total <= 0.0) {
      // Every point coincides with a chosen seed.
      pick = rng.below(n);
      continue;
    }
    const double target = rng.uniform() * total;
    double acc = 0.0;
    pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (d2[i] <= 0.0) continue;
      acc += d2[i];
      if (acc > target) {
        pick = i;
        break;
      }
    }
    if (pick == n) {
      // Rounding left the target past the last step; take the last
      // positive-weight point.
      for (std::size_t i = n; i-- > 0;) {
        if (d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    }
  }
  return centroids;
}

double assign(const Matrix& data, const Matrix& centroids,
              std::vector<std::size_t>& assignments) {
  double inertia = 0.0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const std::size_t c = nearest_centroid(centroids, data.row(i));
    assignments[i] = c;
    inertia += squared_distance(data.row(i), centroids.row(c));
  }
  return inertia;
}

ClusterModel lloyd(const Matrix& data, const KMeansConfig& config,
                   std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = data.rows();
  const std::size_t dim = data.cols();
  const std::size_t k = config.k;
  ClusterModel model;
  model.centroids = seed_plus_plus(data, k, rng);
  model.assignments.assign(n, 0);

  std::vector<std::size_t> sizes(k);
  Matrix next(k, dim);
  for (std::size_t iter = 0; iter < config.max_iters; ++iter) {
    assign(data, model.centroids, model.assignments);
    std::fill(next.values().begin(), next.values().end(), 0.0);
    std::fill(sizes.begin(), sizes.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = model.assignments[i];
      ++sizes[c];
      auto dst = next.row(c);
      const auto src = data.row(i);
      for (std::size_t j = 0; j < dim; ++j) dst[j] += src[j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] == 0) continue;
      for (double& v : next.row(c)) v /= static_cast<double>(sizes[c]);
    }
    // An empty cluster takes over the point farthest from its centroid.
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] != 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d =
            squared_distance(data.row(i), next.row(model.assignments[i]));
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      const auto src = data.row(far);
      std::copy(src.begin(), src.end(), next.row(c).begin());
      sizes[c] = 1;
      model.assignments[far] = c;
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      shift = std::max(shift, squared_distance(next.row(c),
                                               model.centroids.row(c)));
    }
    std::swap(model.centroids, next);
    model.iterations = iter + 1;
    if (std::sqrt(shift) <= config.tol) break;
  }
  model.inertia = assign(data, model.centroids, model.assignments);
  return model;
}

}  // namespace

ClusterModel kmeans(const Matrix& data, const KMeansConfig& config) {
  config.validate();
  if (data.rows() < config.k) {
    throw std::invalid_argument("kmeans: " + std::to_string(data.rows()) +
                                " points but k = " + std::to_string(config.k));
  }
  ClusterModel best;
  std::vector<double> inertias;
  for (std::size_t r = 0; r < config.n_init; ++r) {
    ClusterModel candidate = lloyd(data, config, config.seed + r);
    inertias.push_back(candidate.inertia);
    if (r == 0 || candidate.inertia < best.inertia) {
      best = std::move(candidate);
      best.best_restart = r;
    }
  }
  best.restart_inertia = std::move(inertias);
  return best;
}

std::vector<std::vector<TermCount>> cluster_top_terms(
    std::span<const std::size_t> assignments, std::size_t k,
    const BowCorpus& corpus, std::size_t n) {
  if (assignments.size() != corpus.num_docs()) {
    throw std::invalid_argument(
        "cluster_top_terms: " + std::to_string(assignments.size()) +
        " assignments for " + std::to_string(corpus.num_docs()) + " documents");
  }
  const std::size_t v = corpus.vocab_size();
  std::vector<std::vector<std::size_t>> counts(k, std::vector<std::size_t>(v));
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    if (assignments[d] >= k) {
      throw std::invalid_argument("cluster_top_terms: assignment out of range");
    }
    for (const auto& e : corpus.doc(d)) counts[assignments[d]][e.term] += e.count;
  }
  std::vector<std::vector<TermCount>> out(k);
  std::vector<std::size_t> order(v);
  for (std::size_t c = 0; c < k; ++c) {
    const auto& cc = counts[c];
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cc[a] > cc[b]; });
    for (std::size_t i = 0; i < std::min(n, v); ++i) {
      if (cc[order[i]] == 0) break;
      out[c].push_back({order[i], corpus.vocabulary().term(order[i]),
                        cc[order[i]]});
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> term_ids(
    const std::vector<std::vector<TermCount>>& top) {
  std::vector<std::vector<std::size_t>> out;
  out.reserve(top.size());
  for (const auto& list : top) {
    auto& ids = out.emplace_back();
    for (const auto& t : list) ids.push_back(t.term);
  }
  return out;
}

void write_assignments_csv(std::ostream& out, std::span<const std::string> ids,
                           std::span<const std::size_t> assignments) {
  if (ids.size() != assignments.size()) {
    throw std::invalid_argument("assignments: id count mismatch");
  }
  write_csv_row(out, {"id", "cluster"});
  for (std::size_t i = 0; i < ids.size(); ++i) {
    write_csv_row(out, {ids[i], std::to_string(assignments[i])});
  }
}

Json wordcloud_json(const std::vector<std::vector<TermCount>>& top) {
  Json j = Json::object();
  for (std::size_t c = 0; c < top.size(); ++c) {
    Json list = Json::array();
    for (const auto& t : top[c]) {
      list.push_back(Json{{"term", t.text}, {"count", t.count}});
    }
    j[std::to_string(c)] = std::move(list);
  }
  return j;
}

}  // namespace tbert
