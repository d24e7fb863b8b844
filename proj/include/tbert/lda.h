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

#ifndef TBERT_LDA_H_
#define TBERT_LDA_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tbert/corpus.h"
#include "tbert/json_util.h"
#include "tbert/matrix.h"

namespace tbert {

struct LdaHyperParams {
  std::size_t k = 8;
  double alpha = 0.1;  // symmetric document-topic prior
  double beta = 0.01;  // symmetric topic-word prior
  std::size_t iterations = 1000;
  std::size_t burn_in = 200;
  std::uint64_t seed = 42;
  // Average theta/phi over the post-burn-in sweeps instead of using the
  // final state only.
  bool average_samples = false;
  // Record the corpus log-likelihood every N sweeps (0 disables tracing).
  std::size_t trace_every = 0;

  // Throws std::invalid_argument on k == 0, non-positive priors or
  // iterations <= burn_in.
  void validate() const;
};

struct LdaModel {
  LdaHyperParams params;
  std::size_t num_docs = 0;
  std::size_t vocab_size = 0;

  Matrix phi;    // K x V, rows sum to 1
  Matrix theta;  // M x K, rows sum to 1

  // Final sampler state. z[d] holds one topic per token, tokens ordered by
  // term index within the document.
  std::vector<std::vector<std::int32_t>> z;
  std::vector<std::int64_t> n_dk;  // M x K
  std::vector<std::int64_t> n_kw;  // K x V
  std::vector<std::int64_t> n_k;   // K

  // (sweep, log-likelihood) pairs; sweep 0 is the random initialization.
  std::vector<std::pair<std::size_t, double>> trace;

  std::size_t num_topics() const { return params.k; }
};

// Collapsed Gibbs sampling. Deterministic for a fixed seed.
// Throws std::invalid_argument on an empty corpus or vocabulary.
LdaModel train_lda(const BowCorpus& corpus, const LdaHyperParams& params);

// Row of theta for one document (the topic vector fed to fusion).
std::vector<double> doc_topic_vector(const LdaModel& model,
                                     std::size_t doc_index);

// Term indices of the n most probable words for `topic`; ties go to the
// lower term index. n is clipped to V.
std::vector<std::size_t> top_words(const LdaModel& model, std::size_t topic,
                                   std::size_t n);

// Sum over tokens of log sum_t theta[d][t] * phi[t][w].
double log_likelihood(const LdaModel& model, const BowCorpus& corpus);

// Only hyperparameters, phi and theta are persisted.
Json lda_to_json(const LdaModel& model);
LdaModel lda_from_json(const Json& j);

}  // namespace tbert

#endif  // TBERT_LDA_H_
