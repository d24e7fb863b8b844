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

#ifndef TBERT_SYNTH_H_
#define TBERT_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tbert/corpus.h"
#include "tbert/embeddings.h"
#include "tbert/json_util.h"

namespace tbert {

// Planted-topic corpus with matching blob embeddings. The defaults are the
// 800-document, 8-topic benchmark: short documents, a shared background
// vocabulary, and raw (unnormalized) embeddings whose blob spacing is of
// the same order as the default fusion weight.
struct SynthConfig {
  std::size_t num_docs = 800;
  std::size_t num_topics = 8;
  std::size_t words_per_topic = 12;   // words owned by one topic
  std::size_t shared_per_pair = 0;    // words shared by a topic pair
  double shared_rate = 0.0;           // chance a topic token is a shared word
  std::size_t background_words = 40;  // generic words used by every topic
  double background_rate = 0.2;       // chance any token is background
  double mix_rate = 0.0;  // chance a topic token comes from a second topic
  std::size_t min_length = 8;
  std::size_t max_length = 14;
  double zipf_exponent = 1.0;
  std::size_t embedding_dim = 96;
  double center_norm = 15.0;    // distance of each topic blob from origin
  double noise = 2.0;           // per-coordinate Gaussian noise
  double sentiment_norm = 0.3;  // offset along a per-class direction
  std::uint64_t seed = 7;
  void validate() const;
};

struct SynthCorpus {
  std::vector<RawDocument> docs;
  EmbeddingMatrix embeddings;
  std::vector<std::size_t> topics;      // planted primary topic per doc
  std::vector<std::size_t> sentiments;  // class index per doc
  std::vector<std::vector<std::string>> topic_words;  // owned words per topic
  std::vector<std::string> background;
};

// Deterministic pronounceable pseudo-words that survive preprocessing
// unchanged (lowercase, not stopwords, fixed points of the stemmer).
std::vector<std::string> pseudo_words(std::size_t count, std::uint64_t seed);

SynthCorpus generate_synthetic(const SynthConfig& config);

// Writes corpus.csv, embeddings.tbem, labels.csv (id,label sentiment) and
// truth.csv (id,topic) into `dir`.
void write_synthetic(const SynthCorpus& corpus, const std::string& dir);

Json synth_config_to_json(const SynthConfig& config);
SynthConfig synth_config_from_json(const Json& j);

}  // namespace tbert

#endif  // TBERT_SYNTH_H_
