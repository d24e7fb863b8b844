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

#ifndef TBERT_CORPUS_H_
#define TBERT_CORPUS_H_

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace tbert {

struct RawDocument {
  std::string id;
  std::string text;
};

struct ProcessedDocument {
  std::string id;
  std::vector<std::string> tokens;

  // Documents whose tokens were all filtered out are kept but flagged.
  bool empty() const { return tokens.empty(); }
};

// Term <-> index bijection with per-term document frequency. Indices are
// assigned in lexicographic term order.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Throws std::invalid_argument when terms are not unique, sizes differ,
  // or a document frequency exceeds num_docs.
  Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> df,
             std::size_t num_docs);

  std::size_t size() const { return terms_.size(); }
  std::size_t num_docs() const { return num_docs_; }
  const std::string& term(std::size_t index) const { return terms_.at(index); }
  std::size_t df(std::size_t index) const { return df_.at(index); }
  std::optional<std::size_t> index(const std::string& term) const;
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<std::size_t>& dfs() const { return df_; }

  bool operator==(const Vocabulary& other) const {
    return terms_ == other.terms_ && df_ == other.df_ &&
           num_docs_ == other.num_docs_;
  }

 private:
  std::vector<std::string> terms_;
  std::vector<std::size_t> df_;
  std::size_t num_docs_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
};

struct BowEntry {
  std::size_t term = 0;
  std::size_t count = 0;
  bool operator==(const BowEntry&) const = default;
};

// Sorted by term index, counts >= 1.
using SparseCounts = std::vector<BowEntry>;

class BowCorpus {
 public:
  BowCorpus() = default;
  BowCorpus(Vocabulary vocabulary, std::vector<std::string> ids,
            std::vector<SparseCounts> docs);

  std::size_t num_docs() const { return docs_.size(); }
  std::size_t vocab_size() const { return vocabulary_.size(); }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  const std::vector<std::string>& ids() const { return ids_; }
  const SparseCounts& doc(std::size_t d) const { return docs_.at(d); }
  std::size_t doc_length(std::size_t d) const;
  std::size_t total_tokens() const;

 private:
  Vocabulary vocabulary_;
  std::vector<std::string> ids_;
  std::vector<SparseCounts> docs_;
};

// strip_urls -> replace_emoticons -> canonicalize -> tokenize ->
// remove_stopwords -> stem. Stemming runs to a fixed point and stems that
// land on a stopword are dropped, which makes preprocess idempotent on its
// own output.
ProcessedDocument preprocess(const RawDocument& doc);
std::vector<ProcessedDocument> preprocess_all(
    std::span<const RawDocument> docs);

inline constexpr std::size_t kDefaultMinDf = 2;
inline constexpr double kDefaultMaxDfFraction = 0.5;

// Throws std::invalid_argument for bad thresholds and std::runtime_error
// when every term is filtered out.
Vocabulary build_vocabulary(std::span<const ProcessedDocument> docs,
                            std::size_t min_df = kDefaultMinDf,
                            double max_df_fraction = kDefaultMaxDfFraction);

SparseCounts to_bow(const ProcessedDocument& doc, const Vocabulary& vocab);
BowCorpus make_bow_corpus(std::span<const ProcessedDocument> docs,
                          const Vocabulary& vocab);

// In-vocabulary token indices in document order (for windowed statistics).
std::vector<std::size_t> token_ids(const ProcessedDocument& doc,
                                   const Vocabulary& vocab);

// Input: CSV with an `id,text` header, or JSONL objects with id and text.
// The format is sniffed from the first non-blank character.
std::vector<RawDocument> read_raw_documents(std::istream& in);
std::vector<RawDocument> read_raw_documents(const std::string& path);

void write_processed_jsonl(std::ostream& out,
                           std::span<const ProcessedDocument> docs);
std::vector<ProcessedDocument> read_processed_jsonl(std::istream& in);

nlohmann::ordered_json vocabulary_to_json(const Vocabulary& vocab);
Vocabulary vocabulary_from_json(const nlohmann::ordered_json& j);

}  // namespace tbert

#endif  // TBERT_CORPUS_H_
