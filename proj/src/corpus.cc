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

#include "tbert/corpus.h"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "tbert/csv.h"
#include "tbert/text.h"

namespace tbert {

Vocabulary::Vocabulary(std::vector<std::string> terms,
                       std::vector<std::size_t> df, std::size_t num_docs)
    : terms_(std::move(terms)), df_(std::move(df)), num_docs_(num_docs) {
  if (terms_.size() != df_.size()) {
    throw std::invalid_argument("vocabulary: terms and df sizes differ");
  }
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!index_.emplace(terms_[i], i).second) {
      throw std::invalid_argument("vocabulary: duplicate term '" + terms_[i] +
                                  "'");
    }
    if (df_[i] > num_docs_) {
      throw std::invalid_argument("vocabulary: df of '" + terms_[i] +
                                  "' exceeds document count");
    }
  }
}

std::optional<std::size_t> Vocabulary::index(const std::string& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

BowCorpus::BowCorpus(Vocabulary vocabulary, std::vector<std::string> ids,
                     std::vector<SparseCounts> docs)
    : vocabulary_(std::move(vocabulary)),
      ids_(std::move(ids)),
      docs_(std::move(docs)) {
  if (ids_.size() != docs_.size()) {
    throw std::invalid_argument("bow corpus: id count differs from doc count");
  }
  for (const auto& doc : docs_) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (doc[i].term >= vocabulary_.size() || doc[i].count == 0 ||
          (i > 0 && doc[i - 1].term >= doc[i].term)) {
        throw std::invalid_argument("bow corpus: malformed sparse counts");
      }
    }
  }
}

std::size_t BowCorpus::doc_length(std::size_t d) const {
  std::size_t n = 0;
  for (const auto& e : docs_.at(d)) n += e.count;
  return n;
}

std::size_t BowCorpus::total_tokens() const {
  std::size_t n = 0;
  for (std::size_t d = 0; d < docs_.size(); ++d) n += doc_length(d);
  return n;
}

namespace {

std::string stem_to_fixed_point(const std::string& token) {
  std::string current = token;
  while (true) {
    std::string next = stem(current);
    if (next == current) return current;
    current = std::move(next);
  }
}

}  // namespace

ProcessedDocument preprocess(const RawDocument& doc) {
  const std::string cleaned =
      canonicalize(replace_emoticons(strip_urls(doc.text)));
  const std::vector<std::string> kept =
      remove_stopwords(split_whitespace(cleaned));
  ProcessedDocument out{doc.id, {}};
  out.tokens.reserve(kept.size());
  for (const auto& token : kept) {
    std::string root = stem_to_fixed_point(token);
    if (!root.empty() && !is_stopword(root)) out.tokens.push_back(std::move(root));
  }
  return out;
}

std::vector<ProcessedDocument> preprocess_all(
    std::span<const RawDocument> docs) {
  std::vector<ProcessedDocument> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(preprocess(d));
  return out;
}

Vocabulary build_vocabulary(std::span<const ProcessedDocument> docs,
                            std::size_t min_df, double max_df_fraction) {
  if (min_df < 1) throw std::invalid_argument("min_df must be >= 1");
  if (!(max_df_fraction > 0.0 && max_df_fraction <= 1.0)) {
    throw std::invalid_argument("max_df_fraction must be in (0, 1]");
  }
  std::map<std::string, std::size_t> df;
  for (const auto& doc : docs) {
    const std::set<std::string> unique(doc.tokens.begin(), doc.tokens.end());
    for (const auto& t : unique) ++df[t];
  }
  const double m = static_cast<double>(docs.size());
  std::vector<std::string> terms;
  std::vector<std::size_t> freqs;
  for (const auto& [term, count] : df) {
    if (count < min_df) continue;
    if (static_cast<double>(count) / m > max_df_fraction) continue;
    terms.push_back(term);
    freqs.push_back(count);
  }
  if (terms.empty()) {
    throw std::runtime_error(
        "empty vocabulary: every term was removed by the df filters");
  }
  return Vocabulary(std::move(terms), std::move(freqs), docs.size());
}

SparseCounts to_bow(const ProcessedDocument& doc, const Vocabulary& vocab) {
  std::map<std::size_t, std::size_t> counts;
  for (const auto& t : doc.tokens) {
    if (auto idx = vocab.index(t)) ++counts[*idx];
  }
  SparseCounts out;
  out.reserve(counts.size());
  for (const auto& [term, count] : counts) out.push_back({term, count});
  return out;
}

BowCorpus make_bow_corpus(std::span<const ProcessedDocument> docs,
                          const Vocabulary& vocab) {
  std::vector<std::string> ids;
  std::vector<SparseCounts> rows;
  std::unordered_set<std::string> seen;
  ids.reserve(docs.size());
  rows.reserve(docs.size());
  for (const auto& doc : docs) {
    if (doc.id.empty()) throw std::invalid_argument("document with empty id");
    if (!seen.insert(doc.id).second) {
      throw std::invalid_argument("duplicate document id '" + doc.id + "'");
    }
    ids.push_back(doc.id);
    rows.push_back(to_bow(doc, vocab));
  }
  return BowCorpus(vocab, std::move(ids), std::move(rows));
}

std::vector<std::size_t> token_ids(const ProcessedDocument& doc,
                                   const Vocabulary& vocab) {
  std::vector<std::size_t> out;
  out.reserve(doc.tokens.size());
  for (const auto& t : doc.tokens) {
    if (auto idx = vocab.index(t)) out.push_back(*idx);
  }
  return out;
}

namespace {

void check_unique_ids(const std::vector<RawDocument>& docs) {
  std::unordered_set<std::string> seen;
  for (const auto& d : docs) {
    if (d.id.empty()) throw std::runtime_error("document with empty id");
    if (!seen.insert(d.id).second) {
      throw std::runtime_error("duplicate document id '" + d.id + "'");
    }
  }
}

std::vector<RawDocument> parse_raw_csv(const std::string& text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) return {};
  const auto& header = rows.front();
  std::ptrdiff_t id_col = -1;
  std::ptrdiff_t text_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "id") id_col = static_cast<std::ptrdiff_t>(i);
    if (header[i] == "text") text_col = static_cast<std::ptrdiff_t>(i);
  }
  if (id_col < 0 || text_col < 0) {
    throw std::runtime_error("corpus csv: header must contain id and text");
  }
  std::vector<RawDocument> docs;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      throw std::runtime_error("corpus csv: row " + std::to_string(r + 1) +
                               " has " + std::to_string(row.size()) +
                               " fields, expected " +
                               std::to_string(header.size()));
    }
    docs.push_back({row[id_col], row[text_col]});
  }
  return docs;
}

std::vector<RawDocument> parse_raw_jsonl(const std::string& text) {
  std::vector<RawDocument> docs;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      docs.push_back(
          {j.at("id").get<std::string>(), j.at("text").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("corpus jsonl line " + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  return docs;
}

}  // namespace

std::vector<RawDocument> read_raw_documents(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  const auto first = text.find_first_not_of(" \t\r\n");
  std::vector<RawDocument> docs;
  if (first != std::string::npos && text[first] == '{') {
    docs = parse_raw_jsonl(text);
  } else {
    docs = parse_raw_csv(text);
  }
  check_unique_ids(docs);
  return docs;
}

std::vector<RawDocument> read_raw_documents(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus file " + path);
  return read_raw_documents(in);
}

void write_processed_jsonl(std::ostream& out,
                           std::span<const ProcessedDocument> docs) {
  for (const auto& d : docs) {
    nlohmann::ordered_json j;
    j["id"] = d.id;
    j["tokens"] = d.tokens;
    out << j.dump() << '\n';
  }
}

std::vector<ProcessedDocument> read_processed_jsonl(std::istream& in) {
  std::vector<ProcessedDocument> docs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto j = nlohmann::json::parse(line);
    docs.push_back({j.at("id").get<std::string>(),
                    j.at("tokens").get<std::vector<std::string>>()});
  }
  return docs;
}

nlohmann::ordered_json vocabulary_to_json(const Vocabulary& vocab) {
  nlohmann::ordered_json j;
  j["terms"] = vocab.terms();
  j["df"] = vocab.dfs();
  j["num_docs"] = vocab.num_docs();
  return j;
}

Vocabulary vocabulary_from_json(const nlohmann::ordered_json& j) {
  return Vocabulary(j.at("terms").get<std::vector<std::string>>(),
                    j.at("df").get<std::vector<std::size_t>>(),
                    j.at("num_docs").get<std::size_t>());
}

}  // namespace tbert
