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

#include "tbert/synth.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "tbert/csv.h"
#include "tbert/random.h"
#include "tbert/sentiment.h"
#include "tbert/text.h"

namespace tbert {

void SynthConfig::validate() const {
  if (num_docs < 1 || num_topics < 1) {
    throw std::invalid_argument("synth: num_docs and num_topics must be >= 1");
  }
  if (words_per_topic < 1) {
    throw std::invalid_argument("synth: words_per_topic must be >= 1");
  }
  if (min_length < 1 || max_length < min_length) {
    throw std::invalid_argument("synth: need 1 <= min_length <= max_length");
  }
  const auto is_rate = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (!is_rate(shared_rate) || !is_rate(background_rate) ||
      !is_rate(mix_rate)) {
    throw std::invalid_argument("synth: rates must lie in [0, 1]");
  }
  if (shared_rate > 0.0 && shared_per_pair == 0) {
    throw std::invalid_argument("synth: shared_rate needs shared_per_pair");
  }
  if (background_rate > 0.0 && background_words == 0) {
    throw std::invalid_argument("synth: background_rate needs words");
  }
  if (embedding_dim < 1) {
    throw std::invalid_argument("synth: embedding_dim must be >= 1");
  }
}

std::vector<std::string> pseudo_words(std::size_t count, std::uint64_t seed) {
  static constexpr std::string_view kOnsets = "bdfgklmnprstvz";
  static constexpr std::string_view kVowels = "aiou";
  Rng rng(seed);
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  while (out.size() < count) {
    const std::size_t syllables = 2 + rng.below(2);
    std::string w;
    for (std::size_t s = 0; s < syllables; ++s) {
      w.push_back(kOnsets[rng.below(kOnsets.size())]);
      w.push_back(kVowels[rng.below(kVowels.size())]);
    }
    if (is_stopword(w) || stem(w) != w || !seen.insert(w).second) continue;
    out.push_back(std::move(w));
  }
  return out;
}

namespace {

// Zipf-weighted index in [0, n).
class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double exponent) : cdf_(n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += 1.0 / std::pow(static_cast<double>(i + 1), exponent);
      cdf_[i] = acc;
    }
    for (double& c : cdf_) c /= acc;
  }

  std::size_t operator()(Rng& rng) const {
    const double u = rng.uniform();
    for (std::size_t i = 0; i < cdf_.size(); ++i) {
      if (u < cdf_[i]) return i;
    }
    return cdf_.size() - 1;
  }

 private:
  std::vector<double> cdf_;
};

std::vector<double> random_direction(Rng& rng, std::size_t dim, double norm) {
  std::vector<double> v(dim);
  double sq = 0.0;
  for (double& x : v) {
    x = rng.normal();
    sq += x * x;
  }
  const double scale = norm / std::sqrt(sq);
  for (double& x : v) x *= scale;
  return v;
}

}  // namespace

SynthCorpus generate_synthetic(const SynthConfig& config) {
  config.validate();
  const std::size_t k = config.num_topics;
  const std::size_t pairs = (k + 1) / 2;
  const std::size_t total_words = k * config.words_per_topic +
                                  pairs * config.shared_per_pair +
                                  config.background_words;
  const auto words = pseudo_words(total_words, config.seed ^ 0xA5A5A5A5ULL);

  SynthCorpus out;
  std::size_t next = 0;
  out.topic_words.resize(k);
  for (auto& list : out.topic_words) {
    list.assign(words.begin() + next,
                words.begin() + next + config.words_per_topic);
    next += config.words_per_topic;
  }
  std::vector<std::vector<std::string>> shared(pairs);
  for (auto& list : shared) {
    list.assign(words.begin() + next,
                words.begin() + next + config.shared_per_pair);
    next += config.shared_per_pair;
  }
  out.background.assign(words.begin() + next, words.end());

  Rng rng(config.seed);
  std::vector<std::vector<double>> centers;
  for (std::size_t t = 0; t < k; ++t) {
    centers.push_back(
        random_direction(rng, config.embedding_dim, config.center_norm));
  }
  std::vector<std::vector<double>> moods;
  for (std::size_t c = 0; c < kNumSentiments; ++c) {
    moods.push_back(
        random_direction(rng, config.embedding_dim, config.sentiment_norm));
  }

  const ZipfSampler own(config.words_per_topic, config.zipf_exponent);
  const ZipfSampler pair_pool(std::max<std::size_t>(config.shared_per_pair, 1),
                              config.zipf_exponent);
  const ZipfSampler bg(std::max<std::size_t>(config.background_words, 1),
                       config.zipf_exponent);

  // Balanced primary topics in shuffled order.
  std::vector<std::size_t> primary(config.num_docs);
  for (std::size_t d = 0; d < config.num_docs; ++d) primary[d] = d % k;
  rng.shuffle(std::span<std::size_t>(primary));

  const auto topic_token = [&](std::size_t t) -> const std::string& {
    if (config.shared_rate > 0.0 && rng.uniform() < config.shared_rate) {
      return shared[t / 2][pair_pool(rng)];
    }
    return out.topic_words[t][own(rng)];
  };

  const std::size_t width = std::to_string(config.num_docs - 1).size();
  out.embeddings.dim = config.embedding_dim;
  for (std::size_t d = 0; d < config.num_docs; ++d) {
    const std::size_t t = primary[d];
    const std::size_t second = k > 1 ? (t + 1 + rng.below(k - 1)) % k : t;
    const std::size_t mood = rng.below(kNumSentiments);
    const std::size_t length =
        config.min_length + rng.below(config.max_length - config.min_length + 1);
    std::string text;
    for (std::size_t i = 0; i < length; ++i) {
      if (!text.empty()) text.push_back(' ');
      if (config.background_rate > 0.0 &&
          rng.uniform() < config.background_rate) {
        text += out.background[bg(rng)];
      } else if (config.mix_rate > 0.0 && rng.uniform() < config.mix_rate) {
        text += topic_token(second);
      } else {
        text += topic_token(t);
      }
    }
    std::string id = std::to_string(d);
    id.insert(0, width - id.size(), '0');
    id.insert(0, "doc");
    out.docs.push_back({id, std::move(text)});
    out.topics.push_back(t);
    out.sentiments.push_back(mood);
    out.embeddings.ids.push_back(id);
    for (std::size_t j = 0; j < config.embedding_dim; ++j) {
      const double v =
          centers[t][j] + moods[mood][j] + config.noise * rng.normal();
      out.embeddings.data.push_back(static_cast<float>(v));
    }
  }
  return out;
}

void write_synthetic(const SynthCorpus& corpus, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  {
    std::ofstream out(base / "corpus.csv", std::ios::binary);
    write_csv_row(out, {"id", "text"});
    for (const auto& d : corpus.docs) write_csv_row(out, {d.id, d.text});
    if (!out) throw std::runtime_error("cannot write " + dir + "/corpus.csv");
  }
  write_tbem((base / "embeddings.tbem").string(), corpus.embeddings);
  {
    std::ofstream out(base / "labels.csv", std::ios::binary);
    write_csv_row(out, {"id", "label"});
    for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
      write_csv_row(out, {corpus.docs[i].id,
                          std::string(kSentimentNames[corpus.sentiments[i]])});
    }
    if (!out) throw std::runtime_error("cannot write " + dir + "/labels.csv");
  }
  {
    std::ofstream out(base / "truth.csv", std::ios::binary);
    write_csv_row(out, {"id", "topic"});
    for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
      write_csv_row(out,
                    {corpus.docs[i].id, std::to_string(corpus.topics[i])});
    }
    if (!out) throw std::runtime_error("cannot write " + dir + "/truth.csv");
  }
}

Json synth_config_to_json(const SynthConfig& c) {
  Json j;
  j["num_docs"] = c.num_docs;
  j["num_topics"] = c.num_topics;
  j["words_per_topic"] = c.words_per_topic;
  j["shared_per_pair"] = c.shared_per_pair;
  j["shared_rate"] = c.shared_rate;
  j["background_words"] = c.background_words;
  j["background_rate"] = c.background_rate;
  j["mix_rate"] = c.mix_rate;
  j["min_length"] = c.min_length;
  j["max_length"] = c.max_length;
  j["zipf_exponent"] = c.zipf_exponent;
  j["embedding_dim"] = c.embedding_dim;
  j["center_norm"] = c.center_norm;
  j["noise"] = c.noise;
  j["sentiment_norm"] = c.sentiment_norm;
  j["seed"] = c.seed;
  return j;
}

SynthConfig synth_config_from_json(const Json& j) {
  SynthConfig c;
  c.num_docs = j.value("num_docs", c.num_docs);
  c.num_topics = j.value("num_topics", c.num_topics);
  c.words_per_topic = j.value("words_per_topic", c.words_per_topic);
  c.shared_per_pair = j.value("shared_per_pair", c.shared_per_pair);
  c.shared_rate = j.value("shared_rate", c.shared_rate);
  c.background_words = j.value("background_words", c.background_words);
  c.background_rate = j.value("background_rate", c.background_rate);
  c.mix_rate = j.value("mix_rate", c.mix_rate);
  c.min_length = j.value("min_length", c.min_length);
  c.max_length = j.value("max_length", c.max_length);
  c.zipf_exponent = j.value("zipf_exponent", c.zipf_exponent);
  c.embedding_dim = j.value("embedding_dim", c.embedding_dim);
  c.center_norm = j.value("center_norm", c.center_norm);
  c.noise = j.value("noise", c.noise);
  c.sentiment_norm = j.value("sentiment_norm", c.sentiment_norm);
  c.seed = j.value("seed", c.seed);
  c.validate();
  return c;
}

}  // namespace tbert
