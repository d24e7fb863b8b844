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

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"
#include "tbert/corpus.h"
#include "tbert/lda.h"
#include "tbert/random.h"

namespace {

// 100 docs over a1..a10 followed by 100 docs over b1..b10.
tbert::BowCorpus planted_corpus(std::uint64_t seed) {
  tbert::Rng rng(seed);
  std::vector<tbert::ProcessedDocument> docs;
  for (int d = 0; d < 200; ++d) {
    const char prefix = d < 100 ? 'a' : 'b';
    tbert::ProcessedDocument doc{"d" + std::to_string(d), {}};
    for (int i = 0; i < 10; ++i) {
      doc.tokens.push_back(prefix + std::to_string(rng.below(10)));
    }
    docs.push_back(std::move(doc));
  }
  const auto vocab = tbert::build_vocabulary(docs, 1, 1.0);
  return tbert::make_bow_corpus(docs, vocab);
}

tbert::LdaHyperParams planted_params(std::uint64_t seed) {
  tbert::LdaHyperParams p;
  p.k = 2;
  p.alpha = 0.1;
  p.beta = 0.01;
  p.iterations = 500;
  p.burn_in = 100;
  p.seed = seed;
  return p;
}

void check_stochastic_rows(const tbert::Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    CHECK(std::accumulate(row.begin(), row.end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    for (double v : row) CHECK(v > 0.0);
  }
}

}  // namespace

TEST_CASE("single document single word") {
  const std::vector<tbert::ProcessedDocument> docs{{"only", {"w"}}};
  const auto corpus =
      tbert::make_bow_corpus(docs, tbert::build_vocabulary(docs, 1, 1.0));
  tbert::LdaHyperParams p;
  p.k = 1;
  p.iterations = 20;
  p.burn_in = 5;
  const auto model = tbert::train_lda(corpus, p);
  CHECK(tbert::doc_topic_vector(model, 0) == std::vector<double>{1.0});
  CHECK(model.phi(0, 0) == doctest::Approx(1.0));
  const double ll = tbert::log_likelihood(model, corpus);
  CHECK(ll <= 0.0);
  CHECK(ll > -1e-9);
}

TEST_CASE("planted topics are recovered") {
  const auto corpus = planted_corpus(11);
  const auto model = tbert::train_lda(corpus, planted_params(5));
  check_stochastic_rows(model.phi);
  check_stochastic_rows(model.theta);
  const auto& vocab = corpus.vocabulary();
  for (std::size_t t = 0; t < 2; ++t) {
    double a_mass = 0.0;
    for (std::size_t w = 0; w < vocab.size(); ++w) {
      if (vocab.term(w)[0] == 'a') a_mass += model.phi(t, w);
    }
    CHECK(std::min(a_mass, 1.0 - a_mass) < 0.05);
  }
  const std::size_t topic_a = model.phi(0, *vocab.index("a0")) >
                                      model.phi(1, *vocab.index("a0"))
                                  ? 0
                                  : 1;
  CHECK(tbert::doc_topic_vector(model, 3)[topic_a] > 0.9);
  const auto top = tbert::top_words(model, topic_a, 5);
  REQUIRE(top.size() == 5);
  for (std::size_t w : top) CHECK(vocab.term(w)[0] == 'a');
}

TEST_CASE("sampler counts stay consistent") {
  const auto corpus = planted_corpus(2);
  auto p = planted_params(9);
  p.iterations = 30;
  p.burn_in = 10;
  const auto model = tbert::train_lda(corpus, p);
  std::int64_t total = 0;
  for (std::size_t k = 0; k < 2; ++k) {
    std::int64_t row = 0;
    for (std::size_t w = 0; w < corpus.vocab_size(); ++w) {
      row += model.n_kw[k * corpus.vocab_size() + w];
    }
    CHECK(row == model.n_k[k]);
    total += model.n_k[k];
  }
  CHECK(total == static_cast<std::int64_t>(corpus.total_tokens()));
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    CHECK(model.z[d].size() == corpus.doc_length(d));
    CHECK(model.n_dk[d * 2] + model.n_dk[d * 2 + 1] ==
          static_cast<std::int64_t>(corpus.doc_length(d)));
  }
}

TEST_CASE("same seed gives identical models") {
  const auto corpus = planted_corpus(4);
  auto p = planted_params(21);
  p.iterations = 40;
  p.burn_in = 10;
  p.average_samples = true;
  const auto a = tbert::train_lda(corpus, p);
  const auto b = tbert::train_lda(corpus, p);
  CHECK(a.phi == b.phi);
  CHECK(a.theta == b.theta);
  p.seed = 22;
  CHECK_FALSE(tbert::train_lda(corpus, p).theta == a.theta);
}

TEST_CASE("uniform corpus keeps topics balanced") {
  std::vector<tbert::ProcessedDocument> docs;
  for (int d = 0; d < 50; ++d) {
    docs.push_back({"d" + std::to_string(d), {"x", "y", "z", "x", "y", "z"}});
  }
  const auto corpus =
      tbert::make_bow_corpus(docs, tbert::build_vocabulary(docs, 1, 1.0));
  tbert::LdaHyperParams p;
  p.k = 3;
  p.alpha = 1.0;
  p.iterations = 300;
  p.burn_in = 100;
  p.average_samples = true;
  // Mean topic share over documents, pooled across seeds.
  std::vector<double> share(3, 0.0);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    p.seed = seed;
    const auto model = tbert::train_lda(corpus, p);
    for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
      for (std::size_t k = 0; k < 3; ++k) share[k] += model.theta(d, k);
    }
  }
  const double n = 5.0 * corpus.num_docs();
  for (double& s : share) s /= n;
  const double mean = 1.0 / 3.0;
  // Binomial spread of the pooled per-token share.
  const double sigma = std::sqrt(mean * (1 - mean) / (n * 6.0));
  for (double s : share) CHECK(std::abs(s - mean) < 3 * sigma + 0.1);
}

TEST_CASE("top_words clipping and ties") {
  const auto corpus = planted_corpus(8);
  auto p = planted_params(1);
  p.iterations = 20;
  p.burn_in = 5;
  auto model = tbert::train_lda(corpus, p);
  CHECK(tbert::top_words(model, 0, 1000).size() == corpus.vocab_size());
  for (std::size_t w = 0; w < corpus.vocab_size(); ++w) {
    model.phi(0, w) = 1.0 / static_cast<double>(corpus.vocab_size());
  }
  CHECK(tbert::top_words(model, 0, 3) == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("trace and validation") {
  const auto corpus = planted_corpus(8);
  auto p = planted_params(1);
  p.iterations = 20;
  p.burn_in = 5;
  p.trace_every = 5;
  const auto model = tbert::train_lda(corpus, p);
  REQUIRE(model.trace.size() >= 2);
  CHECK(model.trace.front().first == 0);
  CHECK(model.trace.back().second > model.trace.front().second);

  auto bad = p;
  bad.k = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.burn_in = bad.iterations;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.alpha = 0.0;
  CHECK_THROWS_AS(tbert::train_lda(corpus, bad), std::invalid_argument);
}

TEST_CASE("json keeps phi and theta") {
  const auto corpus = planted_corpus(8);
  auto p = planted_params(1);
  p.iterations = 20;
  p.burn_in = 5;
  const auto model = tbert::train_lda(corpus, p);
  const auto back = tbert::lda_from_json(tbert::lda_to_json(model));
  CHECK(back.phi == model.phi);
  CHECK(back.theta == model.theta);
  CHECK(back.params.k == 2);
}
