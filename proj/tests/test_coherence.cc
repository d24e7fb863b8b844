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
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "tbert/coherence.h"

using Docs = std::vector<std::vector<std::size_t>>;
using Words = std::vector<std::size_t>;

namespace {

const Words kAll{0, 1, 2, 3};

}  // namespace

TEST_CASE("umass worked examples") {
  // a = 0, b = 1
  const Docs docs{{0, 1}, {0}};
  const tbert::CooccurrenceStats stats(docs, kAll, 0);
  CHECK(tbert::umass_coherence(Words{0, 1}, stats) ==
        doctest::Approx(std::log(2.0)));
  // Word order in the topic does not matter: words are ranked by frequency.
  CHECK(tbert::umass_coherence(Words{1, 0}, stats) ==
        doctest::Approx(std::log(2.0)));

  const Docs apart{{0}, {0}, {1}, {1}, {1}};
  const tbert::CooccurrenceStats s2(apart, kAll, 0);
  CHECK(tbert::umass_coherence(Words{1, 0}, s2) < 0.0);
  CHECK(tbert::umass_coherence(Words{1, 0}, s2) ==
        doctest::Approx(std::log(1.0 / 2.0)));

  const Docs together{{0, 1}, {0, 1}, {0, 1}, {0}};
  const tbert::CooccurrenceStats s3(together, kAll, 0);
  CHECK(tbert::umass_coherence(Words{0, 1}, s3) ==
        doctest::Approx(std::log(4.0 / 3.0)));

  CHECK_THROWS_AS(tbert::umass_coherence(Words{0, 3}, stats),
                  std::invalid_argument);
}

TEST_CASE("sliding windows count boolean contexts") {
  const Docs docs{{0, 1, 2, 0}};
  const tbert::CooccurrenceStats stats(docs, kAll, 2);
  CHECK(stats.num_contexts() == 3);
  CHECK(stats.count(0) == 2);
  CHECK(stats.count(0, 1) == 1);
  CHECK(stats.count(0, 2) == 1);
  CHECK(stats.count(1, 2) == 1);
  CHECK(stats.count(3) == 0);
  // A document shorter than the window is a single context.
  const tbert::CooccurrenceStats whole(docs, kAll, 10);
  CHECK(whole.num_contexts() == 1);
  CHECK(whole.count(0) == 1);
}

TEST_CASE("npmi conventions") {
  const Docs docs{{0, 1}, {0, 1}, {2}, {2, 0}};
  const tbert::CooccurrenceStats stats(docs, kAll, 0);
  CHECK(tbert::npmi(stats, 0, 3) == 0.0);
  const double p01 = 0.5, p0 = 0.75, p1 = 0.5;
  const double expect = std::log((p01 + 1e-12) / (p0 * p1)) / -std::log(p01 + 1e-12);
  CHECK(tbert::npmi(stats, 0, 1) == doctest::Approx(expect));
  CHECK(tbert::npmi(stats, 1, 2) < 0.0);
  const Docs always{{0, 1}, {1, 0}};
  CHECK(tbert::npmi(tbert::CooccurrenceStats(always, kAll, 0), 0, 1) == 1.0);
}

TEST_CASE("cv coherence ranks coherent topics above mixed ones") {
  Docs docs;
  for (int i = 0; i < 20; ++i) {
    docs.push_back({0, 1});
    docs.push_back({2, 3});
  }
  const tbert::CooccurrenceStats stats(docs, kAll, 0);
  const double good = tbert::cv_coherence(Words{0, 1}, stats);
  const double bad = tbert::cv_coherence(Words{0, 2}, stats);
  CHECK(good > bad);
  CHECK(good <= 1.0 + 1e-12);
  CHECK(bad >= -1.0 - 1e-12);
}

TEST_CASE("cv coherence hand computation") {
  const Docs docs{{0, 1}, {0, 1}, {2}, {2, 0}};
  const tbert::CooccurrenceStats stats(docs, kAll, 0);
  const Words w{0, 1, 2};
  std::vector<std::vector<double>> v(3, std::vector<double>(3));
  std::vector<double> total(3, 0.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      v[i][j] = tbert::npmi(stats, w[i], w[j]);
      total[j] += v[i][j];
    }
  }
  double expect = 0.0;
  for (int i = 0; i < 3; ++i) {
    double dot = 0, n1 = 0, n2 = 0;
    for (int j = 0; j < 3; ++j) {
      dot += v[i][j] * total[j];
      n1 += v[i][j] * v[i][j];
      n2 += total[j] * total[j];
    }
    expect += dot / std::sqrt(n1 * n2);
  }
  expect /= 3.0;
  CHECK(tbert::cv_coherence(w, stats) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("cv degenerate topics") {
  const Docs docs{{0}, {1}};
  const tbert::CooccurrenceStats stats(docs, kAll, 0);
  bool degenerate = false;
  CHECK(tbert::cv_coherence(Words{2, 3}, stats, &degenerate) == 0.0);
  CHECK(degenerate);
  CHECK_THROWS_AS(tbert::cv_coherence(Words{0}, stats), std::invalid_argument);
}

TEST_CASE("collect_terms keeps first occurrence order") {
  const std::vector<Words> topics{{3, 1}, {1, 4, 3}};
  CHECK(tbert::collect_terms(topics) == Words{3, 1, 4});
}
