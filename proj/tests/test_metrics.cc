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
#include <vector>

#include "doctest.h"
#include "tbert/matrix.h"
#include "tbert/metrics.h"
#include "tbert/random.h"

using tbert::ConfusionCounts;
using tbert::Matrix;

TEST_CASE("f1 worked examples") {
  const auto c = ConfusionCounts::binary(3, 0, 1, 2);
  CHECK(tbert::precision(c, 0) == doctest::Approx(0.75));
  CHECK(tbert::recall(c, 0) == doctest::Approx(0.6));
  CHECK(tbert::f1_score(c, 0) == doctest::Approx(2.0 * 0.45 / 1.35));
  CHECK(tbert::f1_score(ConfusionCounts::binary(0, 3, 0, 5), 0) == 0.0);
  const auto equal = ConfusionCounts::binary(4, 1, 1, 1);
  CHECK(tbert::f1_score(equal, 0) == doctest::Approx(0.8));
}

TEST_CASE("accuracy worked examples") {
  CHECK(tbert::accuracy(ConfusionCounts::binary(50, 40, 5, 5)) ==
        doctest::Approx(0.9).epsilon(1e-15));
  CHECK(tbert::accuracy(ConfusionCounts::binary(3, 4, 0, 0)) == 1.0);
  CHECK(tbert::accuracy(ConfusionCounts::binary(0, 0, 2, 3)) == 0.0);
  CHECK_THROWS_AS(tbert::accuracy(ConfusionCounts(3)), std::invalid_argument);
}

TEST_CASE("binary views of the confusion matrix") {
  const auto c = ConfusionCounts::binary(7, 5, 3, 2);
  CHECK(c.tp(0) == 7);
  CHECK(c.tn(0) == 5);
  CHECK(c.fp(0) == 3);
  CHECK(c.fn(0) == 2);
  CHECK(c.tp(1) == 5);
  CHECK(c.total() == 17);
}

TEST_CASE("per-class accuracy") {
  const std::vector<std::size_t> labels{0, 0, 1};
  const std::vector<std::size_t> preds{0, 1, 1};
  const auto acc = tbert::per_class_accuracy(labels, preds);
  REQUIRE(acc.size() == 2);
  CHECK(acc.at(0) == 0.5);
  CHECK(acc.at(1) == 1.0);
  for (const auto& [c, a] : tbert::per_class_accuracy(labels, labels)) {
    CHECK(a == 1.0);
  }
  const std::vector<std::size_t> shorter{0};
  CHECK_THROWS_AS(tbert::per_class_accuracy(labels, shorter),
                  std::invalid_argument);
}

TEST_CASE("weighted f1 and bounds on random labels") {
  tbert::Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> y(30), p(30);
    for (auto& v : y) v = rng.below(3);
    for (auto& v : p) v = rng.below(3);
    const auto c = tbert::confusion_counts(y, p, 3);
    for (std::size_t k = 0; k < 3; ++k) {
      const double f = tbert::f1_score(c, k);
      CHECK(f >= 0.0);
      CHECK(f <= 1.0);
    }
    const double w = tbert::weighted_f1(c);
    CHECK(w >= 0.0);
    CHECK(w <= 1.0);
  }
  const std::vector<std::size_t> bad{5};
  CHECK_THROWS_AS(tbert::confusion_counts(bad, bad, 3), std::invalid_argument);
}

TEST_CASE("silhouette worked examples") {
  const Matrix pts = Matrix::from_rows({{0, 0}, {0, 1}, {10, 0}, {10, 1}});
  const std::vector<std::size_t> by_x{0, 0, 1, 1};
  const double b = (10.0 + std::sqrt(101.0)) / 2.0;
  CHECK(tbert::silhouette(pts, by_x) == doctest::Approx(1.0 - 1.0 / b));
  CHECK(tbert::silhouette(pts, by_x) == doctest::Approx(0.900).epsilon(0.002));

  const Matrix dup = Matrix::from_rows({{0, 0}, {0, 0}, {50, 50}, {50, 50}});
  CHECK(tbert::silhouette(dup, by_x) == 1.0);
}

TEST_CASE("silhouette conventions") {
  const Matrix pts = Matrix::from_rows({{0}, {1}, {5}});
  const std::vector<std::size_t> a{0, 0, 1};
  const auto s = tbert::silhouette_samples(pts, a);
  CHECK(s[2] == 0.0);  // singleton
  CHECK(s[0] == doctest::Approx(1.0 - 1.0 / 5.0));
  CHECK(s[1] == doctest::Approx(1.0 - 1.0 / 4.0));
  const std::vector<std::size_t> one{0, 0, 0};
  CHECK_THROWS_AS(tbert::silhouette(pts, one), std::invalid_argument);
  const std::vector<std::size_t> two{0, 1};
  CHECK_THROWS_AS(tbert::silhouette(pts, two), std::invalid_argument);
}
