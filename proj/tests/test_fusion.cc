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
#include <filesystem>

#include "doctest.h"
#include "tbert/clustering.h"
#include "tbert/fusion.h"
#include "tbert/random.h"

using tbert::Matrix;

TEST_CASE("fusion concatenates the weighted topic vector") {
  const Matrix omega = Matrix::from_rows({{0.5, 0.5}});
  const Matrix h = Matrix::from_rows({{1, 2, 3}});
  tbert::FusionConfig cfg;
  const auto f = tbert::fuse(omega, h, cfg);
  CHECK(f.data == Matrix::from_rows({{7.5, 7.5, 1, 2, 3}}));
  CHECK(f.k == 2);
  CHECK(f.d == 3);
  CHECK(f.gamma == 15.0);
}

TEST_CASE("zero gamma leaves clustering to the embeddings") {
  tbert::Rng rng(8);
  Matrix omega(30, 3), h(30, 2);
  for (std::size_t i = 0; i < 30; ++i) {
    omega(i, i % 3) = 1.0;
    h(i, 0) = (i < 15 ? 0.0 : 10.0) + rng.normal() * 0.1;
    h(i, 1) = rng.normal() * 0.1;
  }
  tbert::FusionConfig cfg;
  cfg.gamma = 0.0;
  const auto f = tbert::fuse(omega, h, cfg);
  for (std::size_t i = 0; i < 30; ++i) {
    for (std::size_t c = 0; c < 3; ++c) CHECK(f.data(i, c) == 0.0);
  }
  tbert::KMeansConfig km;
  km.k = 2;
  const auto fused_model = tbert::kmeans(f.data, km);
  const auto plain_model = tbert::kmeans(h, km);
  CHECK(fused_model.assignments == plain_model.assignments);
  CHECK(fused_model.inertia == doctest::Approx(plain_model.inertia));
}

TEST_CASE("fusion input checks") {
  tbert::FusionConfig cfg;
  CHECK_THROWS_AS(tbert::fuse(Matrix(2, 2), Matrix(3, 2), cfg),
                  std::invalid_argument);
  Matrix bad(1, 1);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(tbert::fuse(bad, Matrix(1, 1), cfg), std::invalid_argument);
  cfg.gamma = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("embedding normalization flag") {
  const Matrix omega = Matrix::from_rows({{1.0}});
  tbert::EmbeddingMatrix e{{"x"}, 2, {3.0f, 4.0f}};
  tbert::FusionConfig cfg;
  cfg.gamma = 2.0;
  const auto norm = tbert::fuse(omega, e, cfg);
  CHECK(norm.data(0, 1) == doctest::Approx(0.6));
  CHECK(norm.ids == e.ids);
  cfg.normalize_embeddings = false;
  CHECK(tbert::fuse(omega, e, cfg).data == Matrix::from_rows({{2, 3, 4}}));
}

TEST_CASE("fused matrix file round-trip") {
  tbert::EmbeddingMatrix e{{"a", "b"}, 2, {1, 2, 3, 4}};
  tbert::FusionConfig cfg;
  cfg.normalize_embeddings = false;
  cfg.gamma = 0.25;
  const auto f = tbert::fuse(Matrix::from_rows({{0.5, 0.5}, {1, 0}}), e, cfg);
  const auto dir = std::filesystem::temp_directory_path() / "tbert_fuse_test";
  std::filesystem::create_directories(dir);
  tbert::write_fused((dir / "f.tbem").string(), (dir / "f.json").string(), f);
  const auto back =
      tbert::read_fused((dir / "f.tbem").string(), (dir / "f.json").string());
  std::filesystem::remove_all(dir);
  CHECK(back.ids == f.ids);
  CHECK(back.k == 2);
  CHECK(back.d == 2);
  CHECK(back.gamma == 0.25);
  CHECK(back.data == f.data);
}
