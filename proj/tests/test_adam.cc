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
#include "tbert/adam.h"

TEST_CASE("zero gradient leaves parameters unchanged") {
  std::vector<double> p{1.0, -2.0};
  const std::vector<double> g{0.0, 0.0};
  tbert::AdamState s(2);
  tbert::adam_step(p, g, s, 0.1);
  CHECK(p == std::vector<double>{1.0, -2.0});
  CHECK(s.step == 1);
}

TEST_CASE("first step moves by about the learning rate") {
  std::vector<double> p{0.0};
  const std::vector<double> g{1.0};
  tbert::AdamState s(1);
  tbert::adam_step(p, g, s, 0.1);
  // m_hat = 1, v_hat = 1, so the step is lr / (1 + eps).
  CHECK(p[0] == doctest::Approx(-0.1 / (1.0 + 1e-8)).epsilon(1e-15));
}

TEST_CASE("matches a hand-rolled trace over several steps") {
  std::vector<double> p{0.5};
  double ref = 0.5, m = 0.0, v = 0.0;
  tbert::AdamState s(1);
  const double grads[] = {0.3, -1.2, 0.7, 0.05};
  for (int t = 1; t <= 4; ++t) {
    const double g = grads[t - 1];
    const std::vector<double> gv{g};
    tbert::adam_step(p, gv, s, 0.01);
    m = 0.9 * m + 0.1 * g;
    v = 0.999 * v + 0.001 * g * g;
    const double mh = m / (1 - std::pow(0.9, t));
    const double vh = v / (1 - std::pow(0.999, t));
    ref -= 0.01 * mh / (std::sqrt(vh) + 1e-8);
    CHECK(p[0] == doctest::Approx(ref).epsilon(1e-14));
  }
}

TEST_CASE("decoupled weight decay") {
  std::vector<double> p{2.0};
  const std::vector<double> g{0.0};
  tbert::AdamState s(1);
  tbert::adam_step(p, g, s, 0.1, 0.5);
  CHECK(p[0] == doctest::Approx(2.0 - 0.1 * 0.5 * 2.0));
}

TEST_CASE("size mismatch") {
  std::vector<double> p{1.0};
  const std::vector<double> g{1.0, 2.0};
  tbert::AdamState s(1);
  CHECK_THROWS_AS(tbert::adam_step(p, g, s, 0.1), std::invalid_argument);
}
