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

#ifndef TBERT_ADAM_H_
#define TBERT_ADAM_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tbert {

// Per-tensor Adam moments.
struct AdamState {
  AdamState() = default;
  explicit AdamState(std::size_t size, double epsilon = 1e-8)
      : m(size, 0.0), v(size, 0.0), epsilon(epsilon) {}

  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t step = 0;
  double epsilon = 1e-8;
  double beta1 = 0.9;
  double beta2 = 0.999;
};

// One bias-corrected Adam update in place. A nonzero `weight_decay` applies
// decoupled decay (AdamW): p -= lr * weight_decay * p before the moment
// step. Throws std::invalid_argument on size mismatch.
void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState& state, double lr, double weight_decay = 0.0);

}  // namespace tbert

#endif  // TBERT_ADAM_H_
