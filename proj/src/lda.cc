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

#include "tbert/lda.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tbert/random.h"

namespace tbert {

void LdaHyperParams::validate() const {
  if (k < 1) throw std::invalid_argument("lda: k must be >= 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("lda: alpha must be > 0");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("lda: beta must be > 0");
  }
  if (iterations <= burn_in) {
    throw std::invalid_argument("lda: iterations must exceed burn_in");
  }
}

namespace {

class GibbsSampler {
 public:
  GibbsSampler(const BowCorpus& corpus, const LdaHyperParams& params)
      : corpus_(corpus),
        k_(params.k),
        v_(corpus.vocab_size()),
        alpha_(params.alpha),
        beta_(params.beta),
        rng_(params.seed),
        n_dk_(corpus.num_docs() * k_, 0),
        n_kw_(k_ * v_, 0),
        n_k_(k_, 0),
        words_(corpus.num_docs()),
        z_(corpus.num_docs()),
        prob_(k_) {
    for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
      for (const auto& e : corpus.doc(d)) {
        for (std::size_t c = 0; c < e.count; ++c) {
          const auto topic = static_cast<std::int32_t>(rng_.below(k_));
          words_[d].push_back(static_cast<std::int32_t>(e.term));
          z_[d].push_back(topic);
          ++n_dk_[d * k_ + topic];
          ++n_kw_[topic * v_ + e.term];
          ++n_k_[topic];
        }
      }
    }
  }

  void sweep() {
    const double v_beta = static_cast<double>(v_) * beta_;
    for (std::size_t d = 0; d < words_.size(); ++d) {
      std::int64_t* doc_counts = &n_dk_[d * k_];
      for (std::size_t i = 0; i < words_[d].size(); ++i) {
        const std::size_t w = static_cast<std::size_t>(words_[d][i]);
        const std::size_t old_topic = static_cast<std::size_t>(z_[d][i]);
        --doc_counts[old_topic];
        --n_kw_[old_topic * v_ + w];
        --n_k_[old_topic];

        double total = 0.0;
        for (std::size_t t = 0; t < k_; ++t) {
          total += (static_cast<double>(doc_counts[t]) + alpha_) *
                   (static_cast<double>(n_kw_[t * v_ + w]) + beta_) /
                   (static_cast<double>(n_k_[t]) + v_beta);
          prob_[t] = total;
        }
        const double u = rng_.uniform() * total;
        std::size_t new_topic = 0;
        while (new_topic + 1 < k_ && prob_[new_topic] <= u) ++new_topic;

        z_[d][i] = static_cast<std::int32_t>(new_topic);
        ++doc_counts[new_topic];
        ++n_kw_[new_topic * v_ + w];
        ++n_k_[new_topic];
      }
    }
    assert(counts_conserved());
  }

  bool counts_conserved() const {
    const auto total = static_cast<std::int64_t>(corpus_.total_tokens());
    const auto sum = [](const std::vector<std::int64_t>& v) {
      std::int64_t s = 0;
      for (auto x : v) {
        if (x < 0) return std::int64_t{-1};
        s += x;
      }
      return s;
    };
    return sum(n_dk_) == total && sum(n_kw_) == total && sum(n_k_) == total;
  }

  Matrix estimate_theta() const {
    Matrix theta(words_.size(), k_);
    const double k_alpha = static_cast<double>(k_) * alpha_;
    for (std::size_t d = 0; d < words_.size(); ++d) {
      const double denom = static_cast<double>(words_[d].size()) + k_alpha;
      for (std::size_t t = 0; t < k_; ++t) {
        theta(d, t) =
            (static_cast<double>(n_dk_[d * k_ + t]) + alpha_) / denom;
      }
    }
    return theta;
  }

  Matrix estimate_phi() const {
    Matrix phi(k_, v_);
    const double v_beta = static_cast<double>(v_) * beta_;
    for (std::size_t t = 0; t < k_; ++t) {
      const double denom = static_cast<double>(n_k_[t]) + v_beta;
      for (std::size_t w = 0; w < v_; ++w) {
        phi(t, w) = (static_cast<double>(n_kw_[t * v_ + w]) + beta_) / denom;
      }
    }
    return phi;
  }

  void export_state(LdaModel& model) {
    model.z = std::move(z_);
    model.n_dk = std::move(n_dk_);
    model.n_kw = std::move(n_kw_);
    model.n_k = std::move(n_k_);
  }

 private:
  const BowCorpus& corpus_;
  std::size_t k_;
  std::size_t v_;
  double alpha_;
  double beta_;
  Rng rng_;
  std::vector<std::int64_t> n_dk_;
  std::vector<std::int64_t> n_kw_;
  std::vector<std::int64_t> n_k_;
  std::vector<std::vector<std::int32_t>> words_;
  std::vector<std::vector<std::int32_t>> z_;
  std::vector<double> prob_;
};

double corpus_log_likelihood(const Matrix& theta, const Matrix& phi,
                             const BowCorpus& corpus) {
  double ll = 0.0;
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    for (const auto& e : corpus.doc(d)) {
      double p = 0.0;
      for (std::size_t t = 0; t < phi.rows(); ++t) {
        p += theta(d, t) * phi(t, e.term);
      }
      ll += static_cast<double>(e.count) * std::log(p);
    }
  }
  return ll;
}

void accumulate(Matrix& sum, const Matrix& sample) {
  auto dst = sum.values();
  auto src = sample.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

void scale(Matrix& m, double factor) {
  for (double& x : m.values()) x *= factor;
}

}  // namespace

LdaModel train_lda(const BowCorpus& corpus, const LdaHyperParams& params) {
  params.validate();
  if (corpus.num_docs() == 0) throw std::invalid_argument("lda: empty corpus");
  if (corpus.vocab_size() == 0) {
    throw std::invalid_argument("lda: empty vocabulary (V = 0)");
  }

  GibbsSampler sampler(corpus, params);
  LdaModel model;
  model.params = params;
  model.num_docs = corpus.num_docs();
  model.vocab_size = corpus.vocab_size();

  const auto record = [&](std::size_t sweep) {
    model.trace.emplace_back(
        sweep, corpus_log_likelihood(sampler.estimate_theta(),
                                     sampler.estimate_phi(), corpus));
  };
  if (params.trace_every > 0) record(0);

  Matrix theta_sum(corpus.num_docs(), params.k);
  Matrix phi_sum(params.k, corpus.vocab_size());
  std::size_t samples = 0;
  for (std::size_t s = 1; s <= params.iterations; ++s) {
    sampler.sweep();
    if (params.average_samples && s > params.burn_in) {
      accumulate(theta_sum, sampler.estimate_theta());
      accumulate(phi_sum, sampler.estimate_phi());
      ++samples;
    }
    if (params.trace_every > 0 && s % params.trace_every == 0) record(s);
  }

  if (params.average_samples) {
    scale(theta_sum, 1.0 / static_cast<double>(samples));
    scale(phi_sum, 1.0 / static_cast<double>(samples));
    model.theta = std::move(theta_sum);
    model.phi = std::move(phi_sum);
  } else {
    model.theta = sampler.estimate_theta();
    model.phi = sampler.estimate_phi();
  }
  sampler.export_state(model);
  return model;
}

std::vector<double> doc_topic_vector(const LdaModel& model,
                                     std::size_t doc_index) {
  if (doc_index >= model.theta.rows()) {
    throw std::out_of_range("lda: document index " +
                            std::to_string(doc_index) + " out of range (M = " +
                            std::to_string(model.theta.rows()) + ")");
  }
  const auto row = model.theta.row(doc_index);
  return {row.begin(), row.end()};
}

std::vector<std::size_t> top_words(const LdaModel& model, std::size_t topic,
                                   std::size_t n) {
  if (topic >= model.phi.rows()) {
    throw std::out_of_range("lda: topic index out of range");
  }
  const auto row = model.phi.row(topic);
  std::vector<std::size_t> order(row.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  n = std::min(n, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n),
                    order.end(), [&](std::size_t a, std::size_t b) {
                      if (row[a] != row[b]) return row[a] > row[b];
                      return a < b;
                    });
  order.resize(n);
  return order;
}

double log_likelihood(const LdaModel& model, const BowCorpus& corpus) {
  if (corpus.vocab_size() != model.phi.cols() ||
      corpus.num_docs() != model.theta.rows()) {
    throw std::invalid_argument(
        "lda: corpus vocabulary or document count does not match the model");
  }
  return corpus_log_likelihood(model.theta, model.phi, corpus);
}

Json lda_to_json(const LdaModel& model) {
  Json j;
  j["k"] = model.params.k;
  j["alpha"] = model.params.alpha;
  j["beta"] = model.params.beta;
  j["seed"] = model.params.seed;
  j["iterations"] = model.params.iterations;
  j["burn_in"] = model.params.burn_in;
  j["average_samples"] = model.params.average_samples;
  j["num_docs"] = model.num_docs;
  j["vocab_size"] = model.vocab_size;
  j["phi"] = std::vector<double>(model.phi.values().begin(),
                                 model.phi.values().end());
  j["theta"] = std::vector<double>(model.theta.values().begin(),
                                   model.theta.values().end());
  return j;
}

LdaModel lda_from_json(const Json& j) {
  LdaModel model;
  model.params.k = j.at("k").get<std::size_t>();
  model.params.alpha = j.at("alpha").get<double>();
  model.params.beta = j.at("beta").get<double>();
  model.params.seed = j.at("seed").get<std::uint64_t>();
  model.params.iterations = j.value("iterations", model.params.iterations);
  model.params.burn_in = j.value("burn_in", model.params.burn_in);
  model.params.average_samples =
      j.value("average_samples", model.params.average_samples);
  auto phi = j.at("phi").get<std::vector<double>>();
  auto theta = j.at("theta").get<std::vector<double>>();
  const std::size_t k = model.params.k;
  if (k == 0 || phi.size() % k != 0 || theta.size() % k != 0) {
    throw std::runtime_error("lda model json: phi/theta sizes inconsistent");
  }
  model.vocab_size = phi.size() / k;
  model.num_docs = theta.size() / k;
  model.phi = Matrix(k, model.vocab_size, std::move(phi));
  model.theta = Matrix(model.num_docs, k, std::move(theta));
  return model;
}

}  // namespace tbert
