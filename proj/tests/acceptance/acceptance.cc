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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails or overruns its time budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "tbert/attention.h"
#include "tbert/autoencoder.h"
#include "tbert/lda.h"
#include "tbert/metrics.h"
#include "tbert/pipeline.h"
#include "tbert/random.h"
#include "tbert/sentiment.h"
#include "tbert/synth.h"

namespace fs = std::filesystem;
using namespace tbert;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, double budget_seconds,
               const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  const bool in_time = budget_seconds <= 0.0 || secs < budget_seconds;
  const bool ok = out.ok && in_time;
  if (!ok) ++failures;
  std::printf("%s  %-28s %s [%.2fs%s]\n", ok ? "PASS" : "FAIL", name,
              out.detail.c_str(), secs, in_time ? "" : ", over budget");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), f, a, b);
  return buf;
}

// ---------------------------------------------------------------- metrics

Outcome metric_exactness() {
  Rng rng(2024);
  double worst = 0.0;
  for (int set = 0; set < 1000; ++set) {
    const std::size_t classes = 2 + rng.below(3);
    const std::size_t n = 1 + rng.below(60);
    std::vector<std::size_t> y(n), p(n);
    for (auto& v : y) v = rng.below(classes);
    for (auto& v : p) v = rng.below(classes);
    const auto counts = confusion_counts(y, p, classes);
    // Oracle: direct counting over the pairs.
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) correct += y[i] == p[i];
    worst = std::max(worst, std::abs(accuracy(counts) -
                                     static_cast<double>(correct) / n));
    for (std::size_t c = 0; c < classes; ++c) {
      double tp = 0, fp = 0, fn = 0;
      for (std::size_t i = 0; i < n; ++i) {
        tp += y[i] == c && p[i] == c;
        fp += y[i] != c && p[i] == c;
        fn += y[i] == c && p[i] != c;
      }
      double f1 = 0.0;
      if (tp + fp > 0 && tp + fn > 0) {
        const double pr = tp / (tp + fp);
        const double rc = tp / (tp + fn);
        if (pr + rc > 0) f1 = 2 * pr * rc / (pr + rc);
      }
      worst = std::max(worst, std::abs(f1_score(counts, c) - f1));
    }
  }
  const double acc = accuracy(ConfusionCounts::binary(50, 40, 5, 5));
  return {worst <= 1e-12 && acc == 0.9,
          fmt("max deviation %.3g, accuracy(50,40,5,5) = %.17g", worst, acc)};
}

// -------------------------------------------------------------- silhouette

Outcome silhouette_oracle() {
  Rng rng(77);
  double worst = 0.0;
  for (int set = 0; set < 50; ++set) {
    const std::size_t n = 2 + rng.below(199);
    const std::size_t dim = 1 + rng.below(5);
    const std::size_t k = 2 + rng.below(std::min<std::size_t>(6, n - 1));
    Matrix x(n, dim);
    for (double& v : x.values()) v = rng.normal() * 3.0;
    std::vector<std::size_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = i < k ? i : rng.below(k);
    // Definition: s(i) = (b - a) / max(a, b), singleton clusters score 0.
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::map<std::size_t, std::pair<double, std::size_t>> by_cluster;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        double d2 = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
          d2 += (x(i, c) - x(j, c)) * (x(i, c) - x(j, c));
        }
        auto& e = by_cluster[labels[j]];
        e.first += std::sqrt(d2);
        ++e.second;
      }
      if (by_cluster.count(labels[i]) == 0) continue;
      const auto& own = by_cluster[labels[i]];
      const double a = own.first / own.second;
      double b = INFINITY;
      for (const auto& [c, e] : by_cluster) {
        if (c != labels[i]) b = std::min(b, e.first / e.second);
      }
      const double m = std::max(a, b);
      total += m == 0.0 ? 0.0 : (b - a) / m;
    }
    worst = std::max(worst, std::abs(silhouette(x, labels) - total / n));
  }
  return {worst <= 1e-9, fmt("max deviation %.3g over 50 datasets", worst)};
}

// ------------------------------------------------------------- autoencoder

Outcome autoencoder_gradients() {
  Rng rng(5);
  double worst = 0.0;
  for (std::uint64_t m = 0; m < 20; ++m) {
    AeConfig cfg;
    cfg.latent_dim = 4;
    cfg.seed = 100 + m;
    cfg.l1 = 1e-3;
    cfg.l2 = 1e-3;
    AeModel model = init_autoencoder(10, cfg);
    for (double& b : model.encoder_bias) b = 0.1 * rng.normal();
    for (double& b : model.decoder_bias) b = 0.1 * rng.normal();
    std::vector<double> sample(10);
    for (double& s : sample) s = rng.normal();
    worst = std::max(worst, gradient_check(model, sample));
  }
  return {worst < 1e-4, fmt("max relative error %.3g over 20 models", worst)};
}

// --------------------------------------------------------------------- lda

Outcome lda_recovery() {
  int good = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed * 1000);
    std::vector<ProcessedDocument> docs;
    for (int d = 0; d < 200; ++d) {
      const char prefix = d < 100 ? 'a' : 'b';
      ProcessedDocument doc{"d" + std::to_string(d), {}};
      for (int i = 0; i < 10; ++i) {
        doc.tokens.push_back(prefix + std::to_string(1 + rng.below(10)));
      }
      docs.push_back(std::move(doc));
    }
    const auto corpus = make_bow_corpus(docs, build_vocabulary(docs, 1, 1.0));
    LdaHyperParams p;
    p.k = 2;
    p.alpha = 0.1;
    p.beta = 0.01;
    p.iterations = 500;
    p.burn_in = 100;
    p.seed = seed;
    const auto model = train_lda(corpus, p);
    double cross = 0.0;
    for (std::size_t t = 0; t < 2; ++t) {
      double a_mass = 0.0;
      for (std::size_t w = 0; w < corpus.vocab_size(); ++w) {
        if (corpus.vocabulary().term(w)[0] == 'a') a_mass += model.phi(t, w);
      }
      cross = std::max(cross, std::min(a_mass, 1.0 - a_mass));
    }
    worst = std::max(worst, cross);
    good += cross < 0.05;
  }
  return {good >= 9, fmt("%.0f/10 seeds below 0.05 (worst %.4f)", good, worst)};
}

// ------------------------------------------------------- fixture criteria

struct Fixture {
  SynthCorpus corpus;
  PipelineConfig config;
  PreparedInputs inputs;
};

Fixture make_fixture(std::uint64_t seed) {
  SynthConfig sc;
  sc.seed = seed;
  Fixture f{generate_synthetic(sc), fixture_pipeline_config(sc), {}};
  f.inputs = prepare_inputs(f.corpus.docs, f.corpus.embeddings, f.config);
  return f;
}

Outcome table_ordering() {
  int cv_wins = 0, sil_wins = 0;
  std::string trace;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Fixture f = make_fixture(seed);
    const auto a = analyze_topics(f.inputs, f.config, f.config.lda.k);
    cv_wins += a.fused_coherence.cv_mean > a.lda_coherence.cv_mean;
    sil_wins += a.latent_silhouette > a.embedding_silhouette;
    if (seed == 1) {
      trace = fmt(" (seed 1: C_V %.3f vs %.3f", a.fused_coherence.cv_mean,
                  a.lda_coherence.cv_mean) +
              fmt(", silhouette %.3f vs %.3f)", a.latent_silhouette,
                  a.embedding_silhouette);
    }
  }
  return {cv_wins >= 8 && sil_wins >= 8,
          fmt("fused C_V > LDA in %.0f/10, latent silhouette > raw in %.0f/10",
              cv_wins, sil_wins) +
              trace};
}

Outcome k_sweep() {
  int hits = 0;
  std::string picks;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Fixture f = make_fixture(seed);
    const auto report = sweep_k(f.inputs, f.config);
    const std::size_t k = report.selected_k.value_or(0);
    hits += k == 8;
    picks += (picks.empty() ? "" : ",") + std::to_string(k);
  }
  return {hits >= 8, fmt("k = 8 selected in %.0f/10 seeds", hits) +
                         " (picks " + picks + ")"};
}

// --------------------------------------------------------------- attention

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  Matrix m(r, c);
  for (double& v : m.values()) v = 2.0 * rng.uniform() - 1.0;
  return m;
}

Outcome attention_invariants() {
  Rng rng(123);
  double row_err = 0.0, shift_err = 0.0, equiv_err = 0.0, min_break = INFINITY;
  bool identity_ok = true;
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t t = 2 + rng.below(7);
    const std::size_t heads = 1 + rng.below(3);
    const std::size_t d = heads * (1 + rng.below(4));
    const Matrix q = random_matrix(t, d, rng);
    const Matrix k = random_matrix(t, d, rng);

    const Matrix w = attention::attention_weights(q, k);
    for (std::size_t r = 0; r < t; ++r) {
      const auto row = w.row(r);
      row_err = std::max(row_err,
                         std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0));
    }
    // Adding one vector to every key shifts each logit row by a constant.
    Matrix shifted = k;
    const Matrix u = random_matrix(1, d, rng);
    for (std::size_t r = 0; r < t; ++r) {
      for (std::size_t c = 0; c < d; ++c) shifted(r, c) += 5.0 * u(0, c);
    }
    const Matrix ws = attention::attention_weights(q, shifted);
    for (std::size_t i = 0; i < w.values().size(); ++i) {
      shift_err = std::max(shift_err, std::abs(ws.values()[i] - w.values()[i]));
    }

    const Matrix one_q = random_matrix(1, d, rng);
    const Matrix one_k = random_matrix(1, d, rng);
    const Matrix one_v = random_matrix(1, d + 1, rng);
    identity_ok &= attention::scaled_dot_attention(one_q, one_k, one_v) == one_v;

    const auto params = attention::AttentionParams::random(d, heads, 2 * d, rng);
    const Matrix x = random_matrix(t, d, rng);
    std::vector<std::size_t> perm(t);
    std::iota(perm.begin(), perm.end(), 0);
    std::rotate(perm.begin(), perm.begin() + 1, perm.end());
    rng.shuffle(std::span<std::size_t>(perm.data() + 1, t - 1));
    Matrix xp(t, d);
    for (std::size_t r = 0; r < t; ++r) {
      std::copy(x.row(perm[r]).begin(), x.row(perm[r]).end(), xp.row(r).begin());
    }
    for (bool positions : {false, true}) {
      const Matrix h = attention::encode({x, positions}, params);
      const Matrix hp = attention::encode({xp, positions}, params);
      double diff = 0.0;
      for (std::size_t r = 0; r < t; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
          diff = std::max(diff, std::abs(hp(r, c) - h(perm[r], c)));
        }
      }
      if (positions) {
        min_break = std::min(min_break, diff);
      } else {
        equiv_err = std::max(equiv_err, diff);
      }
    }
  }
  const bool ok = row_err <= 1e-9 && shift_err <= 1e-12 && identity_ok &&
                  equiv_err <= 1e-12 && min_break > 1e-6;
  return {ok, fmt("row sum err %.2g, shift err %.2g", row_err, shift_err) +
                  fmt(", equivariance err %.2g, min break with positions %.2g",
                      equiv_err, min_break) +
                  (identity_ok ? "" : ", single-token identity FAILED")};
}

// ------------------------------------------------------------- determinism

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "tbert_acceptance_run";
  fs::remove_all(dir);
  SynthConfig sc;
  sc.seed = 1;
  write_synthetic(generate_synthetic(sc), dir.string());
  PipelineConfig cfg = fixture_pipeline_config(sc);
  cfg.paths.corpus = (dir / "corpus.csv").string();
  cfg.paths.embeddings = (dir / "embeddings.tbem").string();
  cfg.paths.labels = (dir / "labels.csv").string();
  cfg.paths.out_dir = (dir / "out").string();

  const auto first_run = run_pipeline(cfg);
  std::map<std::string, std::string> first;
  for (const auto& p : first_run.artifacts) first[p] = slurp(p);
  fs::remove_all(dir / "out");
  const auto second_run = run_pipeline(cfg);
  std::size_t identical = 0;
  for (const auto& p : second_run.artifacts) {
    identical += first.count(p) && first[p] == slurp(p);
  }
  fs::remove_all(dir);
  const bool ok = identical == first.size() &&
                  second_run.artifacts.size() == first.size();
  return {ok, fmt("%.0f/%.0f artifacts bit-identical", identical,
                  first.size())};
}

// --------------------------------------------------------------- sentiment

Outcome sentiment_head() {
  Rng rng(8);
  LabeledSet set;
  set.embeddings.dim = 16;
  std::vector<std::vector<double>> centers(3, std::vector<double>(16));
  for (auto& c : centers) {
    for (double& v : c) v = 3.0 * rng.normal();
  }
  for (std::size_t i = 0; i < 600; ++i) {
    const std::size_t label = i % 3;
    set.embeddings.ids.push_back("s" + std::to_string(i));
    for (std::size_t c = 0; c < 16; ++c) {
      set.embeddings.data.push_back(
          static_cast<float>(centers[label][c] + 0.5 * rng.normal()));
    }
    set.labels.push_back(label);
  }
  SentimentTrainConfig cfg;
  cfg.epochs = 30;
  cfg.learning_rate = 0.01;
  const auto model = train_classifier(set, cfg);
  const auto eval = evaluate(model, set);
  double worst = 0.0;
  for (const auto& p : predict(model, set.embeddings)) {
    worst = std::max(worst, std::abs(p.probabilities[0] + p.probabilities[1] +
                                     p.probabilities[2] - 1.0));
  }
  return {eval.accuracy >= 0.99 && worst <= 1e-9,
          fmt("training accuracy %.4f, max |sum p - 1| %.2g", eval.accuracy,
              worst)};
}

}  // namespace

int main() {
  criterion("metric exactness", 1.0, metric_exactness);
  criterion("silhouette oracle", 10.0, silhouette_oracle);
  criterion("autoencoder gradient check", 30.0, autoencoder_gradients);
  criterion("lda topic recovery", 30.0, lda_recovery);
  criterion("attention invariants", 5.0, attention_invariants);
  criterion("sentiment head", 0.0, sentiment_head);
  criterion("determinism", 0.0, determinism);
  criterion("fused vs lda ordering", 300.0, table_ordering);
  criterion("k sweep cut-off", 600.0, k_sweep);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
