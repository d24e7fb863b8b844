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

// Command-line front end: one subcommand per pipeline stage plus `run`,
// `sweep` and `synth`.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tbert/autoencoder.h"
#include "tbert/clustering.h"
#include "tbert/corpus.h"
#include "tbert/csv.h"
#include "tbert/embeddings.h"
#include "tbert/fusion.h"
#include "tbert/json_util.h"
#include "tbert/lda.h"
#include "tbert/pipeline.h"
#include "tbert/sentiment.h"
#include "tbert/synth.h"

namespace fs = std::filesystem;
using namespace tbert;

namespace {

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* cmd, Common& c, bool out_required = true) {
  cmd->add_option("--config", c.config, "Pipeline config JSON")
      ->check(CLI::ExistingFile);
  c.seed_opt = cmd->add_option("--seed", c.seed, "Seed for every stage");
  auto* out = cmd->add_option("--out", c.out, "Output path");
  if (out_required) out->required();
}

PipelineConfig effective_config(const Common& c) {
  PipelineConfig cfg = c.config.empty() ? PipelineConfig{} : load_config(c.config);
  if (c.seed_opt != nullptr && c.seed_opt->count() > 0) cfg.set_seed(c.seed);
  return cfg;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_text_file(path.string(), content);
}

std::vector<ProcessedDocument> read_processed(const fs::path& dir) {
  std::ifstream in(dir / "processed.jsonl", std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + (dir / "processed.jsonl").string());
  return read_processed_jsonl(in);
}

BowCorpus load_bow(const fs::path& dir) {
  const auto docs = read_processed(dir);
  const Vocabulary vocab =
      vocabulary_from_json(parse_json_file((dir / "vocab.json").string()));
  return make_bow_corpus(docs, vocab);
}

std::string sidecar_for(const std::string& tbem) {
  return fs::path(tbem).replace_extension(".json").string();
}

std::vector<CsvRow> read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  auto rows = read_csv(in);
  if (rows.empty()) throw std::runtime_error(path + ": empty file");
  return rows;
}

std::size_t column(const CsvRow& header, const std::string& name,
                   const std::string& path) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::runtime_error(path + ": missing column '" + name + "'");
}

int cmd_preprocess(const std::string& in_path, const Common& c) {
  const PipelineConfig cfg = effective_config(c);
  const auto raw = read_raw_documents(in_path);
  std::vector<ProcessedDocument> kept;
  std::size_t dropped = 0;
  for (auto& d : preprocess_all(raw)) {
    if (d.empty()) {
      ++dropped;
    } else {
      kept.push_back(std::move(d));
    }
  }
  const Vocabulary vocab =
      build_vocabulary(kept, cfg.min_df, cfg.max_df_fraction);
  const fs::path dir(c.out);
  fs::create_directories(dir);
  std::ostringstream jsonl;
  write_processed_jsonl(jsonl, kept);
  write_file(dir / "processed.jsonl", jsonl.str());
  write_file(dir / "vocab.json", dump_json(vocabulary_to_json(vocab), 2) + "\n");
  std::cout << "documents " << kept.size() << ", dropped empty " << dropped
            << ", vocabulary " << vocab.size() << "\n";
  return 0;
}

int cmd_lda(const std::string& in_dir, std::size_t k, const Common& c) {
  PipelineConfig cfg = effective_config(c);
  if (k > 0) cfg.lda.k = k;
  const BowCorpus corpus = load_bow(in_dir);
  const LdaModel model = train_lda(corpus, cfg.lda);
  const fs::path dir(c.out);
  fs::create_directories(dir);
  write_file(dir / "lda.json", dump_json(lda_to_json(model)) + "\n");
  Json omega;
  omega["ids"] = corpus.ids();
  omega["theta"] = matrix_to_json(model.theta);
  write_file(dir / "omega.json", dump_json(omega) + "\n");
  for (std::size_t t = 0; t < model.num_topics(); ++t) {
    std::cout << "topic " << t << ":";
    for (std::size_t w : top_words(model, t, cfg.top_n)) {
      std::cout << ' ' << corpus.vocabulary().term(w);
    }
    std::cout << "\n";
  }
  return 0;
}

int cmd_embed_fetch(const std::string& in_path, const std::string& endpoint,
                    std::size_t batch, const std::string& out) {
  const std::string url = endpoint.empty() ? default_embed_endpoint() : endpoint;
  if (url.empty()) {
    throw std::runtime_error(
        "no endpoint: pass --endpoint or set TBERT_EMBED_ENDPOINT");
  }
  const auto raw = read_raw_documents(in_path);
  std::vector<std::string> ids;
  std::vector<std::string> texts;
  for (const auto& d : raw) {
    ids.push_back(d.id);
    texts.push_back(d.text);
  }
  const EmbeddingMatrix m = fetch_embeddings(url, texts, batch, ids);
  if (fs::path(out).has_parent_path()) {
    fs::create_directories(fs::path(out).parent_path());
  }
  write_tbem(out, m);
  std::cout << "embedded " << m.rows() << " texts, dim " << m.dim << "\n";
  return 0;
}

int cmd_embed_convert(const std::string& in, const std::string& out) {
  const EmbeddingMatrix m = load_embeddings(in);
  if (fs::path(out).extension() == ".jsonl") {
    std::ostringstream s;
    write_embeddings_jsonl(s, m);
    write_file(out, s.str());
  } else {
    write_tbem(out, m);
  }
  return 0;
}

int cmd_fuse(const std::string& omega_path, const std::string& emb_path,
             const Common& c, double gamma, bool raw) {
  PipelineConfig cfg = effective_config(c);
  if (gamma >= 0.0) cfg.fusion.gamma = gamma;
  if (raw) cfg.fusion.normalize_embeddings = false;
  const Json omega = parse_json_file(omega_path);
  const auto ids = omega.at("ids").get<std::vector<std::string>>();
  const Matrix theta = matrix_from_json(omega.at("theta"));
  const EmbeddingMatrix h = align_embeddings(load_embeddings(emb_path), ids);
  const FusedMatrix fused = fuse(theta, h, cfg.fusion);
  write_fused(c.out, sidecar_for(c.out), fused);
  return 0;
}

int cmd_ae_train(const std::string& in, const Common& c) {
  const PipelineConfig cfg = effective_config(c);
  const FusedMatrix fused = read_fused(in, sidecar_for(in));
  const AeModel model = train_autoencoder(fused, cfg.autoencoder);
  const fs::path dir(c.out);
  fs::create_directories(dir);
  write_file(dir / "ae.json", dump_json(ae_to_json(model)) + "\n");
  write_file(dir / "ae_loss.csv", loss_history_csv(model));
  write_tbem((dir / "latent.tbem").string(),
             EmbeddingMatrix::from_matrix(fused.ids, encode(model, fused.data)));
  std::cout << "final loss " << format_double(model.train_loss.back()) << "\n";
  return 0;
}

int cmd_cluster(const std::string& in, std::size_t k,
                const std::string& corpus_dir, const Common& c) {
  PipelineConfig cfg = effective_config(c);
  KMeansConfig km = cfg.kmeans;
  km.k = k > 0 ? k : cfg.lda.k;
  const EmbeddingMatrix latent = load_embeddings(in);
  const ClusterModel model = kmeans(latent.to_matrix(), km);
  const fs::path dir(c.out);
  fs::create_directories(dir);
  {
    std::ostringstream s;
    write_assignments_csv(s, latent.ids, model.assignments);
    write_file(dir / "assignments.csv", s.str());
  }
  Json summary;
  summary["k"] = km.k;
  summary["inertia"] = model.inertia;
  summary["iterations"] = model.iterations;
  summary["best_restart"] = model.best_restart;
  summary["centroids"] = matrix_to_json(model.centroids);
  write_file(dir / "clusters.json", dump_json(summary) + "\n");
  if (!corpus_dir.empty()) {
    const BowCorpus corpus = load_bow(corpus_dir);
    if (corpus.ids() != latent.ids) {
      throw std::runtime_error("cluster: corpus and latent ids differ");
    }
    const auto top = cluster_top_terms(model.assignments, km.k, corpus, cfg.top_n);
    write_file(dir / "wordcloud_freqs.json", dump_json(wordcloud_json(top), 2) + "\n");
  }
  return 0;
}

int cmd_sweep(const Common& c) {
  PipelineConfig cfg = effective_config(c);
  if (!c.out.empty()) cfg.paths.out_dir = c.out;
  const SweepReport report = sweep_k(cfg);
  std::printf("%4s %10s %10s %10s %10s\n", "k", "lda_cv", "fused_cv",
              "emb_cv", "silhouette");
  for (const auto& r : report.rows) {
    if (!r.ok) {
      std::printf("%4zu failed: %s\n", r.k, r.error.c_str());
      continue;
    }
    std::printf("%4zu %10.4f %10.4f %10.4f %10.4f\n", r.k, r.lda_cv, r.fused_cv,
                r.embedding_cv, r.latent_silhouette);
  }
  if (!report.selected_k) {
    std::cerr << "error: every k failed\n";
    return 1;
  }
  std::printf("selected k = %zu (%s)\n", *report.selected_k, report.rule.c_str());
  return 0;
}

int cmd_sentiment_train(const std::string& emb, const std::string& labels,
                        const std::string& label_map, const Common& c) {
  const PipelineConfig cfg = effective_config(c);
  const auto rows = read_labels_csv(labels);
  const auto map = label_map.empty() ? std::map<std::string, std::string>{}
                                     : read_label_map(label_map);
  const LabeledSet set = make_labeled_set(load_embeddings(emb), rows, map);
  const SentimentModel model = train_classifier(set, cfg.sentiment);
  write_file(c.out, dump_json(sentiment_to_json(model)) + "\n");
  const SentimentEvaluation ev = evaluate(model, set);
  std::cout << "training accuracy " << format_double(ev.accuracy)
            << ", weighted F1 " << format_double(ev.weighted_f1) << "\n";
  return 0;
}

int cmd_sentiment_predict(const std::string& model_path, const std::string& emb,
                          const std::string& out) {
  const SentimentModel model = sentiment_from_json(parse_json_file(model_path));
  const EmbeddingMatrix m = load_embeddings(emb);
  const auto preds = predict(model, m);
  std::ostringstream s;
  write_predictions_csv(s, m.ids, preds);
  write_file(out, s.str());
  return 0;
}

int cmd_report(const std::string& assignments_path,
               const std::string& sentiment_path, const std::string& out) {
  const auto a = read_csv_file(assignments_path);
  const std::size_t a_id = column(a[0], "id", assignments_path);
  const std::size_t a_cluster = column(a[0], "cluster", assignments_path);
  std::vector<std::string> cluster_ids;
  std::vector<std::size_t> clusters;
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (a[i].size() <= std::max(a_id, a_cluster)) continue;
    cluster_ids.push_back(a[i][a_id]);
    clusters.push_back(std::stoul(a[i][a_cluster]));
  }
  const auto s = read_csv_file(sentiment_path);
  const std::size_t s_id = column(s[0], "id", sentiment_path);
  const std::size_t s_label = column(s[0], "sentiment", sentiment_path);
  std::vector<std::string> sentiment_ids;
  std::vector<std::size_t> sentiments;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i].size() <= std::max(s_id, s_label)) continue;
    const auto c = sentiment_index(s[i][s_label]);
    if (!c) throw std::runtime_error("unknown sentiment '" + s[i][s_label] + "'");
    sentiment_ids.push_back(s[i][s_id]);
    sentiments.push_back(*c);
  }
  const JoinedReport joined =
      join_topics_sentiments(cluster_ids, clusters, sentiment_ids, sentiments);
  Json j;
  j["documents"] = joined.ids.size();
  j["sentiment_by_cluster"] = joined_to_json(joined);
  write_file(out, dump_json(j, 2) + "\n");
  return 0;
}

int cmd_run(const Common& c) {
  PipelineConfig cfg = effective_config(c);
  if (!c.out.empty()) cfg.paths.out_dir = c.out;
  const RunSummary s = run_pipeline(cfg);
  std::cout << "documents " << s.documents << " (dropped " << s.dropped
            << ")\n"
            << "C_V lda " << format_double(s.lda_cv) << ", fused "
            << format_double(s.fused_cv) << "\n"
            << "silhouette fused latent " << format_double(s.latent_silhouette)
            << ", raw embedding " << format_double(s.embedding_silhouette)
            << "\n";
  for (const auto& p : s.artifacts) std::cout << "wrote " << p << "\n";
  return 0;
}

int cmd_synth(const std::string& synth_config, const Common& c,
              std::size_t docs, std::size_t topics) {
  SynthConfig sc = synth_config.empty()
                       ? SynthConfig{}
                       : synth_config_from_json(parse_json_file(synth_config));
  if (c.seed_opt->count() > 0) sc.seed = c.seed;
  if (docs > 0) sc.num_docs = docs;
  if (topics > 0) sc.num_topics = topics;
  const SynthCorpus corpus = generate_synthetic(sc);
  write_synthetic(corpus, c.out);

  PipelineConfig cfg = fixture_pipeline_config(sc);
  cfg.paths.corpus = "corpus.csv";
  cfg.paths.embeddings = "embeddings.tbem";
  cfg.paths.labels = "labels.csv";
  cfg.paths.out_dir = "out";
  const fs::path dir(c.out);
  write_file(dir / "config.json", dump_json(config_to_json(cfg), 2) + "\n");
  write_file(dir / "synth.json", dump_json(synth_config_to_json(sc), 2) + "\n");
  std::cout << "wrote " << corpus.docs.size() << " documents to " << c.out
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic modeling with fused LDA and sentence-embedding features"};
  app.require_subcommand(1);

  Common common;
  std::string in_path;
  std::string aux_path;
  std::string aux_path2;
  std::size_t k = 0;
  std::size_t batch = 64;
  double gamma = -1.0;
  bool raw = false;
  std::size_t docs = 0;

  auto* preprocess = app.add_subcommand("preprocess", "Clean and tokenize a corpus");
  preprocess->add_option("--in", in_path, "Corpus CSV or JSONL")->required()
      ->check(CLI::ExistingFile);
  add_common(preprocess, common);

  auto* lda = app.add_subcommand("lda", "Fit LDA on a preprocessed corpus");
  lda->add_option("--in", in_path, "Directory from `preprocess`")->required()
      ->check(CLI::ExistingDirectory);
  lda->add_option("--k", k, "Number of topics");
  add_common(lda, common);

  auto* fetch = app.add_subcommand("embed-fetch", "Fetch embeddings over HTTP");
  fetch->add_option("--in", in_path, "Corpus CSV or JSONL")->required()
      ->check(CLI::ExistingFile);
  fetch->add_option("--endpoint", aux_path, "Server URL (default $TBERT_EMBED_ENDPOINT)");
  fetch->add_option("--batch-size", batch, "Texts per request")
      ->check(CLI::PositiveNumber);
  add_common(fetch, common);

  auto* convert = app.add_subcommand("embed-convert", "Convert between TBEM and JSONL");
  convert->add_option("--in", in_path, "Embedding file")->required()
      ->check(CLI::ExistingFile);
  add_common(convert, common);

  auto* fuse_cmd = app.add_subcommand("fuse", "Concatenate scaled topic vectors and embeddings");
  fuse_cmd->add_option("--omega", in_path, "omega.json from `lda`")->required()
      ->check(CLI::ExistingFile);
  fuse_cmd->add_option("--embeddings", aux_path, "Embedding file")->required()
      ->check(CLI::ExistingFile);
  fuse_cmd->add_option("--gamma", gamma, "Topic weight");
  fuse_cmd->add_flag("--raw", raw, "Do not L2-normalize embeddings");
  add_common(fuse_cmd, common);

  auto* ae = app.add_subcommand("ae-train", "Train the autoencoder on fused vectors");
  ae->add_option("--in", in_path, "Fused TBEM file")->required()
      ->check(CLI::ExistingFile);
  add_common(ae, common);

  auto* cluster = app.add_subcommand("cluster", "k-means over latent vectors");
  cluster->add_option("--in", in_path, "Latent TBEM file")->required()
      ->check(CLI::ExistingFile);
  cluster->add_option("--k", k, "Number of clusters");
  cluster->add_option("--corpus", aux_path, "Directory from `preprocess` for top terms")
      ->check(CLI::ExistingDirectory);
  add_common(cluster, common);

  auto* sweep = app.add_subcommand("sweep", "Select k by the coherence cut-off");
  add_common(sweep, common, false);

  auto* strain = app.add_subcommand("sentiment-train", "Train the sentiment head");
  strain->add_option("--embeddings", in_path, "Embedding file")->required()
      ->check(CLI::ExistingFile);
  strain->add_option("--labels", aux_path, "id,label CSV")->required()
      ->check(CLI::ExistingFile);
  strain->add_option("--label-map", aux_path2, "Raw label to class JSON")
      ->check(CLI::ExistingFile);
  add_common(strain, common);

  auto* spredict = app.add_subcommand("sentiment-predict", "Predict sentiments");
  spredict->add_option("--model", in_path, "Model JSON")->required()
      ->check(CLI::ExistingFile);
  spredict->add_option("--embeddings", aux_path, "Embedding file")->required()
      ->check(CLI::ExistingFile);
  add_common(spredict, common);

  auto* report = app.add_subcommand("report", "Join clusters with sentiments");
  report->add_option("--assignments", in_path, "assignments.csv")->required()
      ->check(CLI::ExistingFile);
  report->add_option("--sentiment", aux_path, "Sentiment CSV")->required()
      ->check(CLI::ExistingFile);
  add_common(report, common);

  auto* run = app.add_subcommand("run", "Run the full pipeline");
  add_common(run, common, false);

  auto* synth = app.add_subcommand("synth", "Write the synthetic fixture");
  synth->add_option("--synth-config", aux_path, "Generator settings JSON")
      ->check(CLI::ExistingFile);
  synth->add_option("--docs", docs, "Number of documents");
  synth->add_option("--topics", k, "Number of planted topics");
  add_common(synth, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*preprocess) return cmd_preprocess(in_path, common);
    if (*lda) return cmd_lda(in_path, k, common);
    if (*fetch) return cmd_embed_fetch(in_path, aux_path, batch, common.out);
    if (*convert) return cmd_embed_convert(in_path, common.out);
    if (*fuse_cmd) return cmd_fuse(in_path, aux_path, common, gamma, raw);
    if (*ae) return cmd_ae_train(in_path, common);
    if (*cluster) return cmd_cluster(in_path, k, aux_path, common);
    if (*sweep) return cmd_sweep(common);
    if (*strain) return cmd_sentiment_train(in_path, aux_path, aux_path2, common);
    if (*spredict) return cmd_sentiment_predict(in_path, aux_path, common.out);
    if (*report) return cmd_report(in_path, aux_path, common.out);
    if (*run) return cmd_run(common);
    if (*synth) return cmd_synth(aux_path, common, docs, k);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
