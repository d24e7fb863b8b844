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

#include "tbert/pipeline.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "tbert/csv.h"
#include "tbert/metrics.h"

namespace tbert {

namespace fs = std::filesystem;

void PipelineConfig::set_seed(std::uint64_t seed) {
  lda.seed = seed;
  autoencoder.seed = seed;
  kmeans.seed = seed;
  sentiment.seed = seed;
}

void PipelineConfig::validate() const {
  lda.validate();
  fusion.validate();
  autoencoder.validate();
  kmeans.validate();
  sentiment.validate();
  if (max_df_fraction <= 0.0 || max_df_fraction > 1.0) {
    throw std::invalid_argument("preprocess: max_df_fraction must be in (0, 1]");
  }
  if (top_n < 2) throw std::invalid_argument("coherence: top_n must be >= 2");
  if (cv_window < 1) {
    throw std::invalid_argument("coherence: cv_window must be >= 1");
  }
  for (std::size_t k : k_sweep) {
    if (k < 1) throw std::invalid_argument("k_sweep: values must be >= 1");
  }
}

namespace {

void check_keys(const Json& j, const std::string& section,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) {
    throw std::invalid_argument("config: " + section + " must be an object");
  }
  for (const auto& [key, value] : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return key == a; });
    if (!known) {
      throw std::invalid_argument("config: unknown key '" + key + "' in " +
                                  section);
    }
  }
}

template <typename T>
void read_field(const Json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

const Json& section(const Json& j, const char* name) {
  static const Json kEmpty = Json::object();
  return j.contains(name) ? j.at(name) : kEmpty;
}

}  // namespace

PipelineConfig fixture_pipeline_config(const SynthConfig& synth) {
  PipelineConfig c;
  c.set_seed(synth.seed);
  c.lda.k = synth.num_topics;
  c.fusion.normalize_embeddings = false;
  return c;
}

Json config_to_json(const PipelineConfig& c) {
  Json j;
  j["paths"] = {{"corpus", c.paths.corpus},
                {"embeddings", c.paths.embeddings},
                {"labels", c.paths.labels},
                {"label_map", c.paths.label_map},
                {"sentiment_model", c.paths.sentiment_model},
                {"out_dir", c.paths.out_dir}};
  j["preprocess"] = {{"min_df", c.min_df},
                     {"max_df_fraction", c.max_df_fraction}};
  j["lda"] = {{"k", c.lda.k},
              {"alpha", c.lda.alpha},
              {"beta", c.lda.beta},
              {"iterations", c.lda.iterations},
              {"burn_in", c.lda.burn_in},
              {"seed", c.lda.seed},
              {"average_samples", c.lda.average_samples}};
  j["fusion"] = {{"gamma", c.fusion.gamma},
                 {"normalize_embeddings", c.fusion.normalize_embeddings}};
  const auto& a = c.autoencoder;
  j["autoencoder"] = {{"latent_dim", a.latent_dim},
                      {"epochs", a.epochs},
                      {"batch_size", a.batch_size},
                      {"learning_rate", a.learning_rate},
                      {"l1", a.l1},
                      {"l2", a.l2},
                      {"dropout", a.dropout},
                      {"seed", a.seed},
                      {"allow_expansion", a.allow_expansion},
                      {"validation_split", a.validation_split}};
  j["kmeans"] = {{"max_iters", c.kmeans.max_iters},
                 {"n_init", c.kmeans.n_init},
                 {"seed", c.kmeans.seed},
                 {"tol", c.kmeans.tol}};
  const auto& s = c.sentiment;
  j["sentiment"] = {{"epochs", s.epochs},
                    {"batch_size", s.batch_size},
                    {"learning_rate", s.learning_rate},
                    {"weight_decay", s.weight_decay},
                    {"epsilon", s.epsilon},
                    {"seed", s.seed},
                    {"full_batch", s.full_batch}};
  j["coherence"] = {{"top_n", c.top_n}, {"cv_window", c.cv_window}};
  j["k_sweep"] = c.k_sweep;
  return j;
}

PipelineConfig config_from_json(const Json& j) {
  check_keys(j, "config",
             {"paths", "preprocess", "lda", "fusion", "autoencoder", "kmeans",
              "sentiment", "coherence", "k_sweep"});
  PipelineConfig c;

  const Json& paths = section(j, "paths");
  check_keys(paths, "paths",
             {"corpus", "embeddings", "labels", "label_map", "sentiment_model",
              "out_dir"});
  read_field(paths, "corpus", c.paths.corpus);
  read_field(paths, "embeddings", c.paths.embeddings);
  read_field(paths, "labels", c.paths.labels);
  read_field(paths, "label_map", c.paths.label_map);
  read_field(paths, "sentiment_model", c.paths.sentiment_model);
  read_field(paths, "out_dir", c.paths.out_dir);

  const Json& pre = section(j, "preprocess");
  check_keys(pre, "preprocess", {"min_df", "max_df_fraction"});
  read_field(pre, "min_df", c.min_df);
  read_field(pre, "max_df_fraction", c.max_df_fraction);

  const Json& lda = section(j, "lda");
  check_keys(lda, "lda",
             {"k", "alpha", "beta", "iterations", "burn_in", "seed",
              "average_samples"});
  read_field(lda, "k", c.lda.k);
  read_field(lda, "alpha", c.lda.alpha);
  read_field(lda, "beta", c.lda.beta);
  read_field(lda, "iterations", c.lda.iterations);
  read_field(lda, "burn_in", c.lda.burn_in);
  read_field(lda, "seed", c.lda.seed);
  read_field(lda, "average_samples", c.lda.average_samples);

  const Json& fusion = section(j, "fusion");
  check_keys(fusion, "fusion", {"gamma", "normalize_embeddings"});
  read_field(fusion, "gamma", c.fusion.gamma);
  read_field(fusion, "normalize_embeddings", c.fusion.normalize_embeddings);

  const Json& ae = section(j, "autoencoder");
  check_keys(ae, "autoencoder",
             {"latent_dim", "epochs", "batch_size", "learning_rate", "l1", "l2",
              "dropout", "seed", "allow_expansion", "validation_split"});
  auto& a = c.autoencoder;
  read_field(ae, "latent_dim", a.latent_dim);
  read_field(ae, "epochs", a.epochs);
  read_field(ae, "batch_size", a.batch_size);
  read_field(ae, "learning_rate", a.learning_rate);
  read_field(ae, "l1", a.l1);
  read_field(ae, "l2", a.l2);
  read_field(ae, "dropout", a.dropout);
  read_field(ae, "seed", a.seed);
  read_field(ae, "allow_expansion", a.allow_expansion);
  read_field(ae, "validation_split", a.validation_split);

  const Json& km = section(j, "kmeans");
  check_keys(km, "kmeans", {"max_iters", "n_init", "seed", "tol"});
  read_field(km, "max_iters", c.kmeans.max_iters);
  read_field(km, "n_init", c.kmeans.n_init);
  read_field(km, "seed", c.kmeans.seed);
  read_field(km, "tol", c.kmeans.tol);

  const Json& st = section(j, "sentiment");
  check_keys(st, "sentiment",
             {"epochs", "batch_size", "learning_rate", "weight_decay",
              "epsilon", "seed", "full_batch"});
  auto& s = c.sentiment;
  read_field(st, "epochs", s.epochs);
  read_field(st, "batch_size", s.batch_size);
  read_field(st, "learning_rate", s.learning_rate);
  read_field(st, "weight_decay", s.weight_decay);
  read_field(st, "epsilon", s.epsilon);
  read_field(st, "seed", s.seed);
  read_field(st, "full_batch", s.full_batch);

  const Json& coh = section(j, "coherence");
  check_keys(coh, "coherence", {"top_n", "cv_window"});
  read_field(coh, "top_n", c.top_n);
  read_field(coh, "cv_window", c.cv_window);

  read_field(j, "k_sweep", c.k_sweep);
  c.kmeans.k = c.lda.k;
  c.validate();
  return c;
}

PipelineConfig load_config(const std::string& path) {
  PipelineConfig c = config_from_json(parse_json_file(path));
  // Relative paths are taken relative to the config file.
  const fs::path base = fs::path(path).parent_path();
  for (std::string* p :
       {&c.paths.corpus, &c.paths.embeddings, &c.paths.labels,
        &c.paths.label_map, &c.paths.sentiment_model, &c.paths.out_dir}) {
    if (!p->empty() && fs::path(*p).is_relative()) {
      *p = (base / *p).lexically_normal().string();
    }
  }
  return c;
}

PreparedInputs prepare_inputs(std::span<const RawDocument> raw,
                              const EmbeddingMatrix& embeddings,
                              const PipelineConfig& config) {
  PreparedInputs in;
  try {
    for (auto& doc : preprocess_all(raw)) {
      if (doc.empty()) {
        ++in.dropped;
      } else {
        in.docs.push_back(std::move(doc));
      }
    }
    if (in.docs.empty()) {
      throw std::runtime_error("no document has tokens left after cleaning");
    }
    const Vocabulary vocab =
        build_vocabulary(in.docs, config.min_df, config.max_df_fraction);
    if (vocab.size() == 0) {
      throw std::runtime_error("vocabulary is empty after df filtering");
    }
    in.corpus = make_bow_corpus(in.docs, vocab);
    for (const auto& doc : in.docs) in.sequences.push_back(token_ids(doc, vocab));
  } catch (const std::exception& e) {
    throw StageError("preprocess", e.what());
  }
  try {
    in.embeddings = align_embeddings(embeddings, in.corpus.ids());
    in.embeddings.validate();
  } catch (const std::exception& e) {
    throw StageError("embeddings", e.what());
  }
  return in;
}

PreparedInputs prepare_inputs(const PipelineConfig& config) {
  std::vector<RawDocument> raw;
  try {
    if (config.paths.corpus.empty()) {
      throw std::runtime_error("no corpus path configured");
    }
    raw = read_raw_documents(config.paths.corpus);
  } catch (const std::exception& e) {
    throw StageError("corpus", e.what());
  }
  EmbeddingMatrix embeddings;
  try {
    if (config.paths.embeddings.empty()) {
      throw std::runtime_error("no embeddings path configured");
    }
    embeddings = load_embeddings(config.paths.embeddings);
  } catch (const std::exception& e) {
    throw StageError("embeddings", e.what());
  }
  return prepare_inputs(raw, embeddings, config);
}

namespace {

double finite_mean(std::span<const double> values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    if (std::isfinite(v)) {
      sum += v;
      ++n;
    }
  }
  return n == 0 ? std::numeric_limits<double>::quiet_NaN()
                : sum / static_cast<double>(n);
}

Matrix columns(const Matrix& m, std::size_t first, std::size_t count) {
  Matrix out(m.rows(), count);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto src = m.row(r).subspan(first, count);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

double safe_silhouette(const Matrix& data,
                       std::span<const std::size_t> assignments) {
  try {
    return silhouette(data, assignments);
  } catch (const std::invalid_argument&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

CoherenceSummary score_topics(
    std::span<const std::vector<std::size_t>> topics,
    std::span<const std::vector<std::size_t>> sequences,
    std::size_t cv_window) {
  const auto terms = collect_terms(topics);
  const CooccurrenceStats windows(sequences, terms, cv_window);
  const CooccurrenceStats documents(sequences, terms, 0);
  CoherenceSummary out;
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  for (const auto& topic : topics) {
    if (topic.size() < 2) {
      out.cv.push_back(kNaN);
      out.umass.push_back(kNaN);
      continue;
    }
    out.cv.push_back(cv_coherence(topic, windows));
    try {
      out.umass.push_back(umass_coherence(topic, documents));
    } catch (const std::invalid_argument&) {
      out.umass.push_back(kNaN);
    }
  }
  out.cv_mean = finite_mean(out.cv);
  out.umass_mean = finite_mean(out.umass);
  return out;
}

TopicAnalysis analyze_topics(const PreparedInputs& inputs,
                             const PipelineConfig& config, std::size_t k) {
  TopicAnalysis a;
  a.k = k;
  LdaHyperParams lda_params = config.lda;
  lda_params.k = k;
  try {
    a.lda = train_lda(inputs.corpus, lda_params);
  } catch (const std::exception& e) {
    throw StageError("lda", e.what());
  }
  try {
    a.fused = fuse(a.lda.theta, inputs.embeddings, config.fusion);
  } catch (const std::exception& e) {
    throw StageError("fusion", e.what());
  }
  try {
    a.autoencoder = train_autoencoder(a.fused, config.autoencoder);
    a.latent = encode(a.autoencoder, a.fused.data);
  } catch (const std::exception& e) {
    throw StageError("autoencoder", e.what());
  }
  const Matrix h = columns(a.fused.data, a.fused.k, a.fused.d);
  try {
    KMeansConfig km = config.kmeans;
    km.k = k;
    a.clusters = kmeans(a.latent, km);
    a.embedding_clusters = kmeans(h, km);
  } catch (const std::exception& e) {
    throw StageError("clustering", e.what());
  }
  try {
    for (std::size_t t = 0; t < k; ++t) {
      a.lda_top.push_back(top_words(a.lda, t, config.top_n));
    }
    a.cluster_top = cluster_top_terms(a.clusters.assignments, k, inputs.corpus,
                                      config.top_n);
    a.embedding_top = cluster_top_terms(a.embedding_clusters.assignments, k,
                                        inputs.corpus, config.top_n);
    a.lda_coherence = score_topics(a.lda_top, inputs.sequences, config.cv_window);
    a.fused_coherence = score_topics(term_ids(a.cluster_top), inputs.sequences,
                                     config.cv_window);
    a.embedding_coherence = score_topics(term_ids(a.embedding_top),
                                         inputs.sequences, config.cv_window);
    a.latent_silhouette = safe_silhouette(a.latent, a.clusters.assignments);
    a.embedding_silhouette =
        safe_silhouette(h, a.embedding_clusters.assignments);
  } catch (const std::exception& e) {
    throw StageError("metrics", e.what());
  }
  return a;
}

std::size_t select_cutoff(
    std::span<const std::pair<std::size_t, double>> curve) {
  if (curve.empty()) throw std::invalid_argument("cutoff: empty curve");
  std::vector<std::pair<std::size_t, double>> sorted(curve.begin(),
                                                     curve.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    if (sorted[i + 1].second <= sorted[i].second) return sorted[i].first;
  }
  return sorted.back().first;
}

SweepReport sweep_k(const PreparedInputs& inputs,
                    const PipelineConfig& config) {
  if (config.k_sweep.empty()) {
    throw std::invalid_argument("sweep: k_sweep is empty");
  }
  const std::set<std::size_t> grid(config.k_sweep.begin(),
                                   config.k_sweep.end());
  SweepReport report;
  std::vector<std::pair<std::size_t, double>> curve;
  for (std::size_t k : grid) {
    SweepRow row;
    row.k = k;
    try {
      const TopicAnalysis a = analyze_topics(inputs, config, k);
      row.lda_cv = a.lda_coherence.cv_mean;
      row.fused_cv = a.fused_coherence.cv_mean;
      row.embedding_cv = a.embedding_coherence.cv_mean;
      row.lda_umass = a.lda_coherence.umass_mean;
      row.fused_umass = a.fused_coherence.umass_mean;
      row.latent_silhouette = a.latent_silhouette;
      row.ok = std::isfinite(row.fused_cv);
      if (!row.ok) row.error = "fused coherence undefined";
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    if (row.ok) curve.emplace_back(k, row.fused_cv);
    report.rows.push_back(std::move(row));
  }
  if (!curve.empty()) report.selected_k = select_cutoff(curve);
  return report;
}

Json sweep_to_json(const SweepReport& report) {
  Json j;
  j["rule"] = report.rule;
  j["selected_k"] =
      report.selected_k ? Json(*report.selected_k) : Json(nullptr);
  j["rows"] = Json::array();
  for (const auto& r : report.rows) {
    Json row;
    row["k"] = r.k;
    row["ok"] = r.ok;
    if (!r.ok) row["error"] = r.error;
    row["lda_cv"] = r.lda_cv;
    row["fused_cv"] = r.fused_cv;
    row["embedding_cv"] = r.embedding_cv;
    row["lda_umass"] = r.lda_umass;
    row["fused_umass"] = r.fused_umass;
    row["latent_silhouette"] = r.latent_silhouette;
    j["rows"].push_back(std::move(row));
  }
  return j;
}

namespace {

std::string sweep_csv(const SweepReport& report) {
  std::ostringstream out;
  write_csv_row(out, {"k", "lda_cv", "fused_cv", "embedding_cv", "lda_umass",
                      "fused_umass", "latent_silhouette", "error"});
  for (const auto& r : report.rows) {
    write_csv_row(out, {std::to_string(r.k), format_double(r.lda_cv),
                        format_double(r.fused_cv),
                        format_double(r.embedding_cv),
                        format_double(r.lda_umass),
                        format_double(r.fused_umass),
                        format_double(r.latent_silhouette), r.error});
  }
  return out.str();
}

}  // namespace

SweepReport sweep_k(const PipelineConfig& config) {
  config.validate();
  const PreparedInputs inputs = prepare_inputs(config);
  SweepReport report = sweep_k(inputs, config);
  if (!config.paths.out_dir.empty()) {
    const fs::path dir(config.paths.out_dir);
    fs::create_directories(dir);
    Json j = sweep_to_json(report);
    j["config"] = config_to_json(config);
    write_text_file((dir / "sweep.json").string(), dump_json(j, 2) + "\n");
    write_text_file((dir / "sweep.csv").string(), sweep_csv(report));
  }
  return report;
}

JoinedReport join_topics_sentiments(std::span<const std::string> cluster_ids,
                                    std::span<const std::size_t> assignments,
                                    std::span<const std::string> sentiment_ids,
                                    std::span<const std::size_t> sentiments) {
  if (cluster_ids.size() != assignments.size() ||
      sentiment_ids.size() != sentiments.size()) {
    throw std::invalid_argument("join: id and value counts differ");
  }
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < sentiment_ids.size(); ++i) {
    if (sentiments[i] >= kNumSentiments) {
      throw std::invalid_argument("join: sentiment index out of range");
    }
    by_id[sentiment_ids[i]] = sentiments[i];
  }
  std::vector<std::string> missing;
  std::unordered_set<std::string> cluster_set(cluster_ids.begin(),
                                              cluster_ids.end());
  for (const auto& id : cluster_ids) {
    if (!by_id.contains(id)) missing.push_back(id);
  }
  for (const auto& id : sentiment_ids) {
    if (!cluster_set.contains(id)) missing.push_back(id);
  }
  if (cluster_ids.empty() || !missing.empty()) {
    std::string msg = "join: id sets differ";
    if (cluster_ids.empty()) msg = "join: no documents to join";
    const std::size_t shown = std::min<std::size_t>(missing.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) {
      msg += (i == 0 ? "; offending ids: " : ", ") + missing[i];
    }
    if (missing.size() > shown) {
      msg += " (+" + std::to_string(missing.size() - shown) + " more)";
    }
    throw std::invalid_argument(msg);
  }

  JoinedReport out;
  std::size_t k = 0;
  for (std::size_t a : assignments) k = std::max(k, a + 1);
  out.clusters.resize(k);
  for (std::size_t c = 0; c < k; ++c) out.clusters[c].cluster = c;
  for (std::size_t i = 0; i < cluster_ids.size(); ++i) {
    const std::size_t s = by_id.at(cluster_ids[i]);
    ++out.clusters[assignments[i]].counts[s];
    out.ids.push_back(cluster_ids[i]);
    out.assignments.push_back(assignments[i]);
    out.sentiments.push_back(s);
  }
  for (auto& c : out.clusters) {
    std::size_t total = 0;
    for (std::size_t n : c.counts) total += n;
    for (std::size_t s = 0; s < kNumSentiments; ++s) {
      c.fractions[s] = total == 0 ? 0.0
                                  : static_cast<double>(c.counts[s]) /
                                        static_cast<double>(total);
    }
  }
  return out;
}

Json joined_to_json(const JoinedReport& report) {
  Json clusters = Json::array();
  for (const auto& c : report.clusters) {
    Json entry;
    entry["cluster"] = c.cluster;
    Json counts;
    Json fractions;
    for (std::size_t s = 0; s < kNumSentiments; ++s) {
      counts[std::string(kSentimentNames[s])] = c.counts[s];
      fractions[std::string(kSentimentNames[s])] = c.fractions[s];
    }
    entry["counts"] = std::move(counts);
    entry["fractions"] = std::move(fractions);
    clusters.push_back(std::move(entry));
  }
  return clusters;
}

namespace {

Json coherence_json(const CoherenceSummary& s) {
  return Json{{"cv", s.cv},
              {"cv_mean", s.cv_mean},
              {"umass", s.umass},
              {"umass_mean", s.umass_mean}};
}

Json topics_json(const TopicAnalysis& a, const BowCorpus& corpus) {
  Json j;
  j["k"] = a.k;
  Json lda = Json::array();
  for (std::size_t t = 0; t < a.lda_top.size(); ++t) {
    Json words = Json::array();
    for (std::size_t w : a.lda_top[t]) {
      words.push_back(Json{{"term", corpus.vocabulary().term(w)},
                           {"weight", a.lda.phi(t, w)}});
    }
    lda.push_back(Json{{"topic", t},
                       {"words", std::move(words)},
                       {"cv", a.lda_coherence.cv[t]},
                       {"umass", a.lda_coherence.umass[t]}});
  }
  j["lda_topics"] = std::move(lda);
  std::vector<std::size_t> sizes(a.k, 0);
  for (std::size_t c : a.clusters.assignments) ++sizes[c];
  Json clusters = Json::array();
  for (std::size_t c = 0; c < a.cluster_top.size(); ++c) {
    Json terms = Json::array();
    for (const auto& t : a.cluster_top[c]) {
      terms.push_back(Json{{"term", t.text}, {"count", t.count}});
    }
    clusters.push_back(Json{{"cluster", c},
                            {"size", sizes[c]},
                            {"terms", std::move(terms)},
                            {"cv", a.fused_coherence.cv[c]},
                            {"umass", a.fused_coherence.umass[c]}});
  }
  j["clusters"] = std::move(clusters);
  return j;
}

// Records written files so a failed run can remove them.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(fs::path dir) : dir_(std::move(dir)) {}
  ~ArtifactWriter() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : written_) fs::remove(p, ec);
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    written_.push_back(p);
    write_text_file(p.string(), content);
  }
  void commit() { committed_ = true; }
  std::vector<std::string> paths() const {
    std::vector<std::string> out;
    for (const auto& p : written_) out.push_back(p.string());
    return out;
  }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
  bool committed_ = false;
};

}  // namespace

RunSummary run_pipeline(const PipelineConfig& config) {
  config.validate();
  if (config.paths.out_dir.empty()) {
    throw StageError("config", "no output directory configured");
  }
  if (config.paths.sentiment_model.empty() && config.paths.labels.empty()) {
    throw StageError("config",
                     "sentiment needs paths.sentiment_model or paths.labels");
  }
  const PreparedInputs inputs = prepare_inputs(config);
  const TopicAnalysis a = analyze_topics(inputs, config, config.lda.k);

  SentimentModel head;
  std::optional<SentimentEvaluation> train_eval;
  std::vector<Prediction> predictions;
  try {
    if (!config.paths.sentiment_model.empty()) {
      head = sentiment_from_json(parse_json_file(config.paths.sentiment_model));
    } else {
      const auto labels = read_labels_csv(config.paths.labels);
      const auto map = config.paths.label_map.empty()
                           ? std::map<std::string, std::string>{}
                           : read_label_map(config.paths.label_map);
      const LabeledSet set = make_labeled_set(inputs.embeddings, labels, map);
      head = train_classifier(set, config.sentiment);
      train_eval = evaluate(head, set);
    }
    predictions = predict(head, inputs.embeddings);
  } catch (const std::exception& e) {
    throw StageError("sentiment", e.what());
  }
  std::vector<std::size_t> predicted;
  for (const auto& p : predictions) predicted.push_back(p.label);
  const auto& ids = inputs.corpus.ids();
  const JoinedReport joined =
      join_topics_sentiments(ids, a.clusters.assignments, ids, predicted);

  const fs::path dir(config.paths.out_dir);
  try {
    fs::create_directories(dir);
  } catch (const std::exception& e) {
    throw StageError("output", e.what());
  }
  ArtifactWriter writer(dir);
  try {
    writer.write("topics.json", dump_json(topics_json(a, inputs.corpus), 2) +
                                    "\n");
    {
      std::ostringstream out;
      write_assignments_csv(out, ids, a.clusters.assignments);
      writer.write("assignments.csv", out.str());
    }
    writer.write("wordcloud_freqs.json",
                 dump_json(wordcloud_json(a.cluster_top), 2) + "\n");

    Json metrics;
    metrics["k"] = a.k;
    metrics["coherence"] = {{"lda", coherence_json(a.lda_coherence)},
                            {"fused", coherence_json(a.fused_coherence)},
                            {"embedding", coherence_json(a.embedding_coherence)}};
    metrics["silhouette"] = {{"fused_latent", a.latent_silhouette},
                             {"raw_embedding", a.embedding_silhouette}};
    metrics["kmeans"] = {{"inertia", a.clusters.inertia},
                         {"iterations", a.clusters.iterations},
                         {"best_restart", a.clusters.best_restart}};
    const double final_loss = a.autoencoder.train_loss.back();
    metrics["autoencoder"] = {
        {"initial_loss", a.autoencoder.initial_loss},
        {"final_train_loss", final_loss},
        {"final_val_loss", a.autoencoder.val_loss.empty()
                               ? Json(nullptr)
                               : Json(a.autoencoder.val_loss.back())},
        {"reconstruction_mse", reconstruction_mse(a.autoencoder, a.fused.data)}};
    if (train_eval) {
      Json per_class;
      for (const auto& [c, acc] : train_eval->per_class_accuracy) {
        per_class[std::string(kSentimentNames[c])] = acc;
      }
      metrics["sentiment_training"] = {
          {"accuracy", train_eval->accuracy},
          {"weighted_f1", train_eval->weighted_f1},
          {"per_class_accuracy", std::move(per_class)}};
    }
    writer.write("metrics.json", dump_json(metrics, 2) + "\n");

    {
      std::ostringstream out;
      write_csv_row(out, {"id", "cluster", "sentiment", "p_positive",
                          "p_negative", "p_neutral"});
      for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto& p = predictions[i];
        write_csv_row(out, {ids[i], std::to_string(a.clusters.assignments[i]),
                            std::string(kSentimentNames[p.label]),
                            format_double(p.probabilities[0]),
                            format_double(p.probabilities[1]),
                            format_double(p.probabilities[2])});
      }
      writer.write("sentiment.csv", out.str());
    }
    writer.write("ae_loss.csv", loss_history_csv(a.autoencoder));

    Json report;
    report["config"] = config_to_json(config);
    report["inputs"] = {{"documents", inputs.corpus.num_docs()},
                        {"dropped_empty", inputs.dropped},
                        {"vocab_size", inputs.corpus.vocab_size()},
                        {"tokens", inputs.corpus.total_tokens()},
                        {"embedding_dim", inputs.embeddings.dim}};
    report["seeds"] = {{"lda", config.lda.seed},
                       {"autoencoder", config.autoencoder.seed},
                       {"kmeans", config.kmeans.seed},
                       {"kmeans_best_restart_seed",
                        config.kmeans.seed + a.clusters.best_restart},
                       {"sentiment", config.sentiment.seed}};
    report["sentiment_source"] =
        config.paths.sentiment_model.empty() ? "trained" : "pretrained";
    report["sentiment_by_cluster"] = joined_to_json(joined);
    Json artifacts = Json::array();
    for (const char* name : kRunArtifacts) artifacts.push_back(name);
    artifacts.push_back("ae_loss.csv");
    report["artifacts"] = std::move(artifacts);
    writer.write("report.json", dump_json(report, 2) + "\n");
  } catch (const std::exception& e) {
    throw StageError("output", e.what());
  }
  writer.commit();

  RunSummary summary;
  summary.artifacts = writer.paths();
  summary.documents = inputs.corpus.num_docs();
  summary.dropped = inputs.dropped;
  summary.lda_cv = a.lda_coherence.cv_mean;
  summary.fused_cv = a.fused_coherence.cv_mean;
  summary.latent_silhouette = a.latent_silhouette;
  summary.embedding_silhouette = a.embedding_silhouette;
  return summary;
}

}  // namespace tbert
