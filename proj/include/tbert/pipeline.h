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

#ifndef TBERT_PIPELINE_H_
#define TBERT_PIPELINE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tbert/autoencoder.h"
#include "tbert/clustering.h"
#include "tbert/coherence.h"
#include "tbert/corpus.h"
#include "tbert/embeddings.h"
#include "tbert/fusion.h"
#include "tbert/json_util.h"
#include "tbert/lda.h"
#include "tbert/sentiment.h"
#include "tbert/synth.h"

namespace tbert {

struct PipelinePaths {
  std::string corpus;
  std::string embeddings;
  std::string labels;           // optional id,label CSV for the sentiment head
  std::string label_map;        // optional raw label -> class JSON
  std::string sentiment_model;  // optional pretrained head (JSON)
  std::string out_dir;
};

struct PipelineConfig {
  PipelinePaths paths;
  std::size_t min_df = kDefaultMinDf;
  double max_df_fraction = kDefaultMaxDfFraction;
  LdaHyperParams lda;  // lda.k is also the cluster count
  FusionConfig fusion;
  AeConfig autoencoder;
  KMeansConfig kmeans;  // kmeans.k is ignored in favour of lda.k
  SentimentTrainConfig sentiment;
  std::size_t top_n = kDefaultTopN;
  std::size_t cv_window = kDefaultCvWindow;
  std::vector<std::size_t> k_sweep = {5, 6, 7, 8, 10, 12, 15, 17};

  // Sets every stage seed.
  void set_seed(std::uint64_t seed);
  void validate() const;
};

// Pipeline settings that match a synthetic corpus: one topic per planted
// topic and raw embeddings, since the generator controls their scale.
PipelineConfig fixture_pipeline_config(const SynthConfig& synth);

Json config_to_json(const PipelineConfig& config);
// Missing fields keep their defaults; unknown keys are rejected.
PipelineConfig config_from_json(const Json& j);
PipelineConfig load_config(const std::string& path);

// Error raised by a pipeline stage; what() starts with the stage name.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& cause)
      : std::runtime_error(stage + ": " + cause), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Corpus and embeddings after preprocessing and id alignment.
struct PreparedInputs {
  std::vector<ProcessedDocument> docs;  // non-empty documents only
  std::size_t dropped = 0;              // documents with no tokens left
  BowCorpus corpus;
  std::vector<std::vector<std::size_t>> sequences;  // in-vocab token ids
  EmbeddingMatrix embeddings;  // rows follow corpus.ids()
};

PreparedInputs prepare_inputs(const PipelineConfig& config);
PreparedInputs prepare_inputs(std::span<const RawDocument> raw,
                              const EmbeddingMatrix& embeddings,
                              const PipelineConfig& config);

struct CoherenceSummary {
  std::vector<double> cv;
  std::vector<double> umass;  // NaN where a topic has < 2 scorable words
  double cv_mean = 0.0;
  double umass_mean = 0.0;
};

CoherenceSummary score_topics(std::span<const std::vector<std::size_t>> topics,
                              std::span<const std::vector<std::size_t>> sequences,
                              std::size_t cv_window);

// One pass of LDA, fusion, autoencoder and k-means at a fixed k, plus the
// embedding-only baseline.
struct TopicAnalysis {
  std::size_t k = 0;
  LdaModel lda;
  FusedMatrix fused;
  AeModel autoencoder;
  Matrix latent;
  ClusterModel clusters;
  ClusterModel embedding_clusters;
  std::vector<std::vector<std::size_t>> lda_top;
  std::vector<std::vector<TermCount>> cluster_top;
  std::vector<std::vector<TermCount>> embedding_top;
  CoherenceSummary lda_coherence;
  CoherenceSummary fused_coherence;
  CoherenceSummary embedding_coherence;
  double latent_silhouette = 0.0;
  double embedding_silhouette = 0.0;
};

TopicAnalysis analyze_topics(const PreparedInputs& inputs,
                             const PipelineConfig& config, std::size_t k);

// Smallest k whose fused coherence is not exceeded by the next k in the
// sorted grid; the largest k when coherence keeps rising.
std::size_t select_cutoff(std::span<const std::pair<std::size_t, double>> curve);

struct SweepRow {
  std::size_t k = 0;
  bool ok = false;
  std::string error;
  double lda_cv = 0.0;
  double fused_cv = 0.0;
  double embedding_cv = 0.0;
  double lda_umass = 0.0;
  double fused_umass = 0.0;
  double latent_silhouette = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::optional<std::size_t> selected_k;  // empty when every k failed
  std::string rule = "first_local_max_fused_cv";
};

SweepReport sweep_k(const PreparedInputs& inputs, const PipelineConfig& config);
// Loads inputs from config.paths; writes sweep.json and sweep.csv when
// out_dir is set.
SweepReport sweep_k(const PipelineConfig& config);
Json sweep_to_json(const SweepReport& report);

struct ClusterSentiment {
  std::size_t cluster = 0;
  std::array<std::size_t, kNumSentiments> counts{};
  std::array<double, kNumSentiments> fractions{};
};

struct JoinedReport {
  std::vector<ClusterSentiment> clusters;
  std::vector<std::string> ids;
  std::vector<std::size_t> assignments;
  std::vector<std::size_t> sentiments;
};

// Requires both sides to cover the same ids; the error lists offenders.
JoinedReport join_topics_sentiments(std::span<const std::string> cluster_ids,
                                    std::span<const std::size_t> assignments,
                                    std::span<const std::string> sentiment_ids,
                                    std::span<const std::size_t> sentiments);
Json joined_to_json(const JoinedReport& report);

struct RunSummary {
  std::vector<std::string> artifacts;  // paths written
  std::size_t documents = 0;
  std::size_t dropped = 0;
  double lda_cv = 0.0;
  double fused_cv = 0.0;
  double latent_silhouette = 0.0;
  double embedding_silhouette = 0.0;
};

inline constexpr const char* kRunArtifacts[] = {
    "topics.json",    "assignments.csv", "wordcloud_freqs.json",
    "metrics.json",   "sentiment.csv",   "report.json"};

// Full pipeline into config.paths.out_dir. Written artifacts are removed
// again when a stage fails.
RunSummary run_pipeline(const PipelineConfig& config);

}  // namespace tbert

#endif  // TBERT_PIPELINE_H_
