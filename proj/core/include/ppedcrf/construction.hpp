#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ppedcrf/embedding.hpp"
#include "ppedcrf/image.hpp"

namespace ppedcrf {

/// Representative embedding of one candidate sequence.
struct LabeledEmbedding {
  std::string id;
  Embedding vector;
};

struct ScenePair {
  std::string gallery_id;  // lexicographically smaller id
  std::string query_id;
  double similarity = 0.0;
};

struct Distractor {
  std::string id;
  double score = 0.0;  // max similarity to any paired view
};

struct HardnessReport {
  double mean_pair_similarity = 0.0;
  double min_pair_similarity = 0.0;
  double max_pair_similarity = 0.0;
  std::optional<double> mean_distractor_max_similarity;
  std::optional<double> hardest_distractor_similarity;
  /// (prefix length, mean score of that many hardest distractors).
  std::vector<std::pair<int, double>> distractor_prefix_means;
};

/// Embeds the middle frame of each sequence.
std::vector<LabeledEmbedding> representatives(std::span<const Sequence> sequences,
                                              const Embedder& embedder);

/// Repeatedly takes the most similar pair of unused candidates (ties by
/// lexicographic (id_a, id_b) with id_a < id_b) until n_pairs are found.
std::vector<ScenePair> mine_pairs(std::span<const LabeledEmbedding> candidates, int n_pairs);
std::vector<ScenePair> mine_pairs(std::span<const Sequence> sequences, const Embedder& embedder,
                                  int n_pairs);

/// Top-m unused candidates by max similarity to any paired view, in
/// descending score order (ties by ascending id).
std::vector<Distractor> select_distractors(std::span<const LabeledEmbedding> unused,
                                           std::span<const LabeledEmbedding> paired, int m);

/// `prefix_sizes` lists the distractor counts to summarise (e.g. 12, 36).
HardnessReport hardness_report(std::span<const ScenePair> pairs,
                               std::span<const Distractor> distractors,
                               std::span<const int> prefix_sizes = {});

/// Pairs, ordered distractors and hardness statistics for one candidate pool.
struct BenchmarkLayout {
  std::vector<ScenePair> pairs;
  std::vector<Distractor> distractors;
  HardnessReport hardness;
};

BenchmarkLayout build_layout(std::span<const Sequence> sequences, const Embedder& anchor,
                             int n_pairs, int n_distractors,
                             std::span<const int> prefix_sizes = {});

}  // namespace ppedcrf
