#include "ppedcrf/construction.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <tuple>
#include <unordered_set>

namespace ppedcrf {

namespace {

void require_unique_ids(std::span<const LabeledEmbedding> items) {
  std::set<std::string_view> seen;
  for (const LabeledEmbedding& e : items) {
    require(seen.insert(e.id).second, ErrorCode::invalid_argument,
            "duplicate candidate id '" + e.id + "'");
  }
}

}  // namespace

std::vector<LabeledEmbedding> representatives(std::span<const Sequence> sequences,
                                              const Embedder& embedder) {
  std::vector<LabeledEmbedding> out;
  out.reserve(sequences.size());
  for (const Sequence& s : sequences) out.push_back({s.id(), embedder.embed(s.middle())});
  return out;
}

std::vector<ScenePair> mine_pairs(std::span<const LabeledEmbedding> candidates, int n_pairs) {
  require(n_pairs >= 1, ErrorCode::invalid_argument, "n_pairs must be >= 1");
  require(candidates.size() >= 2 * static_cast<std::size_t>(n_pairs), ErrorCode::invalid_argument,
          "insufficient sequences: need " + std::to_string(2 * n_pairs) + " to mine " +
              std::to_string(n_pairs) + " pairs, have " + std::to_string(candidates.size()));
  require_unique_ids(candidates);

  struct Edge {
    double sim;
    std::size_t a, b;  // candidates[a].id < candidates[b].id
  };
  std::vector<Edge> edges;
  edges.reserve(candidates.size() * (candidates.size() - 1) / 2);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (std::size_t j = i + 1; j < candidates.size(); ++j) {
      const double sim = cosine_similarity(candidates[i].vector, candidates[j].vector);
      if (candidates[i].id < candidates[j].id) {
        edges.push_back({sim, i, j});
      } else {
        edges.push_back({sim, j, i});
      }
    }
  }
  // Scanning edges in (similarity desc, id_a asc, id_b asc) order and keeping
  // those with two unused endpoints is the iterated global-max greedy rule.
  std::sort(edges.begin(), edges.end(), [&](const Edge& x, const Edge& y) {
    if (x.sim != y.sim) return x.sim > y.sim;
    return std::tie(candidates[x.a].id, candidates[x.b].id) <
           std::tie(candidates[y.a].id, candidates[y.b].id);
  });
  std::vector<bool> used(candidates.size(), false);
  std::vector<ScenePair> pairs;
  for (const Edge& e : edges) {
    if (used[e.a] || used[e.b]) continue;
    used[e.a] = used[e.b] = true;
    pairs.push_back({candidates[e.a].id, candidates[e.b].id, e.sim});
    if (static_cast<int>(pairs.size()) == n_pairs) break;
  }
  return pairs;
}

std::vector<ScenePair> mine_pairs(std::span<const Sequence> sequences, const Embedder& embedder,
                                  int n_pairs) {
  const auto reps = representatives(sequences, embedder);
  return mine_pairs(reps, n_pairs);
}

std::vector<Distractor> select_distractors(std::span<const LabeledEmbedding> unused,
                                           std::span<const LabeledEmbedding> paired, int m) {
  require(m >= 0, ErrorCode::invalid_argument, "distractor count must be >= 0");
  require(unused.size() >= static_cast<std::size_t>(m), ErrorCode::invalid_argument,
          "insufficient candidates: need " + std::to_string(m) + " distractors, have " +
              std::to_string(unused.size()));
  if (m == 0) return {};
  require(!paired.empty(), ErrorCode::invalid_argument, "no paired views to score against");
  require_unique_ids(unused);
  std::vector<Distractor> scored;
  scored.reserve(unused.size());
  for (const LabeledEmbedding& u : unused) {
    double best = -std::numeric_limits<double>::infinity();
    for (const LabeledEmbedding& p : paired) best = std::max(best, cosine_similarity(u.vector, p.vector));
    scored.push_back({u.id, best});
  }
  std::sort(scored.begin(), scored.end(), [](const Distractor& a, const Distractor& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  scored.resize(static_cast<std::size_t>(m));
  return scored;
}

HardnessReport hardness_report(std::span<const ScenePair> pairs,
                               std::span<const Distractor> distractors,
                               std::span<const int> prefix_sizes) {
  require(!pairs.empty(), ErrorCode::empty_input, "hardness report needs at least one pair");
  HardnessReport r;
  r.min_pair_similarity = std::numeric_limits<double>::infinity();
  r.max_pair_similarity = -std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (const ScenePair& p : pairs) {
    total += p.similarity;
    r.min_pair_similarity = std::min(r.min_pair_similarity, p.similarity);
    r.max_pair_similarity = std::max(r.max_pair_similarity, p.similarity);
  }
  r.mean_pair_similarity = total / static_cast<double>(pairs.size());
  if (!distractors.empty()) {
    double sum = 0.0;
    double hardest = -std::numeric_limits<double>::infinity();
    for (const Distractor& d : distractors) {
      sum += d.score;
      hardest = std::max(hardest, d.score);
    }
    r.mean_distractor_max_similarity = sum / static_cast<double>(distractors.size());
    r.hardest_distractor_similarity = hardest;
  }
  for (int n : prefix_sizes) {
    if (n <= 0 || static_cast<std::size_t>(n) > distractors.size()) continue;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += distractors[static_cast<std::size_t>(i)].score;
    r.distractor_prefix_means.emplace_back(n, sum / n);
  }
  return r;
}

BenchmarkLayout build_layout(std::span<const Sequence> sequences, const Embedder& anchor,
                             int n_pairs, int n_distractors, std::span<const int> prefix_sizes) {
  const std::vector<LabeledEmbedding> reps = representatives(sequences, anchor);
  BenchmarkLayout layout;
  layout.pairs = mine_pairs(reps, n_pairs);

  std::unordered_set<std::string> paired_ids;
  for (const ScenePair& p : layout.pairs) {
    paired_ids.insert(p.gallery_id);
    paired_ids.insert(p.query_id);
  }
  std::vector<LabeledEmbedding> paired;
  std::vector<LabeledEmbedding> unused;
  for (const LabeledEmbedding& r : reps) {
    (paired_ids.count(r.id) ? paired : unused).push_back(r);
  }
  layout.distractors = select_distractors(unused, paired, n_distractors);
  layout.hardness = hardness_report(layout.pairs, layout.distractors, prefix_sizes);
  return layout;
}

}  // namespace ppedcrf
