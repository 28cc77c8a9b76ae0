#pragma once

// Brute-force reference implementations and fixtures shared by the unit and
// acceptance tests. They follow the textbook definitions directly and avoid
// the library's own control flow.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "ppedcrf/construction.hpp"
#include "ppedcrf/embedding.hpp"
#include "ppedcrf/image.hpp"
#include "ppedcrf/retrieval.hpp"

namespace ppedcrf::testing {

class TempDir {
 public:
  explicit TempDir(const std::string& label) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("ppedcrf_test_" + label + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

inline Frame random_frame(std::mt19937_64& gen, int width, int height) {
  std::uniform_int_distribution<int> byte(0, 255);
  Frame f(width, height);
  for (auto& v : f.data()) v = static_cast<std::uint8_t>(byte(gen));
  return f;
}

inline Frame constant_frame(int width, int height, std::uint8_t value) {
  return Frame(width, height, value);
}

// Mean of a list, left to right.
inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Rank oracle: the position of every gallery entry is the number of entries
// that beat it under (similarity desc, view_id asc, index asc). No sorting.
struct OracleRetrieval {
  std::vector<double> accuracy_at_k;
  std::vector<int> ranks;
};

inline OracleRetrieval brute_force_topk(const std::vector<EmbeddingRecord>& queries,
                                        const std::vector<EmbeddingRecord>& gallery,
                                        const std::vector<int>& ks) {
  OracleRetrieval out;
  std::vector<int> hits(ks.size(), 0);
  for (const EmbeddingRecord& q : queries) {
    std::vector<double> sim(gallery.size());
    for (std::size_t j = 0; j < gallery.size(); ++j) {
      sim[j] = cosine_similarity(q.vector, gallery[j].vector);
    }
    auto beats = [&](std::size_t a, std::size_t b) {
      if (sim[a] != sim[b]) return sim[a] > sim[b];
      if (gallery[a].view_id != gallery[b].view_id) return gallery[a].view_id < gallery[b].view_id;
      return a < b;
    };
    int best = std::numeric_limits<int>::max();
    for (std::size_t j = 0; j < gallery.size(); ++j) {
      if (gallery[j].location_id != q.location_id) continue;
      int position = 0;
      for (std::size_t i = 0; i < gallery.size(); ++i) {
        if (i != j && beats(i, j)) ++position;
      }
      best = std::min(best, position + 1);
    }
    out.ranks.push_back(best);
    for (std::size_t k = 0; k < ks.size(); ++k) {
      if (best <= ks[k]) ++hits[k];
    }
  }
  for (int h : hits) out.accuracy_at_k.push_back(static_cast<double>(h) / queries.size());
  return out;
}

// Greedy pairing oracle: n rounds, each scanning every unused pair for the
// global maximum with the lexicographic (id_a, id_b) tie-break.
inline std::vector<ScenePair> greedy_pairs_oracle(const std::vector<LabeledEmbedding>& c,
                                                  int n_pairs) {
  std::vector<bool> used(c.size(), false);
  std::vector<ScenePair> out;
  for (int round = 0; round < n_pairs; ++round) {
    std::optional<ScenePair> best;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (std::size_t j = 0; j < c.size(); ++j) {
        if (i == j || used[i] || used[j] || !(c[i].id < c[j].id)) continue;
        const double s = cosine_similarity(c[i].vector, c[j].vector);
        const bool better =
            !best || s > best->similarity ||
            (s == best->similarity &&
             (c[i].id < best->gallery_id ||
              (c[i].id == best->gallery_id && c[j].id < best->query_id)));
        if (better) {
          best = ScenePair{c[i].id, c[j].id, s};
          bi = i;
          bj = j;
        }
      }
    }
    if (!best) break;
    used[bi] = used[bj] = true;
    out.push_back(*best);
  }
  return out;
}

inline double max_similarity(const LabeledEmbedding& x, const std::vector<LabeledEmbedding>& set) {
  double best = -std::numeric_limits<double>::infinity();
  for (const LabeledEmbedding& p : set) best = std::max(best, cosine_similarity(x.vector, p.vector));
  return best;
}

// Selection oracle: m rounds of picking the remaining maximum score.
inline std::vector<Distractor> distractor_oracle(const std::vector<LabeledEmbedding>& unused,
                                                 const std::vector<LabeledEmbedding>& paired,
                                                 int m) {
  std::vector<bool> taken(unused.size(), false);
  std::vector<Distractor> out;
  for (int round = 0; round < m; ++round) {
    std::optional<std::size_t> best;
    double best_score = 0.0;
    for (std::size_t i = 0; i < unused.size(); ++i) {
      if (taken[i]) continue;
      const double s = max_similarity(unused[i], paired);
      if (!best || s > best_score || (s == best_score && unused[i].id < unused[*best].id)) {
        best = i;
        best_score = s;
      }
    }
    taken[*best] = true;
    out.push_back({unused[*best].id, best_score});
  }
  return out;
}

// Random unit-norm-free embeddings drawn from a small integer alphabet so that
// exact similarity ties are common.
inline Embedding tie_prone_vector(std::mt19937_64& gen, int dim) {
  std::uniform_int_distribution<int> entry(-2, 2);
  Embedding v(static_cast<std::size_t>(dim));
  do {
    for (float& x : v) x = static_cast<float>(entry(gen));
  } while (std::all_of(v.begin(), v.end(), [](float x) { return x == 0.0f; }));
  return v;
}

}  // namespace ppedcrf::testing
