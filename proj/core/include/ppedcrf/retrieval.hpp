#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ppedcrf/embedding.hpp"

namespace ppedcrf {

struct EmbeddingRecord {
  std::string view_id;
  std::string location_id;
  Embedding vector;
  std::string embedder_name;

  friend bool operator==(const EmbeddingRecord&, const EmbeddingRecord&) = default;
};

/// EMB1 interchange, all integers u32 little-endian:
///   "EMB1" | name_len name | dim | count |
///   count * ( id_len view_id | id_len location_id | dim * f32 )
std::vector<EmbeddingRecord> load_embeddings(const std::filesystem::path& path);
std::vector<EmbeddingRecord> decode_embeddings(std::span<const std::uint8_t> bytes);

/// All records must share embedder_name and dimension.
void save_embeddings(std::span<const EmbeddingRecord> records, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_embeddings(std::span<const EmbeddingRecord> records);

/// Checks finiteness and that each embedder name has one dimension.
void validate_embeddings(std::span<const EmbeddingRecord> records);

struct RetrievalResult {
  std::vector<int> k_values;
  std::vector<double> accuracy_at_k;
  /// 1-based rank of the first gallery entry with the query's location.
  std::vector<int> per_query_ranks;

  double accuracy(int k) const;
};

/// Gallery order for one query: descending cosine similarity, ties broken by
/// ascending view_id, then by gallery position.
std::vector<std::size_t> rank_gallery(const EmbeddingRecord& query,
                                      std::span<const EmbeddingRecord> gallery);

/// A query succeeds at k when any of the top-k gallery entries carries its
/// location_id.
RetrievalResult topk_accuracy(std::span<const EmbeddingRecord> queries,
                              std::span<const EmbeddingRecord> gallery,
                              std::span<const int> ks);

}  // namespace ppedcrf
