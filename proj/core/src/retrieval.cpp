#include "ppedcrf/retrieval.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace ppedcrf {

double RetrievalResult::accuracy(int k) const {
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    if (k_values[i] == k) return accuracy_at_k[i];
  }
  raise(ErrorCode::not_found, "k=" + std::to_string(k) + " was not evaluated");
}

std::vector<std::size_t> rank_gallery(const EmbeddingRecord& query,
                                      std::span<const EmbeddingRecord> gallery) {
  std::vector<double> sims(gallery.size());
  for (std::size_t g = 0; g < gallery.size(); ++g) {
    sims[g] = cosine_similarity(query.vector, gallery[g].vector);
  }
  std::vector<std::size_t> order(gallery.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (sims[a] != sims[b]) return sims[a] > sims[b];
    if (gallery[a].view_id != gallery[b].view_id) return gallery[a].view_id < gallery[b].view_id;
    return a < b;
  });
  return order;
}

RetrievalResult topk_accuracy(std::span<const EmbeddingRecord> queries,
                              std::span<const EmbeddingRecord> gallery, std::span<const int> ks) {
  require(!queries.empty(), ErrorCode::empty_input, "no queries");
  require(!gallery.empty(), ErrorCode::empty_input, "empty gallery");
  std::set<std::string> locations;
  for (const EmbeddingRecord& g : gallery) locations.insert(g.location_id);

  RetrievalResult result;
  result.k_values.assign(ks.begin(), ks.end());
  for (int k : ks) require(k >= 1, ErrorCode::invalid_argument, "k must be >= 1");
  result.per_query_ranks.reserve(queries.size());
  for (const EmbeddingRecord& q : queries) {
    require(locations.count(q.location_id) > 0, ErrorCode::not_found,
            "query location '" + q.location_id + "' is absent from the gallery");
    const std::vector<std::size_t> order = rank_gallery(q, gallery);
    int rank = 0;
    for (std::size_t r = 0; r < order.size(); ++r) {
      if (gallery[order[r]].location_id == q.location_id) {
        rank = static_cast<int>(r) + 1;
        break;
      }
    }
    result.per_query_ranks.push_back(rank);
  }
  for (int k : ks) {
    const auto hits = std::count_if(result.per_query_ranks.begin(), result.per_query_ranks.end(),
                                    [k](int rank) { return rank <= k; });
    result.accuracy_at_k.push_back(static_cast<double>(hits) /
                                   static_cast<double>(queries.size()));
  }
  return result;
}

}  // namespace ppedcrf
