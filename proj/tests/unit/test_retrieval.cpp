#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "ppedcrf/retrieval.hpp"

namespace ppedcrf {
namespace {

using testing::TempDir;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_str(std::vector<std::uint8_t>& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.insert(out.end(), s.begin(), s.end());
}

void put_f32(std::vector<std::uint8_t>& out, float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, 4);
  put_u32(out, bits);
}

// Byte-level writer that mirrors what an external exporter produces.
std::vector<std::uint8_t> exporter_bytes(const std::string& name,
                                         const std::vector<EmbeddingRecord>& recs) {
  std::vector<std::uint8_t> out{'E', 'M', 'B', '1'};
  put_str(out, name);
  put_u32(out, recs.empty() ? 1u : static_cast<std::uint32_t>(recs[0].vector.size()));
  put_u32(out, static_cast<std::uint32_t>(recs.size()));
  for (const EmbeddingRecord& r : recs) {
    put_str(out, r.view_id);
    put_str(out, r.location_id);
    for (float f : r.vector) put_f32(out, f);
  }
  return out;
}

EmbeddingRecord rec(std::string view, std::string loc, Embedding v, std::string name = "e") {
  return {std::move(view), std::move(loc), std::move(v), std::move(name)};
}

TEST(Emb1, ReadsExporterBytes) {
  const std::vector<EmbeddingRecord> recs{
      rec("v1", "L1", {0.25f, -1.5f, 3.0e-7f}, "tilemean"),
      rec("v2", "L2", {1.0f, 2.0f, -0.0f}, "tilemean")};
  const auto bytes = exporter_bytes("tilemean", recs);
  const auto decoded = decode_embeddings(bytes);
  ASSERT_EQ(decoded.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(decoded[i].view_id, recs[i].view_id);
    EXPECT_EQ(decoded[i].location_id, recs[i].location_id);
    EXPECT_EQ(decoded[i].embedder_name, "tilemean");
    ASSERT_EQ(decoded[i].vector.size(), 3u);
    EXPECT_EQ(std::memcmp(decoded[i].vector.data(), recs[i].vector.data(), 12), 0);
  }
  EXPECT_EQ(encode_embeddings(decoded), bytes);
}

TEST(Emb1, FileRoundTrip) {
  TempDir dir("emb");
  std::mt19937_64 gen(9);
  std::vector<EmbeddingRecord> recs;
  for (int i = 0; i < 5; ++i)
    recs.push_back(rec("view" + std::to_string(i), "loc" + std::to_string(i % 2),
                       testing::tie_prone_vector(gen, 7), "gradhist"));
  save_embeddings(recs, dir.path() / "x.emb");
  EXPECT_EQ(load_embeddings(dir.path() / "x.emb"), recs);
}

TEST(Emb1, Errors) {
  EXPECT_THROW(decode_embeddings(exporter_bytes("e", {})), Error);
  try {
    decode_embeddings(exporter_bytes("e", {}));
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("empty embedding file"), std::string::npos);
  }
  auto bytes = exporter_bytes("e", {rec("a", "x", {1.0f, 2.0f})});
  bytes.pop_back();
  EXPECT_THROW(decode_embeddings(bytes), Error);
  auto bad_magic = exporter_bytes("e", {rec("a", "x", {1.0f})});
  bad_magic[3] = '2';
  EXPECT_THROW(decode_embeddings(bad_magic), Error);
  auto trailing = exporter_bytes("e", {rec("a", "x", {1.0f})});
  trailing.push_back(0);
  EXPECT_THROW(decode_embeddings(trailing), Error);
  const std::vector<EmbeddingRecord> mixed{rec("a", "x", {1.0f, 2.0f}), rec("b", "y", {1.0f})};
  EXPECT_THROW(encode_embeddings(mixed), Error);
  EXPECT_THROW(validate_embeddings(mixed), Error);
  const std::vector<EmbeddingRecord> names{rec("a", "x", {1.0f}, "p"), rec("b", "y", {1.0f}, "q")};
  EXPECT_THROW(encode_embeddings(names), Error);
  const std::vector<EmbeddingRecord> nan{
      rec("a", "x", {std::numeric_limits<float>::quiet_NaN()})};
  EXPECT_THROW(validate_embeddings(nan), Error);
  EXPECT_THROW(load_embeddings("/nonexistent/dir/file.emb"), Error);
}

TEST(Topk, SelfMatch) {
  std::mt19937_64 gen(4);
  std::vector<EmbeddingRecord> g;
  for (int i = 0; i < 6; ++i)
    g.push_back(rec("v" + std::to_string(i), "L" + std::to_string(i), testing::tie_prone_vector(gen, 16)));
  const std::vector<int> ks{1};
  // Near-duplicate vectors may outrank the self match, so derive the
  // expectation from the oracle rather than assuming 1.0.
  const RetrievalResult r = topk_accuracy(g, g, ks);
  EXPECT_EQ(r.accuracy(1), testing::brute_force_topk(g, g, ks).accuracy_at_k[0]);
  std::vector<EmbeddingRecord> distinct{rec("a", "A", {1.0f, 0.0f, 0.0f}),
                                        rec("b", "B", {0.0f, 1.0f, 0.0f}),
                                        rec("c", "C", {0.0f, 0.0f, 1.0f})};
  EXPECT_EQ(topk_accuracy(distinct, distinct, ks).accuracy(1), 1.0);
}

TEST(Topk, HandRanking) {
  const double s[3] = {0.9, 0.8, 0.1};
  std::vector<EmbeddingRecord> gallery;
  const char* locs[3] = {"wrong1", "right", "wrong2"};
  for (int i = 0; i < 3; ++i) {
    const float c = static_cast<float>(s[i]);
    gallery.push_back(rec("g" + std::to_string(i), locs[i],
                          {c, static_cast<float>(std::sqrt(1.0 - s[i] * s[i]))}));
  }
  const std::vector<EmbeddingRecord> q{rec("q", "right", {1.0f, 0.0f})};
  const std::vector<int> ks{1, 2, 3};
  const RetrievalResult r = topk_accuracy(q, gallery, ks);
  EXPECT_EQ(r.accuracy(1), 0.0);
  EXPECT_EQ(r.accuracy(2), 1.0);
  EXPECT_EQ(r.accuracy(3), 1.0);
  EXPECT_EQ(r.per_query_ranks, std::vector<int>{2});
  EXPECT_THROW(r.accuracy(5), Error);
}

TEST(Topk, OrthogonalQueryUsesTieBreak) {
  std::vector<EmbeddingRecord> gallery{rec("c", "L3", {0.0f, 1.0f}), rec("a", "L1", {0.0f, 2.0f}),
                                       rec("b", "L2", {0.0f, 3.0f})};
  const std::vector<EmbeddingRecord> q{rec("q", "L2", {1.0f, 0.0f})};
  const auto order = rank_gallery(q[0], gallery);
  EXPECT_EQ(order, (std::vector<std::size_t>{1, 2, 0}));
  const std::vector<int> ks{1, 2};
  const RetrievalResult r = topk_accuracy(q, gallery, ks);
  EXPECT_EQ(r.accuracy(1), 0.0);
  EXPECT_EQ(r.accuracy(2), 1.0);
  const auto oracle = testing::brute_force_topk(q, gallery, ks);
  EXPECT_EQ(r.accuracy_at_k, oracle.accuracy_at_k);
}

TEST(Topk, ScalingInvarianceAndMonotoneInK) {
  std::mt19937_64 gen(10);
  std::vector<EmbeddingRecord> gallery, queries;
  for (int i = 0; i < 12; ++i)
    gallery.push_back(rec("g" + std::to_string(i), "L" + std::to_string(i % 4),
                          testing::tie_prone_vector(gen, 6)));
  for (int i = 0; i < 5; ++i)
    queries.push_back(rec("q" + std::to_string(i), "L" + std::to_string(i % 4),
                          testing::tie_prone_vector(gen, 6)));
  const std::vector<int> ks{1, 3, 5, 12};
  const RetrievalResult r = topk_accuracy(queries, gallery, ks);
  for (std::size_t i = 1; i < ks.size(); ++i) EXPECT_GE(r.accuracy_at_k[i], r.accuracy_at_k[i - 1]);
  EXPECT_EQ(r.accuracy(12), 1.0);
  auto scaled = queries;
  for (auto& q : scaled)
    for (float& x : q.vector) x *= 4.0f;
  EXPECT_EQ(topk_accuracy(scaled, gallery, ks).accuracy_at_k, r.accuracy_at_k);
}

TEST(Topk, Errors) {
  const std::vector<EmbeddingRecord> g{rec("a", "A", {1.0f})};
  const std::vector<EmbeddingRecord> q{rec("q", "Z", {1.0f})};
  const std::vector<int> ks{1};
  EXPECT_THROW(topk_accuracy(q, g, ks), Error);
  EXPECT_THROW(topk_accuracy({}, g, ks), Error);
  EXPECT_THROW(topk_accuracy(g, {}, ks), Error);
  const std::vector<int> zero{0};
  EXPECT_THROW(topk_accuracy(g, g, zero), Error);
  const std::vector<EmbeddingRecord> wrong_dim{rec("q", "A", {1.0f, 2.0f})};
  EXPECT_THROW(topk_accuracy(wrong_dim, g, ks), Error);
}

}  // namespace
}  // namespace ppedcrf
