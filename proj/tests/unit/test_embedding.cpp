#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ppedcrf/embedding.hpp"
#include "ppedcrf/synthetic.hpp"

namespace ppedcrf {
namespace {

Frame rotated_180(const Frame& f) {
  Frame out(f.width(), f.height());
  for (int y = 0; y < f.height(); ++y)
    for (int x = 0; x < f.width(); ++x)
      for (int c = 0; c < 3; ++c) out.at(f.width() - 1 - x, f.height() - 1 - y, c) = f.at(x, y, c);
  return out;
}

double norm(const Embedding& v) {
  double s = 0.0;
  for (float x : v) s += static_cast<double>(x) * x;
  return std::sqrt(s);
}

TEST(Tilemean, ConstantFrameGivesEqualEntries) {
  for (int grid : {1, 2, 8}) {
    const Embedding v = embed_tilemean(Frame(32, 24, 140), grid);
    ASSERT_EQ(v.size(), static_cast<std::size_t>(3 * grid * grid));
    for (float x : v) EXPECT_FLOAT_EQ(x, v[0]);
    EXPECT_NEAR(norm(v), 1.0, 1e-6);
  }
}

TEST(Tilemean, GridOneIsChannelMeans) {
  Frame f(2, 2);
  const int values[4][3] = {{10, 20, 30}, {30, 40, 50}, {50, 60, 70}, {70, 80, 90}};
  for (int i = 0; i < 4; ++i)
    for (int c = 0; c < 3; ++c) f.at(i % 2, i / 2, c) = static_cast<std::uint8_t>(values[i][c]);
  const Embedding v = embed_tilemean(f, 1);
  const double n = std::sqrt(40.0 * 40.0 + 50.0 * 50.0 + 60.0 * 60.0);
  EXPECT_NEAR(v[0], 40.0 / n, 1e-7);
  EXPECT_NEAR(v[1], 50.0 / n, 1e-7);
  EXPECT_NEAR(v[2], 60.0 / n, 1e-7);
}

TEST(Tilemean, GlobalShiftKeepsHighSimilarity) {
  const Frame f = synthetic_frame(21, {64, 48});
  Frame g = f;
  for (auto& v : g.data()) v = static_cast<std::uint8_t>(std::min(255, v + 1));
  EXPECT_GT(cosine_similarity(embed_tilemean(f), embed_tilemean(g)), 0.999);
}

TEST(Gradhist, ConstantFrameFallback) {
  const Embedding v = embed_gradhist(Frame(16, 16, 30), 4, 8);
  ASSERT_EQ(v.size(), 128u);
  for (float x : v) EXPECT_FLOAT_EQ(x, v[0]);
  EXPECT_NEAR(norm(v), 1.0, 1e-6);
}

TEST(Gradhist, VerticalStepFillsOrientationZero) {
  Frame f(8, 8, 0);
  for (int y = 0; y < 8; ++y)
    for (int x = 4; x < 8; ++x)
      for (int c = 0; c < 3; ++c) f.at(x, y, c) = 200;
  const Embedding v = embed_gradhist(f, 1, 8);
  EXPECT_NEAR(v[0], 1.0, 1e-6);
  for (std::size_t i = 1; i < v.size(); ++i) EXPECT_EQ(v[i], 0.0f);
  const Embedding flipped = embed_gradhist(rotated_180(f), 1, 8);
  EXPECT_NEAR(flipped[0], 1.0, 1e-6);
}

TEST(Gradhist, RotationBy180KeepsHistogram) {
  const Frame f = synthetic_frame(22, {64, 48});
  const Embedding a = embed_gradhist(f, 1, 8);
  const Embedding b = embed_gradhist(rotated_180(f), 1, 8);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-6);
  // With a tiling the tiles swap places but per-tile histograms are kept.
  const int grid = 4, bins = 8;
  const Embedding ta = embed_gradhist(f, grid, bins);
  const Embedding tb = embed_gradhist(rotated_180(f), grid, bins);
  const int tiles = grid * grid;
  for (int t = 0; t < tiles; ++t)
    for (int k = 0; k < bins; ++k)
      EXPECT_NEAR(ta[t * bins + k], tb[(tiles - 1 - t) * bins + k], 1e-6);
}

TEST(Embedders, BuiltinSpecs) {
  const Frame f = synthetic_frame(23, {64, 48});
  EXPECT_EQ(builtin_embedder("tilemean").embed(f).size(), 192u);
  EXPECT_EQ(builtin_embedder("tilemean:4").embed(f).size(), 48u);
  EXPECT_EQ(builtin_embedder("gradhist").embed(f).size(), 128u);
  EXPECT_EQ(builtin_embedder("gradhist:2x6").embed(f).size(), 24u);
  EXPECT_EQ(builtin_embedder("gradhist:2x6").name, "gradhist:2x6");
  EXPECT_THROW(builtin_embedder("sift"), Error);
  EXPECT_THROW(builtin_embedder("tilemean:0"), Error);
  EXPECT_THROW(builtin_embedder("gradhist:4"), Error);
}

TEST(Cosine, BasicProperties) {
  const Embedding a{1.0f, 0.0f}, b{0.0f, 2.0f}, c{3.0f, 0.0f};
  EXPECT_EQ(cosine_similarity(a, b), 0.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(a, c), 1.0);
  EXPECT_THROW(cosine_similarity(a, Embedding{0.0f, 0.0f}), Error);
  EXPECT_THROW(cosine_similarity(a, Embedding{1.0f}), Error);
}

}  // namespace
}  // namespace ppedcrf
