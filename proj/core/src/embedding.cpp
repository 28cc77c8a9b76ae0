#include "ppedcrf/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "ppedcrf/sensitivity.hpp"

namespace ppedcrf {

namespace {

Embedding normalized(const std::vector<double>& v) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  Embedding out(v.size());
  if (norm == 0.0) {
    const float uniform = static_cast<float>(1.0 / std::sqrt(static_cast<double>(v.size())));
    std::fill(out.begin(), out.end(), uniform);
    return out;
  }
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<float>(v[i] / norm);
  return out;
}

int tile_of(int coord, int extent, int grid) {
  return static_cast<int>(static_cast<long long>(coord) * grid / extent);
}

int parse_positive(std::string_view text, std::string_view spec) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  require(ec == std::errc{} && ptr == text.data() + text.size() && value >= 1,
          ErrorCode::invalid_argument, "bad embedder spec '" + std::string(spec) + "'");
  return value;
}

}  // namespace

Embedding embed_tilemean(const Frame& frame, int grid) {
  require(grid >= 1, ErrorCode::invalid_argument, "tilemean grid must be >= 1");
  require(grid <= frame.width() && grid <= frame.height(), ErrorCode::invalid_argument,
          "tilemean grid exceeds frame size");
  const std::size_t tiles = static_cast<std::size_t>(grid) * grid;
  std::vector<double> sums(tiles * 3, 0.0);
  std::vector<double> counts(tiles, 0.0);
  for (int y = 0; y < frame.height(); ++y) {
    const int ty = tile_of(y, frame.height(), grid);
    for (int x = 0; x < frame.width(); ++x) {
      const std::size_t t = static_cast<std::size_t>(ty) * grid + tile_of(x, frame.width(), grid);
      counts[t] += 1.0;
      for (int c = 0; c < 3; ++c) sums[t * 3 + c] += frame.at(x, y, c);
    }
  }
  for (std::size_t t = 0; t < tiles; ++t) {
    for (int c = 0; c < 3; ++c) sums[t * 3 + c] /= counts[t];
  }
  return normalized(sums);
}

Embedding embed_gradhist(const Frame& frame, int grid, int bins) {
  require(grid >= 1 && bins >= 1, ErrorCode::invalid_argument,
          "gradhist grid and bins must be >= 1");
  require(grid <= frame.width() && grid <= frame.height(), ErrorCode::invalid_argument,
          "gradhist grid exceeds frame size");
  const int w = frame.width();
  const int h = frame.height();
  const std::vector<double> y = luma(frame);
  auto at = [&](int xx, int yy) { return y[static_cast<std::size_t>(yy) * w + xx]; };
  std::vector<double> hist(static_cast<std::size_t>(grid) * grid * bins, 0.0);
  const double bin_width = std::numbers::pi / bins;
  for (int r = 0; r < h; ++r) {
    const int ty = tile_of(r, h, grid);
    for (int c = 0; c < w; ++c) {
      double gx = 0.5 * (at(std::min(c + 1, w - 1), r) - at(std::max(c - 1, 0), r));
      double gy = 0.5 * (at(c, std::min(r + 1, h - 1)) - at(c, std::max(r - 1, 0)));
      const double magnitude = std::sqrt(gx * gx + gy * gy);
      if (magnitude == 0.0) continue;
      // Fold the direction into the upper half-plane so theta is in [0, pi).
      if (gy < 0.0 || (gy == 0.0 && gx < 0.0)) {
        gx = -gx;
        gy = -gy;
      }
      const double theta = std::atan2(gy, gx);
      int bin = static_cast<int>(theta / bin_width);
      if (bin >= bins) bin = 0;  // theta == pi only through rounding; same line as 0
      const std::size_t tile = static_cast<std::size_t>(ty) * grid + tile_of(c, w, grid);
      hist[tile * bins + static_cast<std::size_t>(bin)] += magnitude;
    }
  }
  return normalized(hist);
}

Embedder builtin_embedder(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view args = colon == std::string_view::npos ? "" : spec.substr(colon + 1);
  if (kind == "tilemean") {
    const int grid = args.empty() ? 8 : parse_positive(args, spec);
    return {std::string(spec), [grid](const Frame& f) { return embed_tilemean(f, grid); }};
  }
  if (kind == "gradhist") {
    int grid = 4;
    int bins = 8;
    if (!args.empty()) {
      const auto x = args.find('x');
      require(x != std::string_view::npos, ErrorCode::invalid_argument,
              "bad embedder spec '" + std::string(spec) + "', expected gradhist:<grid>x<bins>");
      grid = parse_positive(args.substr(0, x), spec);
      bins = parse_positive(args.substr(x + 1), spec);
    }
    return {std::string(spec), [grid, bins](const Frame& f) { return embed_gradhist(f, grid, bins); }};
  }
  raise(ErrorCode::invalid_argument, "unknown embedder '" + std::string(spec) + "'");
}

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
  require(a.size() == b.size(), ErrorCode::dimension_mismatch,
          "cosine similarity of vectors with different dimensions");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  require(na > 0.0 && nb > 0.0, ErrorCode::invalid_argument,
          "cosine similarity of a zero-norm vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace ppedcrf
