#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppedcrf/image.hpp"

namespace ppedcrf {

using Embedding = std::vector<float>;

/// Per-channel tile means over a grid x grid tiling, L2-normalised.
Embedding embed_tilemean(const Frame& frame, int grid = 8);

/// Magnitude-weighted gradient-orientation histograms per tile (orientation
/// taken modulo pi), L2-normalised. A frame without gradients maps to the
/// uniform unit vector.
Embedding embed_gradhist(const Frame& frame, int grid = 4, int bins = 8);

/// Named built-in embedder.
struct Embedder {
  std::string name;
  std::function<Embedding(const Frame&)> embed;
};

/// Accepts "tilemean", "tilemean:<grid>", "gradhist", "gradhist:<grid>x<bins>".
Embedder builtin_embedder(std::string_view spec);

/// Cosine similarity in double precision. Throws on zero-norm input.
double cosine_similarity(std::span<const float> a, std::span<const float> b);

}  // namespace ppedcrf
