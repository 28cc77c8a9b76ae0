#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>

#include "ppedcrf/image.hpp"

namespace ppedcrf {

/// Deterministic stand-in for a learned unary network:
/// logit = gain * (gradient magnitude / per-frame max) + bias, on luma.
struct UnaryHeuristicParams {
  double gain = 6.0;
  double bias = -3.0;
};

struct DcrfParams {
  double lambda_s = 0.5;    // spatial smoothing weight
  double lambda_tau = 0.3;  // pull towards the previous refined mask
  int iterations = 5;
  int smooth_kernel = 9;    // odd average-pool window

  void validate() const;
};

double sigmoid(double x) noexcept;

/// Central-difference gradient magnitude of luma, indices clamped at borders.
std::vector<double> gradient_magnitude(const Frame& frame);

LogitMap predict_unary_heuristic(const Frame& frame, const UnaryHeuristicParams& params = {});

/// Logit interchange: "LGT1", u32 width, u32 height, then width*height f32,
/// all little-endian, row-major.
LogitMap load_unary_from_file(const std::filesystem::path& path, int width, int height);
void save_unary_to_file(const LogitMap& logits, const std::filesystem::path& path);

/// k x k windowed mean with replicate padding. k = 1 is the identity and
/// constant maps are reproduced exactly.
MaskMap spatial_smooth(const MaskMap& mask, int kernel);

/// Mean-field refinement of one frame's logits against the previous frame's
/// refined mask (all zeros for the first frame).
MaskMap dcrf_refine(const LogitMap& logits, const MaskMap& previous, const DcrfParams& params);

/// Produces the logits for frame `index` of a sequence.
using UnarySource = std::function<LogitMap(const Frame& frame, std::size_t index)>;

UnarySource heuristic_unary(UnaryHeuristicParams params = {});

/// Reads `<stem>.lgt` from `dir` for each frame stem, in sequence order.
UnarySource file_unary(std::filesystem::path dir, std::vector<std::string> stems);

}  // namespace ppedcrf
