#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ppedcrf/calibration.hpp"
#include "ppedcrf/image.hpp"
#include "ppedcrf/rng.hpp"
#include "ppedcrf/sensitivity.hpp"

namespace ppedcrf {

enum class Mechanism {
  ppedcrf,
  ppedcrf_no_temporal,
  ppedcrf_no_ncp,
  global_gaussian,
  random_mask,
  mask_blur,
  mask_mosaic,
  identity,
};

std::string_view to_string(Mechanism mechanism) noexcept;
Mechanism parse_mechanism(std::string_view name);
std::span<const Mechanism> all_mechanisms() noexcept;

bool is_stochastic(Mechanism mechanism) noexcept;
/// True when the mechanism consumes the refined DCRF support.
bool uses_dcrf_mask(Mechanism mechanism) noexcept;

struct NoiseConfig {
  Mechanism mechanism = Mechanism::ppedcrf;
  double sigma0 = 8.0;
  double alpha = 1.0;
  std::uint64_t seed = 1234;
  DcrfParams dcrf{};
  UnaryHeuristicParams unary{};
  double eps_div = kDefaultEpsDiv;
  int blur_kernel = 9;
  int mosaic_block = 16;
  double random_mask_coverage = 0.5;
  double mask_threshold = 0.5;  // binarisation for blur/mosaic and IoU

  void validate() const;
};

struct SanitizedFrame {
  Frame frame;
  MaskMap mask_used;
  ControlMap control_used;
  double perturbation_energy = 0.0;  // mean |I' - I| in intensity units
};

/// Mean absolute per-channel difference between two frames.
double mean_abs_difference(const Frame& a, const Frame& b);

/// clip(I + w(x) * noise(x, c), 0, 255), rounded half away from zero. One
/// weight per pixel, one noise value per pixel per channel.
Frame apply_weighted_noise(const Frame& frame, std::span<const double> weights,
                           std::span<const double> noise);

/// sigma0 * N(0,1) for every pixel and channel, drawn in raster order.
std::vector<double> draw_noise(std::size_t pixel_count, double sigma0, Rng& rng);

/// Selective perturbation with weight a(x) * p(x).
SanitizedFrame sanitize_frame(const Frame& frame, const MaskMap& mask, const ControlMap& control,
                              double sigma0, Rng& rng);

SanitizedFrame global_gaussian(const Frame& frame, double sigma0, Rng& rng);

/// Bernoulli(coverage) support drawn from a child stream of `rng`, so the
/// noise draws match global_gaussian for the same rng. Callers pass a
/// per-frame stream to get a fresh support per frame.
SanitizedFrame random_mask(const Frame& frame, double coverage, double sigma0, Rng& rng);

/// Box blur (k x k, replicate padding) composited through mask >= threshold.
SanitizedFrame mask_blur(const Frame& frame, const MaskMap& mask, int kernel,
                         double threshold = 0.5);

/// Block means (b x b, ragged last blocks) composited through mask >= threshold.
SanitizedFrame mask_mosaic(const Frame& frame, const MaskMap& mask, int block,
                           double threshold = 0.5);

Frame box_blur(const Frame& frame, int kernel);
Frame block_mosaic(const Frame& frame, int block);

/// Refined masks for every frame: p_0 = 0, p_t = dcrf_refine(u_t, p_{t-1}).
std::vector<MaskMap> refine_sequence_masks(const Sequence& sequence, const UnarySource& unary,
                                           const DcrfParams& params);

/// DCRF parameters actually used by `config.mechanism` (the temporal
/// ablation zeroes lambda_tau).
DcrfParams effective_dcrf(const NoiseConfig& config);

/// Applies the configured mechanism given precomputed refined masks (one
/// per frame; may be empty for mechanisms that ignore the DCRF support).
/// Noise for frame t comes from Rng::for_frame(seed, sequence id, t).
std::vector<SanitizedFrame> apply_mechanism(const Sequence& sequence,
                                            std::span<const MaskMap> masks,
                                            const NoiseConfig& config);

/// Same as apply_mechanism, for frame `index` only. Uses the same per-frame
/// stream, so the result equals element `index` of apply_mechanism.
SanitizedFrame apply_mechanism_frame(const Sequence& sequence, std::size_t index,
                                     std::span<const MaskMap> masks, const NoiseConfig& config);

/// Full release-side pipeline over one sequence.
std::vector<SanitizedFrame> sanitize_sequence(const Sequence& sequence, const NoiseConfig& config,
                                              const UnarySource& unary);

}  // namespace ppedcrf
