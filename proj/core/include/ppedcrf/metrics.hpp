#pragma once

#include <limits>
#include <span>

#include "ppedcrf/image.hpp"

namespace ppedcrf {

inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

/// 10 log10(255^2 / MSE) over all channels; +inf for identical frames.
double psnr(const Frame& a, const Frame& b);

struct SsimParams {
  int window = 11;
  double gaussian_sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 255.0;
};

/// Single-scale SSIM on luma, averaged over valid window positions.
double ssim(const Frame& a, const Frame& b, const SsimParams& params = {});

/// Mean over consecutive pairs of mean |f_{t+1} - f_t|.
double flicker(std::span<const Frame> frames);

/// Population standard deviation of per-frame energies (already
/// normalised by the caller, see normalized_energy).
double perturbation_stability(std::span<const double> energies);

inline double normalized_energy(double energy_intensity_units) noexcept {
  return energy_intensity_units / 255.0;
}

/// Mean IoU of consecutive masks binarised at value >= threshold. A pair
/// with an empty union scores 1.
double mask_iou(std::span<const MaskMap> masks, double threshold = 0.5);

/// IoU of one pair, same conventions as mask_iou.
double pair_iou(const MaskMap& a, const MaskMap& b, double threshold = 0.5);

struct QualityReport {
  double psnr_db = kInfinitePsnr;
  double ssim = 1.0;
  double flicker = 0.0;
  double perturbation_stability = 0.0;
  double mask_iou = 1.0;
};

}  // namespace ppedcrf
