#include "ppedcrf/sanitize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>

namespace ppedcrf {

namespace {

constexpr std::array kMechanisms{
    Mechanism::ppedcrf,         Mechanism::ppedcrf_no_temporal, Mechanism::ppedcrf_no_ncp,
    Mechanism::global_gaussian, Mechanism::random_mask,         Mechanism::mask_blur,
    Mechanism::mask_mosaic,     Mechanism::identity};

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::round(std::clamp(v, 0.0, 255.0)));
}

MaskMap binarize(const MaskMap& mask, double threshold) {
  MaskMap out(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) out[i] = mask[i] >= threshold ? 1.0 : 0.0;
  return out;
}

SanitizedFrame composite(const Frame& frame, const Frame& replacement, const MaskMap& mask,
                         double threshold) {
  require(mask.same_shape(frame), ErrorCode::dimension_mismatch,
          "mask and frame differ in size");
  MaskMap support = binarize(mask, threshold);
  Frame out = frame;
  auto dst = out.data();
  const auto src = replacement.data();
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] == 0.0) continue;
    for (std::size_t c = 0; c < 3; ++c) dst[3 * i + c] = src[3 * i + c];
  }
  const double energy = mean_abs_difference(frame, out);
  ControlMap control(frame.width(), frame.height(), std::vector<double>(support.values().begin(),
                                                                       support.values().end()));
  return {std::move(out), std::move(support), std::move(control), energy};
}

}  // namespace

std::string_view to_string(Mechanism mechanism) noexcept {
  switch (mechanism) {
    case Mechanism::ppedcrf: return "ppedcrf";
    case Mechanism::ppedcrf_no_temporal: return "ppedcrf_no_temporal";
    case Mechanism::ppedcrf_no_ncp: return "ppedcrf_no_ncp";
    case Mechanism::global_gaussian: return "global_gaussian";
    case Mechanism::random_mask: return "random_mask";
    case Mechanism::mask_blur: return "mask_blur";
    case Mechanism::mask_mosaic: return "mask_mosaic";
    case Mechanism::identity: return "identity";
  }
  return "unknown";
}

Mechanism parse_mechanism(std::string_view name) {
  for (Mechanism m : kMechanisms) {
    if (to_string(m) == name) return m;
  }
  raise(ErrorCode::invalid_argument, "unknown mechanism '" + std::string(name) + "'");
}

std::span<const Mechanism> all_mechanisms() noexcept { return kMechanisms; }

bool is_stochastic(Mechanism mechanism) noexcept {
  switch (mechanism) {
    case Mechanism::mask_blur:
    case Mechanism::mask_mosaic:
    case Mechanism::identity: return false;
    default: return true;
  }
}

bool uses_dcrf_mask(Mechanism mechanism) noexcept {
  switch (mechanism) {
    case Mechanism::global_gaussian:
    case Mechanism::random_mask:
    case Mechanism::identity: return false;
    default: return true;
  }
}

void NoiseConfig::validate() const {
  require(sigma0 >= 0.0 && std::isfinite(sigma0), ErrorCode::invalid_argument,
          "sigma0 must be nonnegative");
  require(alpha >= 0.0 && std::isfinite(alpha), ErrorCode::invalid_argument,
          "alpha must be nonnegative");
  require(eps_div > 0.0, ErrorCode::invalid_argument, "eps_div must be positive");
  require(blur_kernel >= 1 && blur_kernel % 2 == 1, ErrorCode::invalid_argument,
          "blur kernel must be odd and >= 1");
  require(mosaic_block >= 1, ErrorCode::invalid_argument, "mosaic block must be >= 1");
  require(random_mask_coverage >= 0.0 && random_mask_coverage <= 1.0,
          ErrorCode::invalid_argument, "random mask coverage must lie in [0, 1]");
  dcrf.validate();
}

double mean_abs_difference(const Frame& a, const Frame& b) {
  require(a.same_shape(b), ErrorCode::dimension_mismatch, "frames differ in size");
  const auto da = a.data();
  const auto db = b.data();
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    total += static_cast<std::uint64_t>(std::abs(int{da[i]} - int{db[i]}));
  }
  return static_cast<double>(total) / static_cast<double>(da.size());
}

Frame apply_weighted_noise(const Frame& frame, std::span<const double> weights,
                           std::span<const double> noise) {
  require(weights.size() == frame.pixel_count(), ErrorCode::dimension_mismatch,
          "weight map does not match frame size");
  require(noise.size() == frame.data().size(), ErrorCode::dimension_mismatch,
          "noise buffer does not match frame size");
  Frame out = frame;
  auto dst = out.data();
  const auto src = frame.data();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (w == 0.0) continue;
    for (std::size_t c = 0; c < 3; ++c) {
      const std::size_t j = 3 * i + c;
      dst[j] = to_byte(src[j] + w * noise[j]);
    }
  }
  return out;
}

std::vector<double> draw_noise(std::size_t pixel_count, double sigma0, Rng& rng) {
  std::vector<double> noise(pixel_count * 3, 0.0);
  if (sigma0 == 0.0) return noise;
  for (double& n : noise) n = sigma0 * rng.normal();
  return noise;
}

SanitizedFrame sanitize_frame(const Frame& frame, const MaskMap& mask, const ControlMap& control,
                              double sigma0, Rng& rng) {
  require(mask.same_shape(frame) && control.same_shape(frame), ErrorCode::dimension_mismatch,
          "mask, control map and frame must share dimensions");
  require(sigma0 >= 0.0, ErrorCode::invalid_argument, "sigma0 must be nonnegative");
  std::vector<double> weights(frame.pixel_count());
  for (std::size_t i = 0; i < weights.size(); ++i) weights[i] = control[i] * mask[i];
  const std::vector<double> noise = draw_noise(frame.pixel_count(), sigma0, rng);
  Frame out = apply_weighted_noise(frame, weights, noise);
  const double energy = mean_abs_difference(frame, out);
  return {std::move(out), mask, control, energy};
}

SanitizedFrame global_gaussian(const Frame& frame, double sigma0, Rng& rng) {
  const MaskMap ones(frame.width(), frame.height(), 1.0);
  const ControlMap unit(frame.width(), frame.height(), 1.0);
  return sanitize_frame(frame, ones, unit, sigma0, rng);
}

SanitizedFrame random_mask(const Frame& frame, double coverage, double sigma0, Rng& rng) {
  require(coverage >= 0.0 && coverage <= 1.0, ErrorCode::invalid_argument,
          "coverage must lie in [0, 1]");
  Rng support_rng = rng.derive("random_mask");
  MaskMap support(frame.width(), frame.height());
  for (std::size_t i = 0; i < support.size(); ++i) {
    support[i] = support_rng.uniform() < coverage ? 1.0 : 0.0;
  }
  const ControlMap unit(frame.width(), frame.height(), 1.0);
  return sanitize_frame(frame, support, unit, sigma0, rng);
}

Frame box_blur(const Frame& frame, int kernel) {
  require(kernel >= 1 && kernel % 2 == 1, ErrorCode::invalid_argument,
          "blur kernel must be odd and >= 1");
  if (kernel == 1) return frame;
  const int w = frame.width();
  const int h = frame.height();
  const int r = kernel / 2;
  // Integer separable sums keep the result exact.
  std::vector<std::int32_t> rows(frame.data().size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        std::int32_t s = 0;
        for (int d = -r; d <= r; ++d) s += frame.at(std::clamp(x + d, 0, w - 1), y, c);
        rows[(static_cast<std::size_t>(y) * w + x) * 3 + c] = s;
      }
    }
  }
  Frame out(w, h);
  const double area = static_cast<double>(kernel) * kernel;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        std::int32_t s = 0;
        for (int d = -r; d <= r; ++d) {
          s += rows[(static_cast<std::size_t>(std::clamp(y + d, 0, h - 1)) * w + x) * 3 + c];
        }
        out.at(x, y, c) = to_byte(s / area);
      }
    }
  }
  return out;
}

Frame block_mosaic(const Frame& frame, int block) {
  require(block >= 1, ErrorCode::invalid_argument, "mosaic block must be >= 1");
  if (block == 1) return frame;
  const int w = frame.width();
  const int h = frame.height();
  Frame out(w, h);
  for (int by = 0; by < h; by += block) {
    for (int bx = 0; bx < w; bx += block) {
      const int ey = std::min(by + block, h);
      const int ex = std::min(bx + block, w);
      const double count = static_cast<double>(ey - by) * (ex - bx);
      for (int c = 0; c < 3; ++c) {
        std::int64_t s = 0;
        for (int y = by; y < ey; ++y)
          for (int x = bx; x < ex; ++x) s += frame.at(x, y, c);
        const std::uint8_t mean = to_byte(static_cast<double>(s) / count);
        for (int y = by; y < ey; ++y)
          for (int x = bx; x < ex; ++x) out.at(x, y, c) = mean;
      }
    }
  }
  return out;
}

SanitizedFrame mask_blur(const Frame& frame, const MaskMap& mask, int kernel, double threshold) {
  return composite(frame, box_blur(frame, kernel), mask, threshold);
}

SanitizedFrame mask_mosaic(const Frame& frame, const MaskMap& mask, int block, double threshold) {
  return composite(frame, block_mosaic(frame, block), mask, threshold);
}

std::vector<MaskMap> refine_sequence_masks(const Sequence& sequence, const UnarySource& unary,
                                           const DcrfParams& params) {
  params.validate();
  std::vector<MaskMap> masks;
  masks.reserve(sequence.size());
  MaskMap previous(sequence.width(), sequence.height(), 0.0);
  for (std::size_t t = 0; t < sequence.size(); ++t) {
    const LogitMap logits = unary(sequence.frames()[t], t);
    require(logits.same_shape(sequence.frames()[t]), ErrorCode::dimension_mismatch,
            "unary logits do not match frame size");
    masks.push_back(dcrf_refine(logits, previous, params));
    previous = masks.back();
  }
  return masks;
}

DcrfParams effective_dcrf(const NoiseConfig& config) {
  DcrfParams params = config.dcrf;
  if (config.mechanism == Mechanism::ppedcrf_no_temporal) params.lambda_tau = 0.0;
  return params;
}

SanitizedFrame apply_mechanism_frame(const Sequence& sequence, std::size_t index,
                                     std::span<const MaskMap> masks, const NoiseConfig& config) {
  require(index < sequence.size(), ErrorCode::invalid_argument, "frame index out of range");
  const Frame& frame = sequence.frames()[index];
  const bool needs_mask = uses_dcrf_mask(config.mechanism);
  require(!needs_mask || masks.size() == sequence.size(), ErrorCode::invalid_argument,
          std::string(to_string(config.mechanism)) + " requires one refined mask per frame");
  Rng rng = Rng::for_frame(config.seed, sequence.id(), index);

  switch (config.mechanism) {
    case Mechanism::ppedcrf:
    case Mechanism::ppedcrf_no_temporal: {
      const MaskMap& p = masks[index];
      return sanitize_frame(frame, p, ncp_control(p, config.alpha, config.eps_div), config.sigma0,
                            rng);
    }
    case Mechanism::ppedcrf_no_ncp: {
      const MaskMap& p = masks[index];
      return sanitize_frame(frame, p, ControlMap(p.width(), p.height(), config.alpha),
                            config.sigma0, rng);
    }
    case Mechanism::global_gaussian: return global_gaussian(frame, config.sigma0, rng);
    case Mechanism::random_mask:
      return random_mask(frame, config.random_mask_coverage, config.sigma0, rng);
    case Mechanism::mask_blur:
      return mask_blur(frame, masks[index], config.blur_kernel, config.mask_threshold);
    case Mechanism::mask_mosaic:
      return mask_mosaic(frame, masks[index], config.mosaic_block, config.mask_threshold);
    case Mechanism::identity:
      return {frame, MaskMap(frame.width(), frame.height(), 0.0),
              ControlMap(frame.width(), frame.height(), 0.0), 0.0};
  }
  raise(ErrorCode::invalid_argument, "unhandled mechanism");
}

std::vector<SanitizedFrame> apply_mechanism(const Sequence& sequence,
                                            std::span<const MaskMap> masks,
                                            const NoiseConfig& config) {
  config.validate();
  std::vector<SanitizedFrame> out;
  out.reserve(sequence.size());
  for (std::size_t t = 0; t < sequence.size(); ++t) {
    out.push_back(apply_mechanism_frame(sequence, t, masks, config));
  }
  return out;
}

std::vector<SanitizedFrame> sanitize_sequence(const Sequence& sequence, const NoiseConfig& config,
                                              const UnarySource& unary) {
  config.validate();
  std::vector<MaskMap> masks;
  if (uses_dcrf_mask(config.mechanism)) {
    masks = refine_sequence_masks(sequence, unary, effective_dcrf(config));
  }
  return apply_mechanism(sequence, masks, config);
}

}  // namespace ppedcrf
