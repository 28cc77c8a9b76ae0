#include "ppedcrf/metrics.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

#include "ppedcrf/sanitize.hpp"

namespace ppedcrf {

namespace {

std::vector<double> gaussian_kernel(int size, double sigma) {
  std::vector<double> k(static_cast<std::size_t>(size));
  const double centre = (size - 1) / 2.0;
  double total = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - centre;
    k[static_cast<std::size_t>(i)] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    total += k[static_cast<std::size_t>(i)];
  }
  for (double& v : k) v /= total;
  return k;
}

// Separable "valid" correlation: output is (w - n + 1) x (h - n + 1).
std::vector<double> filter_valid(const std::vector<double>& src, int w, int h,
                                 const std::vector<double>& kernel) {
  const int n = static_cast<int>(kernel.size());
  const int ow = w - n + 1;
  const int oh = h - n + 1;
  std::vector<double> rows(static_cast<std::size_t>(ow) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += kernel[static_cast<std::size_t>(i)] * src[static_cast<std::size_t>(y) * w + x + i];
      rows[static_cast<std::size_t>(y) * ow + x] = s;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += kernel[static_cast<std::size_t>(i)] * rows[static_cast<std::size_t>(y + i) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = s;
    }
  }
  return out;
}

}  // namespace

double psnr(const Frame& a, const Frame& b) {
  require(a.same_shape(b), ErrorCode::dimension_mismatch, "psnr: frames differ in size");
  const auto da = a.data();
  const auto db = b.data();
  std::uint64_t sq = 0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    const std::int64_t d = int{da[i]} - int{db[i]};
    sq += static_cast<std::uint64_t>(d * d);
  }
  if (sq == 0) return kInfinitePsnr;
  const double mse = static_cast<double>(sq) / static_cast<double>(da.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim(const Frame& a, const Frame& b, const SsimParams& params) {
  require(a.same_shape(b), ErrorCode::dimension_mismatch, "ssim: frames differ in size");
  require(a.width() >= params.window && a.height() >= params.window, ErrorCode::invalid_argument,
          "ssim: frames smaller than the " + std::to_string(params.window) + "x" +
              std::to_string(params.window) + " window");
  const int w = a.width();
  const int h = a.height();
  const std::vector<double> la = luma(a);
  const std::vector<double> lb = luma(b);
  std::vector<double> aa(la.size()), bb(la.size()), ab(la.size());
  for (std::size_t i = 0; i < la.size(); ++i) {
    aa[i] = la[i] * la[i];
    bb[i] = lb[i] * lb[i];
    ab[i] = la[i] * lb[i];
  }
  const auto kernel = gaussian_kernel(params.window, params.gaussian_sigma);
  const auto mu_a = filter_valid(la, w, h, kernel);
  const auto mu_b = filter_valid(lb, w, h, kernel);
  const auto e_aa = filter_valid(aa, w, h, kernel);
  const auto e_bb = filter_valid(bb, w, h, kernel);
  const auto e_ab = filter_valid(ab, w, h, kernel);

  const double c1 = (params.k1 * params.dynamic_range) * (params.k1 * params.dynamic_range);
  const double c2 = (params.k2 * params.dynamic_range) * (params.k2 * params.dynamic_range);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double va = e_aa[i] - ma * ma;
    const double vb = e_bb[i] - mb * mb;
    const double cov = e_ab[i] - ma * mb;
    total += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
  }
  return total / static_cast<double>(mu_a.size());
}

double flicker(std::span<const Frame> frames) {
  require(frames.size() >= 2, ErrorCode::invalid_argument, "flicker needs at least two frames");
  double total = 0.0;
  for (std::size_t t = 0; t + 1 < frames.size(); ++t) {
    total += mean_abs_difference(frames[t + 1], frames[t]);
  }
  return total / static_cast<double>(frames.size() - 1);
}

double perturbation_stability(std::span<const double> energies) {
  require(energies.size() >= 2, ErrorCode::invalid_argument,
          "perturbation stability needs at least two frames");
  // Shift by the first value so equal energies give exactly 0.
  const double origin = energies.front();
  double mean = 0.0;
  for (double e : energies) mean += e - origin;
  mean /= static_cast<double>(energies.size());
  double var = 0.0;
  for (double e : energies) var += (e - origin - mean) * (e - origin - mean);
  return std::sqrt(var / static_cast<double>(energies.size()));
}

double pair_iou(const MaskMap& a, const MaskMap& b, double threshold) {
  require(a.same_shape(b), ErrorCode::dimension_mismatch, "mask_iou: masks differ in size");
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool in_a = a[i] >= threshold;
    const bool in_b = b[i] >= threshold;
    inter += (in_a && in_b) ? 1 : 0;
    uni += (in_a || in_b) ? 1 : 0;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double mask_iou(std::span<const MaskMap> masks, double threshold) {
  require(masks.size() >= 2, ErrorCode::invalid_argument, "mask_iou needs at least two masks");
  double total = 0.0;
  for (std::size_t t = 0; t + 1 < masks.size(); ++t) {
    total += pair_iou(masks[t], masks[t + 1], threshold);
  }
  return total / static_cast<double>(masks.size() - 1);
}

}  // namespace ppedcrf
