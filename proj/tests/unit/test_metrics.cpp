#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "ppedcrf/metrics.hpp"
#include "ppedcrf/sanitize.hpp"
#include "ppedcrf/synthetic.hpp"

namespace ppedcrf {
namespace {

Frame shifted(const Frame& f, int delta) {
  Frame out = f;
  for (auto& v : out.data()) v = static_cast<std::uint8_t>(v + delta);
  return out;
}

TEST(Psnr, ClosedForms) {
  const Frame a(32, 16, 100);
  EXPECT_EQ(psnr(a, a), kInfinitePsnr);
  EXPECT_NEAR(psnr(a, shifted(a, 8)), 10.0 * std::log10(255.0 * 255.0 / 64.0), 1e-12);
  EXPECT_NEAR(psnr(a, shifted(a, 8)), 30.07, 0.005);
  EXPECT_NEAR(psnr(a, shifted(a, 16)), 24.05, 0.005);
  EXPECT_THROW(psnr(a, Frame(16, 16, 0)), Error);
}

TEST(Ssim, IdenticalAndInverted) {
  const Frame f = synthetic_frame(12, {96, 64});
  EXPECT_DOUBLE_EQ(ssim(f, f), 1.0);
  Frame inv = f;
  for (auto& v : inv.data()) v = static_cast<std::uint8_t>(255 - v);
  EXPECT_LT(ssim(f, inv), 0.0);
}

TEST(Ssim, ConstantFramesLuminanceOnly) {
  const double c1 = std::pow(0.01 * 255.0, 2);
  const double expected = (2.0 * 100.0 * 110.0 + c1) / (100.0 * 100.0 + 110.0 * 110.0 + c1);
  EXPECT_NEAR(ssim(Frame(40, 30, 100), Frame(40, 30, 110)), expected, 1e-12);
}

TEST(Ssim, SymmetricBoundedAndSizeChecked) {
  std::mt19937_64 gen(2);
  const Frame a = testing::random_frame(gen, 40, 30);
  const Frame b = testing::random_frame(gen, 40, 30);
  EXPECT_NEAR(ssim(a, b), ssim(b, a), 1e-12);
  EXPECT_LE(ssim(a, b), 1.0);
  EXPECT_GE(ssim(a, b), -1.0);
  EXPECT_THROW(ssim(Frame(10, 10, 0), Frame(10, 10, 0)), Error);
  EXPECT_THROW(ssim(a, Frame(30, 40, 0)), Error);
}

TEST(Ssim, DecreasesWithNoise) {
  const Frame f = synthetic_frame(13, {96, 64});
  Rng r1(1), r2(1);
  const double low = ssim(f, global_gaussian(f, 4.0, r1).frame);
  const double high = ssim(f, global_gaussian(f, 16.0, r2).frame);
  EXPECT_GT(low, high);
  EXPECT_LT(low, 1.0);
}

TEST(Flicker, StaticAndHandValues) {
  const std::vector<Frame> still(4, Frame(8, 8, 50));
  EXPECT_EQ(flicker(still), 0.0);
  const std::vector<Frame> ramp{Frame(4, 4, 0), Frame(4, 4, 2), Frame(4, 4, 8)};
  EXPECT_DOUBLE_EQ(flicker(ramp), 4.0);
  const std::vector<Frame> reversed(ramp.rbegin(), ramp.rend());
  EXPECT_DOUBLE_EQ(flicker(reversed), flicker(ramp));
  EXPECT_THROW(flicker(std::vector<Frame>{Frame(4, 4, 9)}), Error);
}

TEST(Flicker, IndependentGlobalNoise) {
  const Frame base(320, 192, 128);
  std::vector<Frame> frames;
  for (int t = 0; t < 4; ++t) {
    Rng rng = Rng::for_frame(7, "static", static_cast<std::uint64_t>(t));
    frames.push_back(global_gaussian(base, 8.0, rng).frame);
  }
  EXPECT_NEAR(flicker(frames), 8.0 * std::sqrt(2.0) * std::sqrt(2.0 / std::numbers::pi), 0.15);
}

TEST(Flicker, BlurOfStaticSequenceIsZero) {
  const Frame f = synthetic_frame(14, {40, 30});
  const Frame blurred = box_blur(f, 9);
  EXPECT_EQ(flicker(std::vector<Frame>(3, blurred)), 0.0);
}

TEST(Stability, PopulationStd) {
  EXPECT_EQ(perturbation_stability(std::vector<double>{0.2, 0.2, 0.2}), 0.0);
  EXPECT_NEAR(perturbation_stability(std::vector<double>{0.01, 0.03}), 0.01, 1e-15);
  EXPECT_EQ(perturbation_stability(std::vector<double>{0.0, 0.0}), 0.0);
  EXPECT_EQ(normalized_energy(255.0), 1.0);
  EXPECT_THROW(perturbation_stability(std::vector<double>{0.5}), Error);
}

TEST(MaskIou, HandCases) {
  const MaskMap full(4, 4, 1.0);
  EXPECT_EQ(mask_iou(std::vector<MaskMap>{full, full, full}), 1.0);
  MaskMap left(4, 4, 0.0), right(4, 4, 0.0);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 2; ++x) {
      left(x, y) = 1.0;
      right(x + 2, y) = 1.0;
    }
  EXPECT_EQ(pair_iou(left, right), 0.0);
  EXPECT_EQ(pair_iou(MaskMap(4, 4, 0.0), MaskMap(4, 4, 0.1)), 1.0);
  EXPECT_DOUBLE_EQ(pair_iou(left, full), 0.5);
  EXPECT_DOUBLE_EQ(pair_iou(MaskMap(2, 1, 0.5), MaskMap(2, 1, 0.49)), 0.0);
  EXPECT_THROW(pair_iou(left, MaskMap(3, 4)), Error);
}

TEST(MaskIou, IndependentBernoulli) {
  std::mt19937_64 gen(31);
  std::bernoulli_distribution coin(0.5);
  std::vector<MaskMap> masks;
  for (int t = 0; t < 2; ++t) {
    MaskMap m(320, 192);
    for (double& v : m.values()) v = coin(gen) ? 1.0 : 0.0;
    masks.push_back(m);
  }
  EXPECT_NEAR(mask_iou(masks), 1.0 / 3.0, 0.02);
}

TEST(MaskIou, PixelPermutationInvariance) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MaskMap a(12, 9), b(12, 9);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = u(gen);
    b[i] = u(gen);
  }
  std::vector<std::size_t> perm(a.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), gen);
  MaskMap pa(12, 9), pb(12, 9);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    pa[i] = a[perm[i]];
    pb[i] = b[perm[i]];
  }
  EXPECT_DOUBLE_EQ(pair_iou(a, b), pair_iou(pa, pb));
}

}  // namespace
}  // namespace ppedcrf
