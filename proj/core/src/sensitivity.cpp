#include "ppedcrf/sensitivity.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace ppedcrf {

namespace {

constexpr std::array<char, 4> kLogitMagic{'L', 'G', 'T', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  require(in.gcount() == 4, ErrorCode::format, "truncated logit file");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

// Windowed mean along one axis, written as centre + mean(neighbour - centre)
// so that constant lines come back bit-identical.
void smooth_axis(std::span<const double> src, std::span<double> dst, int width, int height,
                 int radius, bool horizontal) {
  const double inv = 1.0 / (2 * radius + 1);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double centre = src[static_cast<std::size_t>(y) * width + x];
      double acc = 0.0;
      for (int d = -radius; d <= radius; ++d) {
        const int xx = horizontal ? std::clamp(x + d, 0, width - 1) : x;
        const int yy = horizontal ? y : std::clamp(y + d, 0, height - 1);
        acc += src[static_cast<std::size_t>(yy) * width + xx] - centre;
      }
      dst[static_cast<std::size_t>(y) * width + x] = centre + acc * inv;
    }
  }
}

}  // namespace

void DcrfParams::validate() const {
  require(lambda_s >= 0.0 && std::isfinite(lambda_s), ErrorCode::invalid_argument,
          "lambda_s must be a nonnegative finite number");
  require(lambda_tau >= 0.0 && std::isfinite(lambda_tau), ErrorCode::invalid_argument,
          "lambda_tau must be a nonnegative finite number");
  require(iterations >= 1, ErrorCode::invalid_argument, "dcrf iterations must be >= 1");
  require(smooth_kernel >= 1 && smooth_kernel % 2 == 1, ErrorCode::invalid_argument,
          "smooth_kernel must be odd and >= 1");
}

double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::vector<double> gradient_magnitude(const Frame& frame) {
  const int w = frame.width();
  const int h = frame.height();
  const std::vector<double> y = luma(frame);
  std::vector<double> out(y.size());
  auto at = [&](int xx, int yy) {
    return y[static_cast<std::size_t>(yy) * w + static_cast<std::size_t>(xx)];
  };
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const double gx = 0.5 * (at(std::min(c + 1, w - 1), r) - at(std::max(c - 1, 0), r));
      const double gy = 0.5 * (at(c, std::min(r + 1, h - 1)) - at(c, std::max(r - 1, 0)));
      out[static_cast<std::size_t>(r) * w + c] = std::sqrt(gx * gx + gy * gy);
    }
  }
  return out;
}

LogitMap predict_unary_heuristic(const Frame& frame, const UnaryHeuristicParams& params) {
  std::vector<double> energy = gradient_magnitude(frame);
  const double peak = *std::max_element(energy.begin(), energy.end());
  for (double& e : energy) {
    const double normalized = peak > 0.0 ? e / peak : 0.0;
    e = params.gain * normalized + params.bias;
  }
  return LogitMap(frame.width(), frame.height(), std::move(energy));
}

LogitMap load_unary_from_file(const std::filesystem::path& path, int width, int height) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::io, "cannot open logit file '" + path.string() + "'");
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  require(in.gcount() == 4 && magic == kLogitMagic, ErrorCode::format,
          "bad logit file header in '" + path.string() + "'");
  const std::uint32_t w = get_u32(in);
  const std::uint32_t h = get_u32(in);
  require(static_cast<int>(w) == width && static_cast<int>(h) == height,
          ErrorCode::dimension_mismatch,
          "logit file '" + path.string() + "' is " + std::to_string(w) + "x" +
              std::to_string(h) + ", expected " + std::to_string(width) + "x" +
              std::to_string(height));
  std::vector<double> values(static_cast<std::size_t>(w) * h);
  for (double& v : values) {
    const std::uint32_t bits = get_u32(in);
    const float f = std::bit_cast<float>(bits);
    require(std::isfinite(f), ErrorCode::format, "non-finite logit in '" + path.string() + "'");
    v = f;
  }
  return LogitMap(width, height, std::move(values));
}

void save_unary_to_file(const LogitMap& logits, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::io, "cannot write logit file '" + path.string() + "'");
  out.write(kLogitMagic.data(), 4);
  put_u32(out, static_cast<std::uint32_t>(logits.width()));
  put_u32(out, static_cast<std::uint32_t>(logits.height()));
  for (double v : logits.values()) {
    put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  require(out.good(), ErrorCode::io, "failed writing logit file '" + path.string() + "'");
}

MaskMap spatial_smooth(const MaskMap& mask, int kernel) {
  require(kernel >= 1 && kernel % 2 == 1, ErrorCode::invalid_argument,
          "smoothing kernel must be odd and >= 1");
  if (kernel == 1) return mask;
  const int w = mask.width();
  const int h = mask.height();
  const int radius = kernel / 2;
  std::vector<double> rows(mask.size());
  smooth_axis(mask.values(), rows, w, h, radius, /*horizontal=*/true);
  MaskMap out(w, h);
  smooth_axis(rows, out.values(), w, h, radius, /*horizontal=*/false);
  return out;
}

MaskMap dcrf_refine(const LogitMap& logits, const MaskMap& previous, const DcrfParams& params) {
  params.validate();
  require(logits.same_shape(previous), ErrorCode::dimension_mismatch,
          "logits and previous mask differ in size");
  const std::size_t n = logits.size();
  MaskMap p(logits.width(), logits.height());
  for (std::size_t i = 0; i < n; ++i) p[i] = sigmoid(logits[i]);

  const bool spatial = params.lambda_s != 0.0;
  for (int k = 0; k < params.iterations; ++k) {
    MaskMap smoothed = spatial ? spatial_smooth(p, params.smooth_kernel) : MaskMap{};
    MaskMap next(p.width(), p.height());
    for (std::size_t i = 0; i < n; ++i) {
      double field = logits[i];
      if (spatial) field += params.lambda_s * (smoothed[i] - p[i]);
      field += params.lambda_tau * (previous[i] - p[i]);
      next[i] = sigmoid(field);
    }
    p = std::move(next);
  }
  return p;
}

UnarySource heuristic_unary(UnaryHeuristicParams params) {
  return [params](const Frame& frame, std::size_t) { return predict_unary_heuristic(frame, params); };
}

UnarySource file_unary(std::filesystem::path dir, std::vector<std::string> stems) {
  return [dir = std::move(dir), stems = std::move(stems)](const Frame& frame, std::size_t index) {
    require(index < stems.size(), ErrorCode::not_found,
            "no logit file for frame " + std::to_string(index));
    return load_unary_from_file(dir / (stems[index] + ".lgt"), frame.width(), frame.height());
  };
}

}  // namespace ppedcrf
