#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ppedcrf/error.hpp"

namespace ppedcrf {

/// 8-bit interleaved RGB raster, row-major.
class Frame {
 public:
  static constexpr int kChannels = 3;

  Frame() = default;
  Frame(int width, int height, std::uint8_t fill = 0);
  Frame(int width, int height, std::vector<std::uint8_t> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  bool empty() const noexcept { return data_.empty(); }

  std::uint8_t at(int x, int y, int c) const noexcept {
    return data_[index(x, y, c)];
  }
  std::uint8_t& at(int x, int y, int c) noexcept { return data_[index(x, y, c)]; }

  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::span<std::uint8_t> data() noexcept { return data_; }

  bool same_shape(const Frame& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * kChannels + static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Luma (0.299 R + 0.587 G + 0.114 B) per pixel, unrounded.
std::vector<double> luma(const Frame& frame);

/// Ordered frames of one clip. The middle frame is the one the attacker sees.
class Sequence {
 public:
  Sequence(std::string id, std::vector<Frame> frames);

  const std::string& id() const noexcept { return id_; }
  const std::vector<Frame>& frames() const noexcept { return frames_; }
  std::size_t size() const noexcept { return frames_.size(); }
  std::size_t middle_index() const noexcept { return frames_.size() / 2; }
  const Frame& middle() const noexcept { return frames_[middle_index()]; }
  int width() const noexcept { return frames_.front().width(); }
  int height() const noexcept { return frames_.front().height(); }

  /// `count` consecutive frames centred on the middle frame (clamped to the
  /// available length). The middle frame of the result is this sequence's
  /// middle frame whenever `count` is odd and fits.
  Sequence centered_window(std::size_t count) const;

 private:
  std::string id_;
  std::vector<Frame> frames_;
};

/// Real-valued per-pixel map. The tag keeps logits, masks and control maps
/// from being mixed up at call sites.
template <typename Tag>
class Field {
 public:
  Field() = default;
  Field(int width, int height, double fill = 0.0)
      : width_(width), height_(height),
        values_(checked_size(width, height), fill) {}
  Field(int width, int height, std::vector<double> values)
      : width_(width), height_(height), values_(std::move(values)) {
    require(values_.size() == checked_size(width, height),
            ErrorCode::dimension_mismatch, "field value count does not match width*height");
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator()(int x, int y) const noexcept { return values_[offset(x, y)]; }
  double& operator()(int x, int y) noexcept { return values_[offset(x, y)]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  template <typename OtherTag>
  bool same_shape(const Field<OtherTag>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }
  bool same_shape(const Frame& frame) const noexcept {
    return width_ == frame.width() && height_ == frame.height();
  }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  static std::size_t checked_size(int width, int height) {
    require(width > 0 && height > 0, ErrorCode::invalid_argument,
            "field dimensions must be positive");
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  std::size_t offset(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

struct LogitTag {};
struct MaskTag {};
struct ControlTag {};

/// Unbounded sensitivity logits.
using LogitMap = Field<LogitTag>;
/// Continuous support in [0, 1].
using MaskMap = Field<MaskTag>;
/// Per-pixel perturbation amplitude in [0, alpha].
using ControlMap = Field<ControlTag>;

}  // namespace ppedcrf
