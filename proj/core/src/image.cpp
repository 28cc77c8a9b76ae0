#include "ppedcrf/image.hpp"

#include <algorithm>

namespace ppedcrf {

namespace {

std::size_t raster_size(int width, int height) {
  require(width > 0 && height > 0, ErrorCode::invalid_argument,
          "frame dimensions must be positive");
  return static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * Frame::kChannels;
}

}  // namespace

Frame::Frame(int width, int height, std::uint8_t fill)
    : width_(width), height_(height), data_(raster_size(width, height), fill) {}

Frame::Frame(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  require(data_.size() == raster_size(width, height), ErrorCode::dimension_mismatch,
          "frame data length must equal width*height*3");
}

std::vector<double> luma(const Frame& frame) {
  std::vector<double> out(frame.pixel_count());
  const auto data = frame.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = 0.299 * data[3 * i] + 0.587 * data[3 * i + 1] + 0.114 * data[3 * i + 2];
  }
  return out;
}

Sequence::Sequence(std::string id, std::vector<Frame> frames)
    : id_(std::move(id)), frames_(std::move(frames)) {
  require(!frames_.empty(), ErrorCode::empty_input, "empty sequence");
  for (const Frame& f : frames_) {
    require(f.same_shape(frames_.front()), ErrorCode::dimension_mismatch,
            "sequence '" + id_ + "' has frames of inconsistent dimensions");
  }
}

Sequence Sequence::centered_window(std::size_t count) const {
  require(count > 0, ErrorCode::invalid_argument, "window must contain at least one frame");
  count = std::min(count, frames_.size());
  const std::size_t mid = middle_index();
  std::size_t first = mid >= count / 2 ? mid - count / 2 : 0;
  first = std::min(first, frames_.size() - count);
  std::vector<Frame> window(frames_.begin() + static_cast<std::ptrdiff_t>(first),
                            frames_.begin() + static_cast<std::ptrdiff_t>(first + count));
  return Sequence(id_, std::move(window));
}

}  // namespace ppedcrf
