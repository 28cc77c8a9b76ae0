#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ppedcrf/image.hpp"

namespace ppedcrf {

/// Working resolution. Defaults to 320x192 (w x h).
struct Resolution {
  int width = 320;
  int height = 192;
};

/// Components of a `<clip_id>_frame<number>.<ext>` filename.
struct FrameName {
  std::string clip_id;
  std::uint64_t number = 0;
  std::string extension;  // lower-case, without the dot
};

std::optional<FrameName> parse_frame_name(std::string_view filename);
std::string format_frame_name(std::string_view clip_id, std::uint64_t number,
                              std::string_view extension = "png");

/// Decodes PNG (lossless) or JPEG (lossy ingest) into 8-bit RGB. Grey and
/// alpha inputs are expanded/dropped.
Frame read_frame(const std::filesystem::path& path);

/// Writes PNG or JPEG according to the extension.
void write_frame(const Frame& frame, const std::filesystem::path& path);

/// Loads all frames of one clip, ordered by numeric frame index.
Sequence load_sequence(const std::filesystem::path& dir, std::string_view clip_id);

/// Frame numbers of one clip in load order.
std::vector<std::uint64_t> frame_numbers(const std::filesystem::path& dir, std::string_view clip_id);

/// Sorted unique clip ids found in `dir`.
std::vector<std::string> discover_clips(const std::filesystem::path& dir);

/// Writes every frame of `sequence` as `<id>_frame<i>.png`, 1-based.
void write_sequence(const Sequence& sequence, const std::filesystem::path& dir);

/// Bilinear resampling with half-pixel centres and edge clamping.
Frame resize_bilinear(const Frame& frame, int width, int height);

Sequence resize_sequence(const Sequence& sequence, Resolution resolution);

}  // namespace ppedcrf
