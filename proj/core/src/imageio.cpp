#include "ppedcrf/imageio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <map>
#include <memory>
#include <set>

#include <jpeglib.h>
#include <png.h>

namespace ppedcrf {

namespace fs = std::filesystem;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_supported_extension(std::string_view ext) {
  return ext == "png" || ext == "jpg" || ext == "jpeg";
}

std::string extension_of(const fs::path& path) {
  std::string ext = path.extension().string();
  if (!ext.empty() && ext.front() == '.') ext.erase(0, 1);
  return lower(ext);
}

Frame read_png(const fs::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    raise(ErrorCode::format, "cannot decode PNG '" + path.string() + "': " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> data(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, data.data(), 0, nullptr)) {
    std::string message = image.message;
    png_image_free(&image);
    raise(ErrorCode::format, "cannot decode PNG '" + path.string() + "': " + message);
  }
  return Frame(static_cast<int>(image.width), static_cast<int>(image.height), std::move(data));
}

void write_png(const Frame& frame, const fs::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(frame.width());
  image.height = static_cast<png_uint_32>(frame.height());
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.c_str(), 0, frame.data().data(), 0, nullptr)) {
    raise(ErrorCode::io, "cannot write PNG '" + path.string() + "': " + image.message);
  }
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

// Decodes into `out` (resized by the caller after reading the header). Kept
// free of non-trivial locals because of setjmp.
bool decode_jpeg(std::FILE* file, std::vector<std::uint8_t>& out, int& width, int& height,
                 char* message) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  if (setjmp(err.jump)) {
    std::snprintf(message, JMSG_LENGTH_MAX, "%s", err.message);
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  width = static_cast<int>(cinfo.output_width);
  height = static_cast<int>(cinfo.output_height);
  out.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = out.data() + static_cast<std::size_t>(cinfo.output_scanline) *
                                    static_cast<std::size_t>(width) * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

bool encode_jpeg(std::FILE* file, const std::uint8_t* data, int width, int height, int quality,
                 char* message) {
  jpeg_compress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  if (setjmp(err.jump)) {
    std::snprintf(message, JMSG_LENGTH_MAX, "%s", err.message);
    jpeg_destroy_compress(&cinfo);
    return false;
  }
  jpeg_create_compress(&cinfo);
  jpeg_stdio_dest(&cinfo, file);
  cinfo.image_width = static_cast<JDIMENSION>(width);
  cinfo.image_height = static_cast<JDIMENSION>(height);
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  for (int c = 0; c < cinfo.num_components; ++c) {
    cinfo.comp_info[c].h_samp_factor = 1;
    cinfo.comp_info[c].v_samp_factor = 1;
  }
  jpeg_start_compress(&cinfo, TRUE);
  while (cinfo.next_scanline < cinfo.image_height) {
    auto* row = const_cast<JSAMPROW>(data + static_cast<std::size_t>(cinfo.next_scanline) *
                                                static_cast<std::size_t>(width) * 3);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  return true;
}

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Frame read_jpeg(const fs::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  require(file != nullptr, ErrorCode::io, "cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> data;
  int width = 0;
  int height = 0;
  char message[JMSG_LENGTH_MAX] = {};
  if (!decode_jpeg(file.get(), data, width, height, message)) {
    raise(ErrorCode::format, "cannot decode JPEG '" + path.string() + "': " + message);
  }
  return Frame(width, height, std::move(data));
}

void write_jpeg(const Frame& frame, const fs::path& path) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  require(file != nullptr, ErrorCode::io, "cannot open '" + path.string() + "' for writing");
  char message[JMSG_LENGTH_MAX] = {};
  if (!encode_jpeg(file.get(), frame.data().data(), frame.width(), frame.height(), 95, message)) {
    raise(ErrorCode::io, "cannot write JPEG '" + path.string() + "': " + message);
  }
}

}  // namespace

std::optional<FrameName> parse_frame_name(std::string_view filename) {
  const auto dot = filename.rfind('.');
  if (dot == std::string_view::npos || dot + 1 == filename.size()) return std::nullopt;
  const std::string ext = lower(filename.substr(dot + 1));
  if (!is_supported_extension(ext)) return std::nullopt;
  const std::string_view stem = filename.substr(0, dot);
  constexpr std::string_view marker = "_frame";
  const auto at = stem.rfind(marker);
  if (at == std::string_view::npos || at == 0) return std::nullopt;
  const std::string_view digits = stem.substr(at + marker.size());
  if (digits.empty() || digits.size() > 18 ||
      !std::all_of(digits.begin(), digits.end(),
                   [](unsigned char c) { return std::isdigit(c) != 0; })) {
    return std::nullopt;
  }
  FrameName name;
  name.clip_id = std::string(stem.substr(0, at));
  name.number = std::stoull(std::string(digits));
  name.extension = ext;
  return name;
}

std::string format_frame_name(std::string_view clip_id, std::uint64_t number,
                              std::string_view extension) {
  return std::string(clip_id) + "_frame" + std::to_string(number) + "." + std::string(extension);
}

Frame read_frame(const fs::path& path) {
  const std::string ext = extension_of(path);
  require(fs::exists(path), ErrorCode::io, "no such file '" + path.string() + "'");
  if (ext == "png") return read_png(path);
  if (ext == "jpg" || ext == "jpeg") return read_jpeg(path);
  raise(ErrorCode::format, "unsupported raster format '" + path.string() + "'");
}

void write_frame(const Frame& frame, const fs::path& path) {
  require(!frame.empty(), ErrorCode::invalid_argument, "cannot write an empty frame");
  const std::string ext = extension_of(path);
  if (ext == "png") return write_png(frame, path);
  if (ext == "jpg" || ext == "jpeg") return write_jpeg(frame, path);
  raise(ErrorCode::format, "unsupported raster format '" + path.string() + "'");
}

namespace {

std::map<std::uint64_t, fs::path> clip_frames(const fs::path& dir, std::string_view clip_id) {
  require(fs::is_directory(dir), ErrorCode::not_found,
          "missing directory '" + dir.string() + "'");
  std::map<std::uint64_t, fs::path> by_number;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto name = parse_frame_name(entry.path().filename().string());
    if (!name || name->clip_id != clip_id) continue;
    const auto [it, inserted] = by_number.emplace(name->number, entry.path());
    require(inserted, ErrorCode::format,
            "duplicate frame index " + std::to_string(name->number) + " in clip '" +
                std::string(clip_id) + "'");
  }
  require(!by_number.empty(), ErrorCode::empty_input,
          "empty sequence: no frames for clip '" + std::string(clip_id) + "' in '" +
              dir.string() + "'");
  return by_number;
}

}  // namespace

std::vector<std::uint64_t> frame_numbers(const fs::path& dir, std::string_view clip_id) {
  std::vector<std::uint64_t> out;
  for (const auto& entry : clip_frames(dir, clip_id)) out.push_back(entry.first);
  return out;
}

Sequence load_sequence(const fs::path& dir, std::string_view clip_id) {
  const auto by_number = clip_frames(dir, clip_id);
  std::vector<Frame> frames;
  frames.reserve(by_number.size());
  for (const auto& [number, path] : by_number) {
    frames.push_back(read_frame(path));
    require(frames.back().same_shape(frames.front()), ErrorCode::dimension_mismatch,
            "inconsistent dimensions in clip '" + std::string(clip_id) + "' at '" +
                path.string() + "'");
  }
  return Sequence(std::string(clip_id), std::move(frames));
}

std::vector<std::string> discover_clips(const fs::path& dir) {
  require(fs::is_directory(dir), ErrorCode::not_found,
          "missing directory '" + dir.string() + "'");
  std::set<std::string> ids;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (auto name = parse_frame_name(entry.path().filename().string())) {
      ids.insert(name->clip_id);
    }
  }
  return {ids.begin(), ids.end()};
}

void write_sequence(const Sequence& sequence, const fs::path& dir) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    write_frame(sequence.frames()[i], dir / format_frame_name(sequence.id(), i + 1));
  }
}

Frame resize_bilinear(const Frame& frame, int width, int height) {
  require(width > 0 && height > 0, ErrorCode::invalid_argument,
          "resize target must be positive");
  require(!frame.empty(), ErrorCode::invalid_argument, "cannot resize an empty frame");
  if (width == frame.width() && height == frame.height()) return frame;

  struct Tap {
    int i0, i1;
    double w1;
  };
  auto taps = [](int out_size, int in_size) {
    std::vector<Tap> result(static_cast<std::size_t>(out_size));
    const double scale = static_cast<double>(in_size) / out_size;
    for (int o = 0; o < out_size; ++o) {
      double src = (o + 0.5) * scale - 0.5;
      src = std::clamp(src, 0.0, static_cast<double>(in_size - 1));
      const int i0 = static_cast<int>(std::floor(src));
      const int i1 = std::min(i0 + 1, in_size - 1);
      result[static_cast<std::size_t>(o)] = {i0, i1, src - i0};
    }
    return result;
  };
  const auto xs = taps(width, frame.width());
  const auto ys = taps(height, frame.height());

  Frame out(width, height);
  for (int y = 0; y < height; ++y) {
    const Tap& ty = ys[static_cast<std::size_t>(y)];
    for (int x = 0; x < width; ++x) {
      const Tap& tx = xs[static_cast<std::size_t>(x)];
      for (int c = 0; c < Frame::kChannels; ++c) {
        const double top = (1.0 - tx.w1) * frame.at(tx.i0, ty.i0, c) + tx.w1 * frame.at(tx.i1, ty.i0, c);
        const double bottom = (1.0 - tx.w1) * frame.at(tx.i0, ty.i1, c) + tx.w1 * frame.at(tx.i1, ty.i1, c);
        const double v = (1.0 - ty.w1) * top + ty.w1 * bottom;
        out.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
      }
    }
  }
  return out;
}

Sequence resize_sequence(const Sequence& sequence, Resolution resolution) {
  std::vector<Frame> frames;
  frames.reserve(sequence.size());
  for (const Frame& f : sequence.frames()) {
    frames.push_back(resize_bilinear(f, resolution.width, resolution.height));
  }
  return Sequence(sequence.id(), std::move(frames));
}

}  // namespace ppedcrf
