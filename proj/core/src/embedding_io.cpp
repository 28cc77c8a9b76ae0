#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>

#include "ppedcrf/retrieval.hpp"

namespace ppedcrf {

namespace {

constexpr std::string_view kMagic = "EMB1";

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    need(4);
    const std::uint32_t v = static_cast<std::uint32_t>(bytes_[pos_]) |
                            (static_cast<std::uint32_t>(bytes_[pos_ + 1]) << 8) |
                            (static_cast<std::uint32_t>(bytes_[pos_ + 2]) << 16) |
                            (static_cast<std::uint32_t>(bytes_[pos_ + 3]) << 24);
    pos_ += 4;
    return v;
  }

  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }

  std::string_view raw(std::size_t n) {
    need(n);
    std::string_view s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    require(bytes_.size() - pos_ >= n, ErrorCode::format, "malformed embedding file: truncated");
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

void put_str(std::vector<std::uint8_t>& out, std::string_view s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.insert(out.end(), s.begin(), s.end());
}

}  // namespace

std::vector<EmbeddingRecord> decode_embeddings(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);
  require(bytes.size() >= 4 && in.raw(4) == kMagic, ErrorCode::format,
          "malformed embedding file: missing EMB1 magic");
  const std::string name = in.str();
  const std::uint32_t dim = in.u32();
  const std::uint32_t count = in.u32();
  require(count > 0, ErrorCode::empty_input, "empty embedding file");
  require(dim > 0, ErrorCode::format, "malformed embedding file: zero dimension");

  std::vector<EmbeddingRecord> records;
  records.reserve(count);
  for (std::uint32_t r = 0; r < count; ++r) {
    EmbeddingRecord rec;
    rec.view_id = in.str();
    rec.location_id = in.str();
    rec.embedder_name = name;
    rec.vector.resize(dim);
    for (float& v : rec.vector) {
      v = std::bit_cast<float>(in.u32());
      require(std::isfinite(v), ErrorCode::format,
              "non-finite value in embedding '" + rec.view_id + "'");
    }
    records.push_back(std::move(rec));
  }
  require(in.done(), ErrorCode::format, "malformed embedding file: trailing bytes");
  return records;
}

std::vector<EmbeddingRecord> load_embeddings(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  require(file.good(), ErrorCode::io, "cannot open embedding file '" + path.string() + "'");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(file)),
                                        std::istreambuf_iterator<char>());
  return decode_embeddings(bytes);
}

void validate_embeddings(std::span<const EmbeddingRecord> records) {
  std::map<std::string, std::size_t> dims;
  for (const EmbeddingRecord& rec : records) {
    require(!rec.vector.empty(), ErrorCode::format, "embedding '" + rec.view_id + "' is empty");
    for (float v : rec.vector) {
      require(std::isfinite(v), ErrorCode::format,
              "non-finite value in embedding '" + rec.view_id + "'");
    }
    const auto [it, inserted] = dims.emplace(rec.embedder_name, rec.vector.size());
    require(inserted || it->second == rec.vector.size(), ErrorCode::dimension_mismatch,
            "embedder '" + rec.embedder_name + "' has inconsistent dimensions (" +
                std::to_string(it->second) + " vs " + std::to_string(rec.vector.size()) + ")");
  }
}

std::vector<std::uint8_t> encode_embeddings(std::span<const EmbeddingRecord> records) {
  require(!records.empty(), ErrorCode::empty_input, "empty embedding file");
  validate_embeddings(records);
  const std::string& name = records.front().embedder_name;
  for (const EmbeddingRecord& rec : records) {
    require(rec.embedder_name == name, ErrorCode::invalid_argument,
            "one EMB1 file holds a single embedder");
  }
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  put_str(out, name);
  put_u32(out, static_cast<std::uint32_t>(records.front().vector.size()));
  put_u32(out, static_cast<std::uint32_t>(records.size()));
  for (const EmbeddingRecord& rec : records) {
    put_str(out, rec.view_id);
    put_str(out, rec.location_id);
    for (float v : rec.vector) put_u32(out, std::bit_cast<std::uint32_t>(v));
  }
  return out;
}

void save_embeddings(std::span<const EmbeddingRecord> records, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = encode_embeddings(records);
  std::ofstream file(path, std::ios::binary);
  require(file.good(), ErrorCode::io, "cannot write embedding file '" + path.string() + "'");
  file.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  require(file.good(), ErrorCode::io, "failed writing embedding file '" + path.string() + "'");
}

}  // namespace ppedcrf
