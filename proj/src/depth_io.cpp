#include "relsize/depth_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include <fmt/format.h>
#include <json.hpp>
#include <png.h>

#include "relsize/error.hpp"

namespace relsize {

namespace {

std::vector<char> slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFileError(path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::ofstream open_for_write(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing", path.string());
  return out;
}

bool is_space(char c) { return c == ' ' || c == '\n' || c == '\r' || c == '\t'; }

// Cursor over the PFM header; every failure is a PfmHeaderError.
struct HeaderReader {
  const std::vector<char>& bytes;
  std::size_t pos = 0;
  std::string path;

  [[noreturn]] void fail(const std::string& why) const { throw PfmHeaderError(fmt::format("{}: {}", path, why)); }

  void skip_space() {
    while (pos < bytes.size() && is_space(bytes[pos])) ++pos;
  }
  std::string_view token() {
    skip_space();
    const std::size_t start = pos;
    while (pos < bytes.size() && !is_space(bytes[pos])) ++pos;
    if (start == pos) fail("header ends early");
    return {bytes.data() + start, pos - start};
  }
  template <typename T>
  T number(const char* what) {
    const std::string_view tok = token();
    T value{};
    auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || end != tok.data() + tok.size()) fail(fmt::format("bad {} '{}'", what, tok));
    return value;
  }
};

void put_le32(std::uint32_t bits, char* out) {
  for (int i = 0; i < 4; ++i) out[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
}

std::uint32_t get_le32(const char* in) {
  std::uint32_t bits = 0;
  for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[i])) << (8 * i);
  return bits;
}

struct PngImage {
  png_image image;
  PngImage() {
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&image); }
};

void write_png(const fs::path& path, int width, int height, png_uint_32 format, const void* pixels, int stride) {
  PngImage png;
  png.image.width = static_cast<png_uint_32>(width);
  png.image.height = static_cast<png_uint_32>(height);
  png.image.format = format;
  png.image.flags = PNG_IMAGE_FLAG_FAST;
  if (!png_image_write_to_file(&png.image, path.c_str(), 0, pixels, stride, nullptr))
    throw IoError(fmt::format("PNG write failed ({})", png.image.message), path.string());
}

std::vector<std::uint8_t> read_png(const fs::path& path, png_uint_32 expected_format, const char* kind, int& width,
                                   int& height) {
  if (!fs::exists(path)) throw MissingFileError(path.string());
  PngImage png;
  if (!png_image_begin_read_from_file(&png.image, path.c_str()))
    throw PngFormatError(fmt::format("{}: not a readable PNG ({})", path.string(), png.image.message));
  // The simplified reader would convert silently; insist on the native layout.
  if (png.image.format != expected_format)
    throw PngFormatError(fmt::format("{}: expected an 8-bit {} PNG", path.string(), kind));
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(png.image));
  if (!png_image_finish_read(&png.image, nullptr, pixels.data(), 0, nullptr))
    throw PngFormatError(fmt::format("{}: decode failed ({})", path.string(), png.image.message));
  width = static_cast<int>(png.image.width);
  height = static_cast<int>(png.image.height);
  return pixels;
}

}  // namespace

void write_pfm(const DepthMap& map, const fs::path& path) {
  if (map.width <= 0 || map.height <= 0) throw ContractError("cannot write an empty PFM");
  for (float v : map.data)
    if (!std::isfinite(v) || v < 0.0f) throw ContractError(fmt::format("PFM value {} is not finite and >= 0", v));

  const std::string header = fmt::format("Pf\n{} {}\n-1.0\n", map.width, map.height);
  std::vector<char> payload(map.size() * 4);
  char* out = payload.data();
  for (int y = map.height - 1; y >= 0; --y)
    for (int x = 0; x < map.width; ++x, out += 4) put_le32(std::bit_cast<std::uint32_t>(map(x, y)), out);

  auto file = open_for_write(path);
  file.write(header.data(), static_cast<std::streamsize>(header.size()));
  file.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!file) throw IoError("PFM write failed", path.string());
}

DepthMap read_pfm(const fs::path& path) {
  const std::vector<char> bytes = slurp(path);
  HeaderReader hdr{bytes, 0, path.string()};

  const std::string_view magic = hdr.token();
  if (magic == "PF") hdr.fail("three-channel PFM is not a depth map");
  if (magic != "Pf") hdr.fail("missing 'Pf' magic");
  const long width = hdr.number<long>("width");
  const long height = hdr.number<long>("height");
  if (width <= 0 || height <= 0 || width > (1 << 20) || height > (1 << 20)) hdr.fail("bad dimensions");
  const double scale = hdr.number<double>("scale");
  if (scale == 0.0 || !std::isfinite(scale)) hdr.fail("bad scale");
  if (hdr.pos >= bytes.size() || !is_space(bytes[hdr.pos])) hdr.fail("header not terminated");
  ++hdr.pos;
  if (scale > 0.0) throw PfmByteOrderError(path.string() + ": big-endian PFM (positive scale) is not supported");

  const std::size_t expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 4;
  const std::size_t available = bytes.size() - hdr.pos;
  if (available != expected)
    throw PfmPayloadError(fmt::format("{}: payload has {} bytes, header implies {}", path.string(), available, expected));

  DepthMap map(static_cast<int>(width), static_cast<int>(height));
  const char* in = bytes.data() + hdr.pos;
  for (int y = map.height - 1; y >= 0; --y)
    for (int x = 0; x < map.width; ++x, in += 4) map(x, y) = std::bit_cast<float>(get_le32(in));
  return map;
}

void write_mask_png(const LabelMap& mask, const fs::path& path) {
  std::vector<std::uint8_t> pixels(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const auto v = mask.data[i];
    if (v < 0 || v > 255) throw ContractError(fmt::format("mask label {} does not fit in 8 bits", v));
    pixels[i] = static_cast<std::uint8_t>(v);
  }
  write_png(path, mask.width, mask.height, PNG_FORMAT_GRAY, pixels.data(), mask.width);
}

LabelMap read_mask_png(const fs::path& path) {
  int w = 0, h = 0;
  const auto pixels = read_png(path, PNG_FORMAT_GRAY, "grayscale", w, h);
  LabelMap mask(w, h);
  std::copy(pixels.begin(), pixels.end(), mask.data.begin());
  return mask;
}

void write_rgb_png(const RgbImage& image, const fs::path& path) {
  static_assert(sizeof(Rgb) == 3);
  write_png(path, image.width, image.height, PNG_FORMAT_RGB, image.data.data(), image.width * 3);
}

RgbImage read_rgb_png(const fs::path& path) {
  int w = 0, h = 0;
  const auto pixels = read_png(path, PNG_FORMAT_RGB, "RGB", w, h);
  RgbImage image(w, h);
  std::memcpy(image.data.data(), pixels.data(), pixels.size());
  return image;
}

std::string_view to_string(DepthSpace space) {
  return space == DepthSpace::depth ? "depth" : "inverse_depth";
}

DepthSpace parse_depth_space(std::string_view text) {
  if (text == "depth") return DepthSpace::depth;
  if (text == "inverse_depth") return DepthSpace::inverse_depth;
  throw DataError(fmt::format("unknown prediction space '{}' (expected depth or inverse_depth)", text));
}

Prediction read_prediction(const PredictionRecord& record) {
  return {read_pfm(record.file), record.space};
}

PredictionSidecar load_sidecar(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingFileError(path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(fmt::format("{}: invalid JSON ({})", path.string(), e.what()));
  }

  const auto require = [&](const char* key) -> const nlohmann::json& {
    if (!doc.is_object() || !doc.contains(key))
      throw FormatError(fmt::format("{}: sidecar lacks \"{}\"", path.string(), key));
    return doc.at(key);
  };
  PredictionSidecar sidecar;
  try {
    sidecar.method = require("method").get<std::string>();
    // The space must be declared; it is never guessed from the values.
    sidecar.space = parse_depth_space(require("space").get<std::string>());
    const auto& files = require("files");
    if (!files.is_object()) throw FormatError(path.string() + ": \"files\" must be an object");
    const fs::path base = path.parent_path();
    for (const auto& [scene_id, file] : files.items()) {
      fs::path p = file.get<std::string>();
      if (p.is_relative()) p = base / p;
      sidecar.records.push_back({sidecar.method, scene_id, sidecar.space, p});
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(fmt::format("{}: malformed sidecar ({})", path.string(), e.what()));
  }
  if (sidecar.method.empty()) throw FormatError(path.string() + ": empty method name");
  return sidecar;
}

void write_sidecar(const PredictionSidecar& sidecar, const fs::path& path) {
  nlohmann::json files = nlohmann::json::object();
  for (const auto& r : sidecar.records) files[r.scene_id] = r.file.generic_string();
  const nlohmann::json doc = {{"method", sidecar.method}, {"space", to_string(sidecar.space)}, {"files", files}};
  auto out = open_for_write(path);
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("sidecar write failed", path.string());
}

}  // namespace relsize
