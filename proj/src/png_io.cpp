#include <png.h>

#include <cmath>
#include <cstring>

#include "hwd/errors.hpp"
#include "hwd/imaging.hpp"

namespace hwd {
namespace {

std::uint32_t be32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

// Walks the chunk list so structural damage is reported with a byte offset
// before libpng sees the data.
void check_png_structure(const std::vector<std::uint8_t>& b) {
  static const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  if (b.size() < 8 || std::memcmp(b.data(), sig, 8) != 0) throw DecodeError("bad PNG signature", 0);
  std::size_t pos = 8;
  bool first = true;
  for (;;) {
    if (b.size() - pos < 8) throw DecodeError("PNG truncated in chunk header", b.size());
    const std::uint32_t len = be32(&b[pos]);
    const char* type = reinterpret_cast<const char*>(&b[pos + 4]);
    if (len > 0x7FFFFFFFu) throw DecodeError("PNG chunk length out of range", pos);
    if (b.size() - pos - 8 < static_cast<std::size_t>(len) + 4) throw DecodeError("PNG truncated inside chunk", b.size());
    if (first) {
      if (std::memcmp(type, "IHDR", 4) != 0 || len != 13) throw DecodeError("PNG does not start with IHDR", pos);
      const std::uint8_t depth = b[pos + 16];
      const std::uint8_t color = b[pos + 17];
      if (depth != 8) throw DecodeError("unsupported PNG bit depth " + std::to_string(depth), pos + 16);
      // 0 gray, 2 RGB, 3 palette; alpha variants are not accepted.
      if (color != 0 && color != 2 && color != 3)
        throw DecodeError("unsupported PNG color type " + std::to_string(color), pos + 17);
      first = false;
    }
    const bool end = std::memcmp(type, "IEND", 4) == 0;
    pos += 12 + static_cast<std::size_t>(len);
    if (end) return;
  }
}

}  // namespace

TextImage decode_png(const std::vector<std::uint8_t>& bytes) {
  check_png_structure(bytes);
  const std::uint8_t color = bytes[25];

  png_image pi;
  std::memset(&pi, 0, sizeof pi);
  pi.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&pi, bytes.data(), bytes.size()))
    throw DecodeError(std::string("PNG: ") + pi.message, 8);
  const bool gray = color == 0;
  pi.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(pi));
  if (!png_image_finish_read(&pi, nullptr, buf.data(), 0, nullptr)) {
    const std::string msg = pi.message;
    png_image_free(&pi);
    throw DecodeError("PNG: " + msg, 33);
  }
  const int w = static_cast<int>(pi.width), h = static_cast<int>(pi.height);
  TextImage img(h, w);
  const std::size_t n = static_cast<std::size_t>(w) * h;
  if (gray) {
    std::memcpy(img.pixels.data(), buf.data(), n);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double luma = 0.299 * buf[3 * i] + 0.587 * buf[3 * i + 1] + 0.114 * buf[3 * i + 2];
      img.pixels[i] = static_cast<std::uint8_t>(std::min(255L, std::lround(luma)));
    }
  }
  return img;
}

std::vector<std::uint8_t> encode_png(int width, int height, int channels, const std::vector<std::uint8_t>& pixels) {
  if (channels != 1 && channels != 3) throw ContractError("encode_png: channels must be 1 or 3");
  if (pixels.size() != static_cast<std::size_t>(width) * height * channels)
    throw ContractError("encode_png: pixel buffer size mismatch");
  png_image pi;
  std::memset(&pi, 0, sizeof pi);
  pi.version = PNG_IMAGE_VERSION;
  pi.width = static_cast<png_uint_32>(width);
  pi.height = static_cast<png_uint_32>(height);
  pi.format = channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&pi, nullptr, &size, 0, pixels.data(), 0, nullptr))
    throw IoError(std::string("PNG encode failed: ") + pi.message);
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&pi, out.data(), &size, 0, pixels.data(), 0, nullptr))
    throw IoError(std::string("PNG encode failed: ") + pi.message);
  out.resize(size);
  return out;
}

}  // namespace hwd
