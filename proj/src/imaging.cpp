#include "hwd/imaging.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>

#include "hwd/errors.hpp"

namespace hwd {

TextImage::TextImage(int h, int w, std::uint8_t fill)
    : height(h), width(w), pixels(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), fill) {
  if (h < 1 || w < 1) throw ContractError("image size must be positive, got " + std::to_string(h) + "x" + std::to_string(w));
}

namespace {

std::uint8_t to_gray(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

// Parses one whitespace-delimited header integer, skipping '#' comments.
int pgm_header_int(const std::vector<std::uint8_t>& b, std::size_t& pos) {
  for (;;) {
    while (pos < b.size() && std::isspace(b[pos])) ++pos;
    if (pos < b.size() && b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  if (pos >= b.size()) throw DecodeError("PGM header truncated", pos);
  if (!std::isdigit(b[pos])) throw DecodeError("malformed PGM header", pos);
  long v = 0;
  while (pos < b.size() && std::isdigit(b[pos])) {
    v = v * 10 + (b[pos] - '0');
    if (v > (1L << 24)) throw DecodeError("PGM header value too large", pos);
    ++pos;
  }
  return static_cast<int>(v);
}

}  // namespace

TextImage decode_pgm(const std::vector<std::uint8_t>& b) {
  if (b.size() < 2 || b[0] != 'P' || b[1] != '5') throw DecodeError("not a binary PGM (P5) file", 0);
  std::size_t pos = 2;
  const int w = pgm_header_int(b, pos);
  const int h = pgm_header_int(b, pos);
  const std::size_t maxval_at = pos;
  const int maxval = pgm_header_int(b, pos);
  if (w < 1 || h < 1) throw DecodeError("PGM has empty dimensions", maxval_at);
  if (maxval < 1 || maxval > 255) throw DecodeError("unsupported PGM bit depth (maxval " + std::to_string(maxval) + ")", maxval_at);
  if (pos >= b.size() || !std::isspace(b[pos])) throw DecodeError("malformed PGM header", pos);
  ++pos;
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (b.size() - pos < n) throw DecodeError("PGM pixel data truncated", b.size());
  TextImage img(h, w);
  for (std::size_t i = 0; i < n; ++i) {
    const int p = b[pos + i];
    if (p > maxval) throw DecodeError("PGM pixel exceeds maxval", pos + i);
    img.pixels[i] = maxval == 255 ? static_cast<std::uint8_t>(p) : to_gray(p * 255.0 / maxval);
  }
  return img;
}

TextImage decode_bytes(const std::vector<std::uint8_t>& bytes, const std::string& source) {
  TextImage img;
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5')
    img = decode_pgm(bytes);
  else if (bytes.size() >= 8 && bytes[0] == 0x89 && bytes[1] == 'P' && bytes[2] == 'N' && bytes[3] == 'G')
    img = decode_png(bytes);
  else
    throw DecodeError("unrecognized image format" + (source.empty() ? std::string{} : " in " + source), 0);
  img.source = source;
  return img;
}

TextImage decode(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_bytes(bytes, path.string());
  } catch (const DecodeError& e) {
    throw DecodeError(path.string() + ": " + e.what(), e.offset());
  }
}

std::vector<std::uint8_t> encode_pgm(const TextImage& image) {
  const std::string header = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.pixels.begin(), image.pixels.end());
  return out;
}

void write_pgm(const TextImage& image, const std::filesystem::path& path) {
  const auto bytes = encode_pgm(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

TextImage invert(const TextImage& image) {
  TextImage out = image;
  for (auto& p : out.pixels) p = static_cast<std::uint8_t>(255 - p);
  return out;
}

std::vector<float> resize_bilinear(const TextImage& image, int out_h, int out_w) {
  if (out_h < 1 || out_w < 1) throw ContractError("resize: target size must be positive");
  const double sy = static_cast<double>(image.height) / out_h;
  const double sx = static_cast<double>(image.width) / out_w;

  struct Tap {
    int i0, i1;
    double f;
  };
  auto taps = [](int n_out, int n_in, double scale) {
    std::vector<Tap> t(static_cast<std::size_t>(n_out));
    for (int o = 0; o < n_out; ++o) {
      const double src = std::clamp((o + 0.5) * scale - 0.5, 0.0, static_cast<double>(n_in - 1));
      const int i0 = static_cast<int>(std::floor(src));
      const int i1 = std::min(i0 + 1, n_in - 1);
      t[static_cast<std::size_t>(o)] = {i0, i1, src - i0};
    }
    return t;
  };
  const auto ty = taps(out_h, image.height, sy);
  const auto tx = taps(out_w, image.width, sx);

  std::vector<float> out(static_cast<std::size_t>(out_h) * out_w);
  for (int y = 0; y < out_h; ++y) {
    const Tap& a = ty[static_cast<std::size_t>(y)];
    for (int x = 0; x < out_w; ++x) {
      const Tap& b = tx[static_cast<std::size_t>(x)];
      const double top = (1.0 - b.f) * image.at(a.i0, b.i0) + b.f * image.at(a.i0, b.i1);
      const double bot = (1.0 - b.f) * image.at(a.i1, b.i0) + b.f * image.at(a.i1, b.i1);
      out[static_cast<std::size_t>(y) * out_w + x] = static_cast<float>((1.0 - a.f) * top + a.f * bot);
    }
  }
  return out;
}

PreparedImage prepare(const TextImage& image, Portion portion) {
  if (image.height < 1 || image.width < 1 || image.pixels.size() != static_cast<std::size_t>(image.height) * image.width)
    throw ContractError("prepare: invalid image");
  const int rw = std::max(1, static_cast<int>(std::lround(static_cast<double>(image.width) * kPreparedHeight / image.height)));
  const std::vector<float> resized = resize_bilinear(image, kPreparedHeight, rw);

  const int padded = std::max(rw, kBeginWidth);
  const int out_w = portion == Portion::Beginning ? kBeginWidth : padded;
  Tensor t({1, kPreparedHeight, out_w}, normalize_gray(255.0f));
  for (int y = 0; y < kPreparedHeight; ++y)
    for (int x = 0; x < std::min(rw, out_w); ++x)
      t.at(0, y, x) = normalize_gray(resized[static_cast<std::size_t>(y) * rw + x]);
  return {std::move(t), portion};
}

TextImage shear(const TextImage& image, double s) {
  if (!(std::abs(s) <= 1.5)) throw ContractError("shear: |s| must be <= 1.5");
  const int h = image.height, w = image.width;
  const int grow = static_cast<int>(std::ceil(std::abs(s) * (h - 1) - 1e-9));
  TextImage out(h, w + grow);
  out.writer_id = image.writer_id;
  out.source = image.source;
  const double offset = s < 0 ? grow : 0.0;
  auto px = [&](int y, int x) -> double { return (x < 0 || x >= w) ? 255.0 : image.at(y, x); };
  for (int y = 0; y < h; ++y) {
    const double shift = s * (h - 1 - y) + offset;
    for (int xo = 0; xo < out.width; ++xo) {
      const double xs = xo - shift;
      const double fl = std::floor(xs);
      const int x0 = static_cast<int>(fl);
      const double f = xs - fl;
      const double v = f == 0.0 ? px(y, x0) : (1.0 - f) * px(y, x0) + f * px(y, x0 + 1);
      out.at(y, xo) = to_gray(v);
    }
  }
  return out;
}

TextImage rotate(const TextImage& image, double degrees) {
  TextImage out = image;
  if (degrees == 0.0) return out;
  const double a = degrees * std::numbers::pi / 180.0;
  const double c = std::cos(a), s = std::sin(a);
  const double cx = (image.width - 1) / 2.0, cy = (image.height - 1) / 2.0;
  auto px = [&](int y, int x) -> double {
    return (x < 0 || x >= image.width || y < 0 || y >= image.height) ? 255.0 : image.at(y, x);
  };
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      // Inverse map from output to source.
      const double dx = x - cx, dy = y - cy;
      const double xs = c * dx + s * dy + cx;
      const double ys = -s * dx + c * dy + cy;
      const double fx = std::floor(xs), fy = std::floor(ys);
      const int x0 = static_cast<int>(fx), y0 = static_cast<int>(fy);
      const double ax = xs - fx, ay = ys - fy;
      const double top = (1 - ax) * px(y0, x0) + ax * px(y0, x0 + 1);
      const double bot = (1 - ax) * px(y0 + 1, x0) + ax * px(y0 + 1, x0 + 1);
      out.at(y, x) = to_gray((1 - ay) * top + ay * bot);
    }
  }
  return out;
}

namespace {

template <class Pick>
TextImage morph(const TextImage& image, int iterations, Pick pick, const char* what) {
  if (iterations < 0 || iterations > 8) throw ContractError(std::string(what) + ": iterations must be in [0, 8]");
  TextImage cur = image;
  TextImage tmp = image;
  const int h = image.height, w = image.width;
  for (int it = 0; it < iterations; ++it) {
    // Separable 3x3 window; out-of-image neighbours are ignored.
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        std::uint8_t v = cur.at(y, x);
        if (x > 0) v = pick(v, cur.at(y, x - 1));
        if (x + 1 < w) v = pick(v, cur.at(y, x + 1));
        tmp.at(y, x) = v;
      }
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        std::uint8_t v = tmp.at(y, x);
        if (y > 0) v = pick(v, tmp.at(y - 1, x));
        if (y + 1 < h) v = pick(v, tmp.at(y + 1, x));
        cur.at(y, x) = v;
      }
  }
  return cur;
}

}  // namespace

TextImage erode(const TextImage& image, int iterations) {
  return morph(image, iterations, [](std::uint8_t a, std::uint8_t b) { return std::max(a, b); }, "erode");
}

TextImage dilate(const TextImage& image, int iterations) {
  return morph(image, iterations, [](std::uint8_t a, std::uint8_t b) { return std::min(a, b); }, "dilate");
}

}  // namespace hwd
