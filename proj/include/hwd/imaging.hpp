#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hwd/tensor.hpp"

namespace hwd {

// 8-bit grayscale text image, ink dark on light background.
struct TextImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> pixels;  // row-major, height * width
  std::string writer_id = "unlabeled";
  std::string source;

  TextImage() = default;
  TextImage(int h, int w, std::uint8_t fill = 255);

  std::uint8_t at(int y, int x) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int y, int x) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

enum class Portion { Whole, Beginning };

inline constexpr int kPreparedHeight = 32;
inline constexpr int kBeginWidth = 32;

struct PreparedImage {
  Tensor tensor;  // [1, 32, W], values in [-1, 1]
  Portion portion = Portion::Whole;
};

// PGM (P5, maxval <= 255) or 8-bit PNG (gray, RGB or palette). RGB is reduced
// with round(0.299 R + 0.587 G + 0.114 B). Throws DecodeError.
TextImage decode(const std::filesystem::path& path);
TextImage decode_bytes(const std::vector<std::uint8_t>& bytes, const std::string& source = {});
TextImage decode_pgm(const std::vector<std::uint8_t>& bytes);
TextImage decode_png(const std::vector<std::uint8_t>& bytes);

void write_pgm(const TextImage& image, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_pgm(const TextImage& image);
// channels 1 (gray) or 3 (RGB), interleaved rows.
std::vector<std::uint8_t> encode_png(int width, int height, int channels, const std::vector<std::uint8_t>& pixels);

TextImage invert(const TextImage& image);

// Gray level p -> (p/255 - 0.5) / 0.5.
inline constexpr float normalize_gray(float p) { return (p / 255.0f - 0.5f) / 0.5f; }

// Bilinear resize to height 32 keeping the aspect ratio (width round(W*32/H)),
// white right-padding up to width 32, then for Beginning the first 32 columns.
PreparedImage prepare(const TextImage& image, Portion portion);

// Bilinear resize of gray levels (half-pixel centers, edge clamped).
std::vector<float> resize_bilinear(const TextImage& image, int out_h, int out_w);

// Horizontal shear x' = x + s (H-1-y); width grows by ceil(|s| (H-1)), new
// pixels white. Requires |s| <= 1.5.
TextImage shear(const TextImage& image, double s);
// Rotation about the image centre, same size, white fill.
TextImage rotate(const TextImage& image, double degrees);

// 3x3 grey morphology with dark ink: erode takes the neighbourhood maximum
// (thins strokes), dilate the minimum (thickens them). iterations in [0, 8].
TextImage erode(const TextImage& image, int iterations);
TextImage dilate(const TextImage& image, int iterations);

}  // namespace hwd
