#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "glyphs.hpp"

namespace hwd::detail {

// Minimal TrueType (glyf) reader: cmap format 4, simple and composite glyphs,
// horizontal metrics. Malformed data raises GenerationError.
class TrueTypeFont {
 public:
  static TrueTypeFont load(const std::filesystem::path& path);

  struct Outline {
    std::vector<std::vector<Quad>> contours;  // font units, y up
    double advance = 0.0;
  };

  // Glyph 0 (.notdef) when the code point is unmapped.
  Outline glyph(char32_t codepoint) const;
  int glyph_index(char32_t codepoint) const;

  double units_per_em() const { return units_per_em_; }
  double ascender() const { return ascender_; }
  double descender() const { return descender_; }

 private:
  std::vector<std::uint8_t> data_;
  std::size_t glyf_ = 0, loca_ = 0, hmtx_ = 0, cmap4_ = 0;
  std::size_t glyf_len_ = 0;
  int num_glyphs_ = 0, num_hmetrics_ = 0, loca_long_ = 0;
  double units_per_em_ = 1000, ascender_ = 800, descender_ = -200;

  std::uint16_t u16(std::size_t off) const;
  std::int16_t i16(std::size_t off) const { return static_cast<std::int16_t>(u16(off)); }
  std::uint32_t u32(std::size_t off) const;
  void append_glyph(int index, double a, double b, double c, double d, double dx, double dy, int depth,
                    std::vector<std::vector<Quad>>& out) const;
};

}  // namespace hwd::detail
