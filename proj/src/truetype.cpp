#include "truetype.hpp"

#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "hwd/errors.hpp"

namespace hwd::detail {

std::uint16_t TrueTypeFont::u16(std::size_t off) const {
  if (off + 2 > data_.size()) throw GenerationError("font data truncated at byte " + std::to_string(off));
  return static_cast<std::uint16_t>((data_[off] << 8) | data_[off + 1]);
}

std::uint32_t TrueTypeFont::u32(std::size_t off) const {
  return (static_cast<std::uint32_t>(u16(off)) << 16) | u16(off + 2);
}

TrueTypeFont TrueTypeFont::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GenerationError("cannot open font " + path.string());
  TrueTypeFont f;
  f.data_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  try {
    const std::uint32_t version = f.u32(0);
    if (version != 0x00010000u && version != 0x74727565u)
      throw GenerationError("not a TrueType outline font");
    const int num_tables = f.u16(4);
    std::size_t head = 0, maxp = 0, hhea = 0, cmap = 0;
    for (int i = 0; i < num_tables; ++i) {
      const std::size_t rec = 12 + 16 * static_cast<std::size_t>(i);
      if (rec + 16 > f.data_.size()) throw GenerationError("table directory truncated");
      const std::string tag(reinterpret_cast<const char*>(&f.data_[rec]), 4);
      const std::size_t off = f.u32(rec + 8), len = f.u32(rec + 12);
      if (off + len > f.data_.size()) throw GenerationError("table '" + tag + "' out of range");
      if (tag == "head") head = off;
      else if (tag == "maxp") maxp = off;
      else if (tag == "hhea") hhea = off;
      else if (tag == "cmap") cmap = off;
      else if (tag == "glyf") f.glyf_ = off, f.glyf_len_ = len;
      else if (tag == "loca") f.loca_ = off;
      else if (tag == "hmtx") f.hmtx_ = off;
    }
    if (!head || !maxp || !hhea || !cmap || !f.glyf_ || !f.loca_ || !f.hmtx_)
      throw GenerationError("missing required TrueType table");
    f.units_per_em_ = f.u16(head + 18);
    if (f.units_per_em_ <= 0) throw GenerationError("bad unitsPerEm");
    f.loca_long_ = f.i16(head + 50);
    f.num_glyphs_ = f.u16(maxp + 4);
    f.ascender_ = f.i16(hhea + 4);
    f.descender_ = f.i16(hhea + 6);
    f.num_hmetrics_ = f.u16(hhea + 34);
    if (f.num_hmetrics_ < 1) throw GenerationError("no horizontal metrics");

    const int subtables = f.u16(cmap + 2);
    for (int i = 0; i < subtables && !f.cmap4_; ++i) {
      const std::size_t rec = cmap + 4 + 8 * static_cast<std::size_t>(i);
      const int platform = f.u16(rec), encoding = f.u16(rec + 2);
      const std::size_t off = cmap + f.u32(rec + 4);
      if ((platform == 3 && encoding == 1) || platform == 0)
        if (f.u16(off) == 4) f.cmap4_ = off;
    }
    if (!f.cmap4_) throw GenerationError("no Unicode BMP (format 4) cmap");
  } catch (const GenerationError& e) {
    throw GenerationError(path.string() + ": " + e.what());
  }
  return f;
}

int TrueTypeFont::glyph_index(char32_t c) const {
  if (c > 0xFFFF) return 0;
  const std::size_t t = cmap4_;
  const int seg2 = u16(t + 6);
  const std::size_t ends = t + 14, starts = ends + seg2 + 2, deltas = starts + seg2, ranges = deltas + seg2;
  for (int s = 0; s < seg2; s += 2) {
    if (u16(ends + s) < c) continue;
    const std::uint16_t start = u16(starts + s);
    if (start > c) return 0;
    const std::uint16_t delta = u16(deltas + s);
    const std::uint16_t ro = u16(ranges + s);
    if (ro == 0) return (c + delta) & 0xFFFF;
    const std::uint16_t g = u16(ranges + s + ro + 2 * (c - start));
    return g == 0 ? 0 : (g + delta) & 0xFFFF;
  }
  return 0;
}

void TrueTypeFont::append_glyph(int index, double a, double b, double c, double d, double dx, double dy, int depth,
                                std::vector<std::vector<Quad>>& out) const {
  if (depth > 8) throw GenerationError("composite glyph nesting too deep");
  if (index < 0 || index >= num_glyphs_) throw GenerationError("glyph index out of range");
  const std::size_t i = static_cast<std::size_t>(index);
  const std::size_t o0 = loca_long_ ? u32(loca_ + 4 * i) : 2u * u16(loca_ + 2 * i);
  const std::size_t o1 = loca_long_ ? u32(loca_ + 4 * i + 4) : 2u * u16(loca_ + 2 * i + 2);
  if (o1 <= o0) return;
  if (o1 > glyf_len_) throw GenerationError("glyph data out of range");
  const std::size_t g = glyf_ + o0;
  const int contours = i16(g);
  auto xf = [&](double x, double y) { return Point{a * x + c * y + dx, b * x + d * y + dy}; };

  if (contours >= 0) {
    std::vector<int> ends(static_cast<std::size_t>(contours));
    for (int k = 0; k < contours; ++k) ends[static_cast<std::size_t>(k)] = u16(g + 10 + 2 * static_cast<std::size_t>(k));
    const int npts = contours ? ends.back() + 1 : 0;
    std::size_t p = g + 10 + 2 * static_cast<std::size_t>(contours);
    p += 2 + u16(p);  // skip instructions
    std::vector<std::uint8_t> flags;
    while (static_cast<int>(flags.size()) < npts) {
      if (p >= data_.size()) throw GenerationError("glyph flags truncated");
      const std::uint8_t fl = data_[p++];
      flags.push_back(fl);
      if (fl & 8) {
        if (p >= data_.size()) throw GenerationError("glyph flags truncated");
        for (int r = data_[p++]; r > 0; --r) flags.push_back(fl);
      }
    }
    flags.resize(static_cast<std::size_t>(npts));
    auto coords = [&](std::uint8_t short_bit, std::uint8_t same_bit) {
      std::vector<int> v(static_cast<std::size_t>(npts));
      int acc = 0;
      for (int k = 0; k < npts; ++k) {
        const std::uint8_t fl = flags[static_cast<std::size_t>(k)];
        if (fl & short_bit) {
          if (p >= data_.size()) throw GenerationError("glyph coordinates truncated");
          const int dv = data_[p++];
          acc += (fl & same_bit) ? dv : -dv;
        } else if (!(fl & same_bit)) {
          acc += i16(p);
          p += 2;
        }
        v[static_cast<std::size_t>(k)] = acc;
      }
      return v;
    };
    const auto xs = coords(2, 16);
    const auto ys = coords(4, 32);

    int first = 0;
    for (int k = 0; k < contours; ++k) {
      const int last = ends[static_cast<std::size_t>(k)];
      if (last < first || last >= npts) throw GenerationError("bad contour end point");
      const int n = last - first + 1;
      auto pt = [&](int j) { return Point{static_cast<double>(xs[static_cast<std::size_t>(first + j)]), static_cast<double>(ys[static_cast<std::size_t>(first + j)])}; };
      auto on = [&](int j) { return (flags[static_cast<std::size_t>(first + j)] & 1) != 0; };
      auto mid = [](Point u, Point v) { return Point{(u.x + v.x) / 2, (u.y + v.y) / 2}; };
      // Start from an on-curve point, or the implied midpoint of two off-curve points.
      int s = 0;
      while (s < n && !on(s)) ++s;
      std::vector<std::pair<Point, bool>> seq;
      Point start;
      if (s < n) {
        start = pt(s);
        for (int j = 1; j < n; ++j) seq.emplace_back(pt((s + j) % n), on((s + j) % n));
      } else {
        start = mid(pt(n - 1), pt(0));
        for (int j = 0; j < n; ++j) seq.emplace_back(pt(j), false);
      }
      seq.emplace_back(start, true);
      std::vector<Quad> quads;
      Point cur = start, ctrl;
      bool have_ctrl = false;
      for (const auto& [q, q_on] : seq) {
        if (q_on) {
          quads.push_back(have_ctrl ? Quad{cur, ctrl, q} : Quad{cur, mid(cur, q), q});
          cur = q;
          have_ctrl = false;
        } else if (have_ctrl) {
          const Point m = mid(ctrl, q);
          quads.push_back({cur, ctrl, m});
          cur = m;
          ctrl = q;
        } else {
          ctrl = q;
          have_ctrl = true;
        }
      }
      for (Quad& qd : quads) {
        qd.p0 = xf(qd.p0.x, qd.p0.y);
        qd.p1 = xf(qd.p1.x, qd.p1.y);
        qd.p2 = xf(qd.p2.x, qd.p2.y);
      }
      if (!quads.empty()) out.push_back(std::move(quads));
      first = last + 1;
    }
    return;
  }

  std::size_t p = g + 10;
  for (;;) {
    const std::uint16_t fl = u16(p);
    const int child = u16(p + 2);
    p += 4;
    double e, f;
    if (fl & 1) {
      e = i16(p), f = i16(p + 2);
      p += 4;
    } else {
      if (p + 2 > data_.size()) throw GenerationError("composite glyph truncated");
      e = static_cast<std::int8_t>(data_[p]), f = static_cast<std::int8_t>(data_[p + 1]);
      p += 2;
    }
    if (!(fl & 2)) e = f = 0;  // point-matched placement is not supported
    double ca = 1, cb = 0, cc = 0, cd = 1;
    auto f2dot14 = [&](std::size_t off) { return i16(off) / 16384.0; };
    if (fl & 8) {
      ca = cd = f2dot14(p);
      p += 2;
    } else if (fl & 0x40) {
      ca = f2dot14(p), cd = f2dot14(p + 2);
      p += 4;
    } else if (fl & 0x80) {
      ca = f2dot14(p), cb = f2dot14(p + 2), cc = f2dot14(p + 4), cd = f2dot14(p + 6);
      p += 8;
    }
    // Compose child transform with ours.
    append_glyph(child, a * ca + c * cb, b * ca + d * cb, a * cc + c * cd, b * cc + d * cd, a * e + c * f + dx,
                 b * e + d * f + dy, depth + 1, out);
    if (!(fl & 0x20)) break;
  }
}

TrueTypeFont::Outline TrueTypeFont::glyph(char32_t codepoint) const {
  const int idx = glyph_index(codepoint);
  Outline o;
  append_glyph(idx, 1, 0, 0, 1, 0, 0, 0, o.contours);
  const int m = std::min(idx, num_hmetrics_ - 1);
  o.advance = u16(hmtx_ + 4 * static_cast<std::size_t>(m));
  return o;
}

}  // namespace hwd::detail
