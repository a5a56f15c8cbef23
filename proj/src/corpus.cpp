#include "hwd/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <memory>
#include <mutex>

#include "glyphs.hpp"
#include "hwd/errors.hpp"
#include "truetype.hpp"

namespace hwd {
namespace {

using detail::Point;
using detail::Quad;
using detail::Segment;

double uni(Rng& r, double a, double b) { return a == b ? a : std::uniform_real_distribution<double>(a, b)(r); }
double gauss(Rng& r, double sigma) { return sigma == 0.0 ? 0.0 : std::normal_distribution<double>(0.0, sigma)(r); }

constexpr double kAscent = 1.75;
constexpr double kDescent = 0.75;

std::shared_ptr<const detail::TrueTypeFont> cached_font(const std::filesystem::path& path) {
  static std::mutex mu;
  static std::map<std::filesystem::path, std::shared_ptr<const detail::TrueTypeFont>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(path);
  if (it != cache.end()) return it->second;
  auto f = std::make_shared<const detail::TrueTypeFont>(detail::TrueTypeFont::load(path));
  cache.emplace(path, f);
  return f;
}

// Background, ink and noise levels for one rendered word.
struct Sheet {
  double level, gradient, angle, noise, ink;
};

Sheet draw_sheet(Rng& rng) {
  Sheet p;
  p.level = uni(rng, 200.0, 245.0);
  p.gradient = uni(rng, 0.0, 0.08);
  p.angle = uni(rng, 0.0, 6.283185307179586);
  p.noise = uni(rng, 1.0, 3.0);
  p.ink = uni(rng, 15.0, 80.0);
  return p;
}

TextImage compose(const detail::Coverage& cov, const Sheet& sheet, Rng& rng) {
  const int h = cov.height(), w = cov.width();
  TextImage img(h, w);
  const double cx = std::cos(sheet.angle), sy = std::sin(sheet.angle);
  std::normal_distribution<double> noise(0.0, sheet.noise);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double g = 1.0 + sheet.gradient * ((static_cast<double>(x) / w) * cx + (static_cast<double>(y) / h) * sy - 0.5);
      const double bg = sheet.level * g;
      const double c = cov.at(y, x);
      const double v = bg * (1.0 - c) + sheet.ink * c + noise(rng);
      img.at(y, x) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return img;
}

struct Layout {
  double x_h, radius, margin_x, margin_top, margin_bottom;
  int height;
};

Layout draw_layout(Rng& rng, double thickness_rel) {
  Layout l;
  l.x_h = uni(rng, 14.0, 26.0);
  l.radius = std::max(0.5, thickness_rel * l.x_h / 2.0);
  l.margin_x = uni(rng, 0.2, 0.5) * l.x_h;
  l.margin_top = uni(rng, 0.1, 0.35) * l.x_h;
  l.margin_bottom = uni(rng, 0.1, 0.35) * l.x_h;
  const double content = (kAscent + kDescent) * l.x_h + 2.0 * l.radius;
  l.height = static_cast<int>(std::ceil(content + l.margin_top + l.margin_bottom));
  if (l.height < 40) {
    l.margin_bottom += 40 - l.height;
    l.height = 40;
  }
  l.height = std::min(l.height, 96);
  return l;
}

// Maps points in x-height units (y up, baseline 0) to pixels.
struct PixelMap {
  double scale, x0, baseline;
  Point operator()(Point p) const { return {x0 + p.x * scale, baseline - p.y * scale}; }
};

int canvas_width(double min_x, double max_x, const Layout& l, PixelMap& map) {
  map.x0 = l.margin_x + l.radius - min_x * l.x_h;
  return std::max(1, static_cast<int>(std::ceil((max_x - min_x) * l.x_h + 2.0 * (l.margin_x + l.radius))));
}

Point jittered(Point p, double sigma, Rng& r) { return {p.x + gauss(r, sigma), p.y + gauss(r, sigma)}; }

TextImage render_procedural(const std::string& text, const StyleClass& style, Rng& rng) {
  const StrokeParams& sp = style.params;
  for (char c : text)
    if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == ' '))
      throw ContractError(std::string("procedural styles render ASCII letters only, got '") + c + "'");

  const double thickness = uni(rng, sp.thickness_min, sp.thickness_max);
  const double slant = uni(rng, sp.slant_min, sp.slant_max);
  const double curvature = uni(rng, sp.curvature_min, sp.curvature_max);
  const Layout layout = draw_layout(rng, thickness);
  const Sheet sheet = draw_sheet(rng);

  std::vector<Quad> quads;
  double pen = 0.0;
  bool has_prev = false;
  Point prev_exit;
  for (char c : text) {
    if (c == ' ') {
      pen += 0.5 * sp.width_scale + sp.spacing;
      has_prev = false;
      continue;
    }
    const bool upper = c >= 'A' && c <= 'Z';
    const char lower = upper ? static_cast<char>(c - 'A' + 'a') : c;
    const detail::GlyphSkeleton& base = detail::base_skeleton(lower);
    Rng shape = make_rng(style.seed, {2, static_cast<std::uint64_t>(lower)});
    const double sx = (upper ? 1.1 : 1.0) * sp.width_scale, syy = upper ? 1.45 : 1.0;
    const double lift = gauss(rng, sp.baseline_jitter);
    auto place = [&](Point p, double sigma) {
      p = jittered(jittered(p, sp.shape_jitter, shape), sigma, rng);
      const double gy = p.y * syy;
      return Point{pen + p.x * sx + slant * gy, gy + lift};
    };
    const Point entry = place(base.entry, 0.0);
    for (const Quad& q : base.strokes) {
      Quad t{place(q.p0, 0.02), place(q.p1, 0.02), place(q.p2, 0.02)};
      const double dx = t.p2.x - t.p0.x, dy = t.p2.y - t.p0.y;
      t.p1.x += -dy * curvature;
      t.p1.y += dx * curvature;
      quads.push_back(t);
    }
    if (sp.cursive && has_prev)
      quads.push_back({prev_exit, {(prev_exit.x + entry.x) / 2, std::min(prev_exit.y, entry.y) - 0.15}, entry});
    prev_exit = place(base.exit, 0.0);
    has_prev = true;
    pen += base.width * sx + sp.spacing + uni(rng, -0.04, 0.04);
  }

  double min_x = 0.0, max_x = std::max(pen, 0.5);
  for (const Quad& q : quads)
    for (const Point& p : {q.p0, q.p1, q.p2}) {
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
    }
  PixelMap map{layout.x_h, 0.0, layout.margin_top + layout.radius + kAscent * layout.x_h};
  const int width = canvas_width(min_x, max_x, layout, map);
  detail::Coverage cov(layout.height, width);
  for (const Quad& q : quads) {
    const Quad pq{map(q.p0), map(q.p1), map(q.p2)};
    const double len = std::hypot(pq.p1.x - pq.p0.x, pq.p1.y - pq.p0.y) + std::hypot(pq.p2.x - pq.p1.x, pq.p2.y - pq.p1.y);
    for (const Segment& s : detail::flatten(pq, std::max(4, static_cast<int>(len / 2.0)))) cov.stroke(s, layout.radius);
  }
  return compose(cov, sheet, rng);
}

TextImage render_font(const std::string& text, const StyleClass& style, Rng& rng) {
  std::shared_ptr<const detail::TrueTypeFont> font;
  try {
    font = cached_font(style.font_path);
  } catch (const GenerationError&) {
    throw;
  } catch (const std::exception& e) {
    throw GenerationError("font " + style.font_path.string() + ": " + e.what());
  }
  const StrokeParams& sp = style.params;
  const double slant = uni(rng, sp.slant_min, sp.slant_max);
  const Layout layout = draw_layout(rng, 0.0);
  const Sheet sheet = draw_sheet(rng);
  const double units = (kAscent + kDescent) / (font->ascender() - font->descender());

  std::vector<std::vector<Quad>> contours;
  double pen = 0.0;
  for (unsigned char c : text) {
    const auto outline = font->glyph(c);
    const double lift = gauss(rng, sp.baseline_jitter);
    for (const auto& contour : outline.contours) {
      std::vector<Quad> placed;
      for (const Quad& q : contour) {
        auto xf = [&](Point p) {
          const double gy = p.y * units;
          return Point{pen + p.x * units * sp.width_scale + slant * gy, gy + lift};
        };
        placed.push_back({xf(q.p0), xf(q.p1), xf(q.p2)});
      }
      contours.push_back(std::move(placed));
    }
    pen += outline.advance * units * sp.width_scale;
  }
  double min_x = 0.0, max_x = std::max(pen, 0.5);
  for (const auto& contour : contours)
    for (const Quad& q : contour)
      for (const Point& p : {q.p0, q.p1, q.p2}) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
      }
  PixelMap map{layout.x_h, 0.0, layout.margin_top + layout.radius + kAscent * layout.x_h};
  const int width = canvas_width(min_x, max_x, layout, map);
  std::vector<Segment> edges;
  for (const auto& contour : contours)
    for (const Quad& q : contour)
      for (const Segment& s : detail::flatten({map(q.p0), map(q.p1), map(q.p2)}, 6)) edges.push_back(s);
  detail::Coverage cov(layout.height, width);
  cov.fill(edges);
  return compose(cov, sheet, rng);
}

}  // namespace

StyleClass procedural_style(int id, std::uint64_t seed) {
  Rng r = make_rng(seed, {1});
  StyleClass s;
  s.id = id;
  s.kind = StyleKind::Procedural;
  s.seed = seed;
  StrokeParams& p = s.params;
  const double t = uni(r, 0.07, 0.24);
  p.thickness_min = t * 0.88;
  p.thickness_max = t * 1.12;
  const double sl = uni(r, -0.3, 0.45);
  p.slant_min = sl - 0.03;
  p.slant_max = sl + 0.03;
  const double cu = uni(r, -0.35, 0.35);
  p.curvature_min = cu - 0.04;
  p.curvature_max = cu + 0.04;
  p.baseline_jitter = uni(r, 0.0, 0.1);
  p.width_scale = uni(r, 0.75, 1.35);
  p.spacing = uni(r, 0.05, 0.45);
  p.shape_jitter = uni(r, 0.04, 0.16);
  p.cursive = (r() & 1u) != 0;
  return s;
}

StyleClass vector_font_style(int id, const std::filesystem::path& font, std::uint64_t seed) {
  StyleClass s = procedural_style(id, seed);
  s.kind = StyleKind::VectorFont;
  s.font_path = font;
  s.params.width_scale = std::clamp(s.params.width_scale, 0.85, 1.15);
  return s;
}

TextImage render_word(const std::string& text, const StyleClass& style, Rng& rng) {
  if (text.empty()) throw ContractError("render_word: text must be nonempty");
  return style.kind == StyleKind::Procedural ? render_procedural(text, style, rng) : render_font(text, style, rng);
}

TextImage distort(const TextImage& image, Rng& rng, const DistortMagnitudes& m) {
  const double angle = uni(rng, -m.rotation_deg, m.rotation_deg);
  const double s = uni(rng, -m.shear, m.shear);
  const double b = uni(rng, -m.brightness, m.brightness);
  const double c = uni(rng, -m.contrast, m.contrast);
  const double sigma = uni(rng, 0.0, m.noise_sigma);

  TextImage out = shear(rotate(image, angle), s);
  if (b != 0.0 || c != 0.0 || sigma != 0.0) {
    std::normal_distribution<double> noise(0.0, sigma > 0.0 ? sigma : 1.0);
    for (auto& p : out.pixels) {
      double v = ((p - 128.0) * (1.0 + c) + 128.0) * (1.0 + b);
      if (sigma > 0.0) v += noise(rng);
      p = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  out.writer_id = image.writer_id;
  out.source = image.source;
  return out;
}

std::uint64_t corpus_entry_seed(std::uint64_t master, int style, int index) {
  return derive_seed(master, {0xE27u, static_cast<std::uint64_t>(style), static_cast<std::uint64_t>(index)});
}

Corpus generate_corpus(const CorpusConfig& cfg) {
  if (cfg.num_styles < 2) throw ContractError("generate_corpus: num_styles must be >= 2");
  if (cfg.words_per_style < 1) throw ContractError("generate_corpus: words_per_style must be >= 1");
  if (cfg.out_dir.empty()) throw ContractError("generate_corpus: out_dir is empty");
  const std::vector<std::string>& words = cfg.word_list.empty() ? default_word_list() : cfg.word_list;
  for (const auto& w : words)
    if (w.empty() || w.find_first_of("\t\r\n") != std::string::npos)
      throw ContractError("generate_corpus: word list entries must be nonempty single-line strings");

  Corpus corpus;
  for (int i = 0; i < cfg.num_styles; ++i) {
    const std::uint64_t ss = derive_seed(cfg.seed, {0x57u, static_cast<std::uint64_t>(i)});
    corpus.styles.push_back(static_cast<std::size_t>(i) < cfg.fonts.size() ? vector_font_style(i, cfg.fonts[static_cast<std::size_t>(i)], ss)
                                                                             : procedural_style(i, ss));
  }

  try {
    for (int i = 0; i < cfg.num_styles; ++i) {
      char dir[32];
      std::snprintf(dir, sizeof dir, "s%03d", i);
      std::filesystem::create_directories(cfg.out_dir / "images" / dir);
    }
  } catch (const std::filesystem::filesystem_error& e) {
    throw IoError("cannot create corpus directory under " + cfg.out_dir.string() + ": " + e.what());
  }

  const std::size_t n = static_cast<std::size_t>(cfg.num_styles) * static_cast<std::size_t>(cfg.words_per_style);
  Manifest& m = corpus.manifest;
  m.seed = cfg.seed;
  m.base_dir = cfg.out_dir;
  m.entries.resize(n);
  corpus.entry_seeds.resize(n);
  std::vector<std::exception_ptr> errors(n);

#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
    const std::size_t idx = static_cast<std::size_t>(k);
    const int style = static_cast<int>(idx / static_cast<std::size_t>(cfg.words_per_style));
    const int i = static_cast<int>(idx % static_cast<std::size_t>(cfg.words_per_style));
    try {
      const std::uint64_t seed = corpus_entry_seed(cfg.seed, style, i);
      Rng rng(seed);
      const std::string& word = words[rng() % words.size()];
      TextImage img = distort(render_word(word, corpus.styles[static_cast<std::size_t>(style)], rng), rng, cfg.distortion);
      char rel[64];
      std::snprintf(rel, sizeof rel, "images/s%03d/%05d.pgm", style, i);
      write_pgm(img, cfg.out_dir / rel);
      m.entries[idx] = {rel, std::to_string(style), word};
      corpus.entry_seeds[idx] = seed;
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  TrainValSplit split = split_train_val(m, cfg.val_fraction);
  corpus.train = std::move(split.train);
  corpus.val = std::move(split.val);
  write_manifest(m, cfg.out_dir / "manifest.tsv");
  write_manifest(corpus.train, cfg.out_dir / "train.tsv");
  write_manifest(corpus.val, cfg.out_dir / "val.tsv");
  return corpus;
}

}  // namespace hwd
