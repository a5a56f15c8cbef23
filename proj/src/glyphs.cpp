#include "glyphs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string_view>

namespace hwd::detail {
namespace {

constexpr std::uint64_t kAlphabetSeed = 0x48574447u;

bool in(std::string_view set, char c) { return set.find(c) != std::string_view::npos; }

GlyphSkeleton make_skeleton(char c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto between = [&](double a, double b) { return a + (b - a) * u(rng); };

  GlyphSkeleton g;
  g.width = in("ijlt", c) ? 0.35 : in("mw", c) ? 1.1 : 0.7;
  g.width += between(-0.05, 0.05);
  const double w = g.width;

  Point cur{between(0.05, 0.3) * w, between(0.6, 1.0)};
  if (in("bdfhklt", c)) {
    const double x = between(0.1, 0.5) * w;
    g.strokes.push_back({{x, 1.75}, {x + between(-0.1, 0.1), 0.9}, {x + between(-0.05, 0.05), 0.0}});
    cur = g.strokes.back().p2;
  } else if (in("gjpqy", c)) {
    const double x = between(0.4, 0.9) * w;
    g.strokes.push_back({{x, 1.0}, {x + between(-0.1, 0.1), 0.0}, {x - between(0.1, 0.4), -0.75}});
    cur = g.strokes.front().p0;
  }
  const int extra = 2 + static_cast<int>(rng() % 2);
  for (int i = 0; i < extra; ++i) {
    Quad q;
    q.p0 = u(rng) < 0.65 ? cur : Point{between(0.0, w), between(0.0, 1.0)};
    q.p2 = {between(0.0, w), between(0.0, 1.0)};
    q.p1 = {between(-0.2, w + 0.2), between(-0.2, 1.2)};
    g.strokes.push_back(q);
    cur = q.p2;
  }
  g.entry = {0.0, between(0.1, 0.4)};
  g.exit = {w, between(0.1, 0.4)};
  return g;
}

}  // namespace

const GlyphSkeleton& base_skeleton(char lower) {
  static const std::array<GlyphSkeleton, 26> table = [] {
    std::array<GlyphSkeleton, 26> t;
    std::mt19937_64 rng(kAlphabetSeed);
    for (int i = 0; i < 26; ++i) t[static_cast<std::size_t>(i)] = make_skeleton(static_cast<char>('a' + i), rng);
    return t;
  }();
  return table[static_cast<std::size_t>(lower - 'a')];
}

std::vector<Segment> flatten(const Quad& q, int steps) {
  std::vector<Segment> out;
  Point prev = q.p0;
  for (int i = 1; i <= steps; ++i) {
    const Point p = q.at(static_cast<double>(i) / steps);
    out.push_back({prev, p});
    prev = p;
  }
  return out;
}

void Coverage::stroke(const Segment& s, double radius) {
  const double pad = radius + 1.0;
  const int x0 = std::max(0, static_cast<int>(std::floor(std::min(s.a.x, s.b.x) - pad)));
  const int x1 = std::min(w_ - 1, static_cast<int>(std::ceil(std::max(s.a.x, s.b.x) + pad)));
  const int y0 = std::max(0, static_cast<int>(std::floor(std::min(s.a.y, s.b.y) - pad)));
  const int y1 = std::min(h_ - 1, static_cast<int>(std::ceil(std::max(s.a.y, s.b.y) + pad)));
  const double dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
  const double len2 = dx * dx + dy * dy;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double px = x + 0.5 - s.a.x, py = y + 0.5 - s.a.y;
      const double t = len2 > 0.0 ? std::clamp((px * dx + py * dy) / len2, 0.0, 1.0) : 0.0;
      const double ex = px - t * dx, ey = py - t * dy;
      const double cov = std::clamp(radius + 0.5 - std::sqrt(ex * ex + ey * ey), 0.0, 1.0);
      float& c = c_[static_cast<std::size_t>(y) * w_ + x];
      c = std::max(c, static_cast<float>(cov));
    }
  }
}

void Coverage::fill(const std::vector<Segment>& edges) {
  constexpr int kSub = 4;
  std::vector<std::pair<double, int>> xs;
  std::vector<double> row(static_cast<std::size_t>(w_));
  for (int y = 0; y < h_; ++y) {
    std::fill(row.begin(), row.end(), 0.0);
    for (int sy = 0; sy < kSub; ++sy) {
      const double yy = y + (sy + 0.5) / kSub;
      xs.clear();
      for (const Segment& e : edges) {
        if (e.a.y == e.b.y) continue;
        const bool up = e.a.y < e.b.y;
        const double lo = up ? e.a.y : e.b.y, hi = up ? e.b.y : e.a.y;
        if (yy < lo || yy >= hi) continue;
        const double t = (yy - e.a.y) / (e.b.y - e.a.y);
        xs.emplace_back(e.a.x + t * (e.b.x - e.a.x), up ? 1 : -1);
      }
      std::sort(xs.begin(), xs.end());
      int wind = 0;
      for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        wind += xs[i].second;
        if (wind == 0) continue;
        // Horizontal coverage of [xa, xb) distributed over pixel cells.
        const double xa = std::clamp(xs[i].first, 0.0, static_cast<double>(w_));
        const double xb = std::clamp(xs[i + 1].first, 0.0, static_cast<double>(w_));
        for (int x = static_cast<int>(xa); x < w_ && x < xb; ++x)
          row[static_cast<std::size_t>(x)] += (std::min(xb, x + 1.0) - std::max(xa, static_cast<double>(x))) / kSub;
      }
    }
    for (int x = 0; x < w_; ++x) {
      float& c = c_[static_cast<std::size_t>(y) * w_ + x];
      c = std::max(c, static_cast<float>(std::min(1.0, row[static_cast<std::size_t>(x)])));
    }
  }
}

}  // namespace hwd::detail
