#pragma once

#include <cstdint>
#include <vector>

namespace hwd::detail {

struct Point {
  double x = 0.0, y = 0.0;
};

struct Quad {
  Point p0, p1, p2;
  Point at(double t) const {
    const double u = 1.0 - t;
    return {u * u * p0.x + 2 * u * t * p1.x + t * t * p2.x, u * u * p0.y + 2 * u * t * p1.y + t * t * p2.y};
  }
};

struct Segment {
  Point a, b;
};

// Letter skeleton in x-height units: baseline y = 0, x-height y = 1, y up.
struct GlyphSkeleton {
  double width = 0.7;
  std::vector<Quad> strokes;
  Point entry{0.0, 0.3}, exit{0.7, 0.3};
};

// Fixed lowercase alphabet shared by every procedural style.
const GlyphSkeleton& base_skeleton(char lower);

std::vector<Segment> flatten(const Quad& q, int steps);

// Anti-aliased coverage buffer in [0, 1].
class Coverage {
 public:
  Coverage(int h, int w) : h_(h), w_(w), c_(static_cast<std::size_t>(h) * w, 0.0f) {}
  int height() const { return h_; }
  int width() const { return w_; }
  float at(int y, int x) const { return c_[static_cast<std::size_t>(y) * w_ + x]; }

  // Round-capped line of the given radius (pixel centres at +0.5).
  void stroke(const Segment& s, double radius);
  // Nonzero-winding fill of closed polygons given as edges, 4x4 supersampled.
  void fill(const std::vector<Segment>& edges);

 private:
  int h_, w_;
  std::vector<float> c_;
};

}  // namespace hwd::detail
