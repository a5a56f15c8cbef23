#include <doctest.h>

#include <cmath>
#include <random>

#include "hwd/errors.hpp"
#include "hwd/imaging.hpp"

using namespace hwd;

namespace {

TextImage random_image(int h, int w, unsigned seed) {
  TextImage im(h, w);
  std::mt19937 g(seed);
  for (auto& p : im.pixels) p = static_cast<std::uint8_t>(g() % 256);
  return im;
}

TextImage stroke_image() {
  TextImage im(20, 30);
  for (int y = 5; y < 15; ++y)
    for (int x = 8; x < 12; ++x) im.at(y, x) = 0;
  for (int x = 8; x < 25; ++x) im.at(10, x) = 40;
  return im;
}

}  // namespace

TEST_CASE("decode: binary PGM") {
  const std::string header = "P5\n# comment\n2 2\n255\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  for (int v : {0, 128, 255, 64}) bytes.push_back(static_cast<std::uint8_t>(v));
  const TextImage im = decode_bytes(bytes);
  CHECK(im.height == 2);
  CHECK(im.width == 2);
  CHECK(im.pixels == std::vector<std::uint8_t>{0, 128, 255, 64});
  CHECK(decode_pgm(encode_pgm(im)).pixels == im.pixels);
  bytes.pop_back();
  CHECK_THROWS_AS(decode_bytes(bytes), DecodeError);
  CHECK_THROWS_AS(decode_bytes({'P', '5', '\n', '2'}), DecodeError);
}

TEST_CASE("decode: PNG gray and RGB luma") {
  const TextImage red = decode_png(encode_png(1, 1, 3, {255, 0, 0}));
  CHECK(red.pixels == std::vector<std::uint8_t>{76});
  const TextImage mix = decode_png(encode_png(2, 1, 3, {0, 255, 0, 10, 20, 30}));
  CHECK(mix.pixels[0] == 150);  // round(0.587 * 255)
  CHECK(mix.pixels[1] == static_cast<std::uint8_t>(std::lround(0.299 * 10 + 0.587 * 20 + 0.114 * 30)));
  const TextImage gray = decode_bytes(encode_png(3, 2, 1, {1, 2, 3, 4, 5, 6}));
  CHECK(gray.pixels == std::vector<std::uint8_t>{1, 2, 3, 4, 5, 6});
  std::vector<std::uint8_t> truncated = encode_png(3, 2, 1, {1, 2, 3, 4, 5, 6});
  truncated.resize(truncated.size() / 2);
  CHECK_THROWS_AS(decode_bytes(truncated), DecodeError);
}

TEST_CASE("prepare: resize, padding and crop") {
  const PreparedImage a = prepare(random_image(64, 128, 1), Portion::Whole);
  CHECK(a.tensor.shape() == std::vector<int>{1, 32, 64});
  for (float v : a.tensor.values()) CHECK((v >= -1.0f && v <= 1.0f));

  TextImage small(32, 20, 0);
  const PreparedImage b = prepare(small, Portion::Whole);
  CHECK(b.tensor.shape() == std::vector<int>{1, 32, 32});
  for (int y = 0; y < 32; ++y) {
    CHECK(b.tensor.at(0, y, 5) == -1.0f);
    for (int x = 20; x < 32; ++x) CHECK(b.tensor.at(0, y, x) == 1.0f);
  }
  for (int w : {5, 40, 333}) CHECK(prepare(random_image(50, w, 2), Portion::Beginning).tensor.dim(2) == 32);
  CHECK(normalize_gray(255.0f) == 1.0f);
  CHECK(normalize_gray(0.0f) == -1.0f);
}

TEST_CASE("prepare: aspect ratio and monotone width") {
  int last = 0;
  for (int w = 10; w < 400; w += 13) {
    const int got = prepare(TextImage(57, w), Portion::Whole).tensor.dim(2);
    CHECK(got >= last);
    last = got;
    if (got > 32) CHECK(std::abs(got / 32.0 - static_cast<double>(w) / 57.0) <= 1.0 / 32.0);
  }
}

TEST_CASE("shear: identity, hand-traced line, growth") {
  const TextImage im = random_image(7, 9, 3);
  CHECK(shear(im, 0.0).pixels == im.pixels);
  TextImage line(3, 3);
  for (int y = 0; y < 3; ++y) line.at(y, 1) = 0;
  const TextImage s = shear(line, 1.0);
  CHECK(s.width == 5);
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 5; ++x) CHECK(s.at(y, x) == (x == 1 + (2 - y) ? 0 : 255));
  CHECK(shear(im, -0.5).width == 9 + 3);
  CHECK_THROWS_AS(shear(im, 1.6), ContractError);
}

TEST_CASE("shear: near-inverse on a smooth image") {
  TextImage im(24, 60);
  for (int y = 0; y < 24; ++y)
    for (int x = 0; x < 60; ++x)
      im.at(y, x) = static_cast<std::uint8_t>(std::lround(128 + 100 * std::sin(x / 7.0) * std::cos(y / 5.0)));
  for (double s : {0.15, 0.3, 0.6}) {
    const TextImage back = shear(shear(im, s), -s);
    const int grow = static_cast<int>(std::ceil(s * 23));
    const int border = static_cast<int>(std::ceil(2 * s * 24));
    int worst = 0;
    for (int y = 0; y < 24; ++y)
      for (int x = border; x < 60 - border; ++x) worst = std::max(worst, std::abs(back.at(y, x + grow) - im.at(y, x)));
    CHECK(worst <= 2);
  }
}

TEST_CASE("erode and dilate") {
  const TextImage im = stroke_image();
  CHECK(erode(im, 0).pixels == im.pixels);
  CHECK(dilate(im, 0).pixels == im.pixels);
  TextImage dot(7, 7);
  dot.at(3, 3) = 0;
  const TextImage d = dilate(dot, 1);
  for (int y = 0; y < 7; ++y)
    for (int x = 0; x < 7; ++x) CHECK(d.at(y, x) == ((std::abs(y - 3) <= 1 && std::abs(x - 3) <= 1) ? 0 : 255));
  const TextImage closed = erode(dilate(im, 2), 2);
  for (std::size_t i = 0; i < im.pixels.size(); ++i) CHECK(closed.pixels[i] <= im.pixels[i]);
  for (int k = 0; k <= 3; ++k) CHECK(invert(dilate(invert(im), k)).pixels == erode(im, k).pixels);
  CHECK_THROWS_AS(dilate(im, 9), ContractError);
}

TEST_CASE("alterations keep writer id") {
  TextImage im = stroke_image();
  im.writer_id = "w7";
  CHECK(shear(im, 0.3).writer_id == "w7");
  CHECK(erode(im, 1).writer_id == "w7");
  CHECK(dilate(im, 1).writer_id == "w7");
}
