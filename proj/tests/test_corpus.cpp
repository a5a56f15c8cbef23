#include <doctest.h>

#include <filesystem>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "hwd/corpus.hpp"
#include "hwd/errors.hpp"
#include "hwd/manifest.hpp"

using namespace hwd;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "hwd_unit" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const fs::path kDejaVu = "/usr/share/fonts/truetype/dejavu/DejaVuSerif.ttf";

}  // namespace

TEST_CASE("render_word: deterministic, dark ink on light background, bounded height") {
  const StyleClass style = procedural_style(3, 11);
  Rng a = make_rng(5, {1}), b = make_rng(5, {1});
  const TextImage x = render_word("quick brown", style, a), y = render_word("quick brown", style, b);
  CHECK(x.pixels == y.pixels);
  CHECK(x.height >= 40);
  CHECK(x.height <= 96);
  int dark = 0;
  for (auto p : x.pixels) dark += p < 80;
  CHECK(dark > 0);
  CHECK(dark < static_cast<int>(x.pixels.size()) / 2);
  Rng c = make_rng(5, {1});
  CHECK_THROWS_AS(render_word("", style, c), ContractError);
  CHECK_THROWS_AS(render_word("caf\xc3\xa9", style, c), ContractError);
}

TEST_CASE("render_word: distinct style seeds differ") {
  Rng a = make_rng(9, {2}), b = make_rng(9, {2});
  const TextImage x = render_word("letters", procedural_style(0, 1), a);
  const TextImage y = render_word("letters", procedural_style(1, 2), b);
  if (x.width != y.width || x.height != y.height) {
    CHECK(true);
  } else {
    int diff = 0;
    for (std::size_t i = 0; i < x.pixels.size(); ++i) diff += x.pixels[i] != y.pixels[i];
    CHECK(diff > static_cast<int>(x.pixels.size()) / 100);
  }
}

TEST_CASE("render_word: TrueType outlines") {
  if (!fs::exists(kDejaVu)) {
    MESSAGE("DejaVu font not installed; skipped");
    return;
  }
  const StyleClass style = vector_font_style(0, kDejaVu, 3);
  Rng a = make_rng(1, {0}), b = make_rng(1, {0});
  const TextImage x = render_word("Hamburgefonts", style, a), y = render_word("Hamburgefonts", style, b);
  CHECK(x.pixels == y.pixels);
  CHECK(x.width > x.height);
  int dark = 0;
  for (auto p : x.pixels) dark += p < 80;
  CHECK(dark > 50);
  Rng c = make_rng(1, {0});
  CHECK_THROWS_AS(render_word("x", vector_font_style(0, "/nonexistent/font.ttf", 3), c), GenerationError);
}

TEST_CASE("distort: determinism, identity and size bound") {
  Rng r = make_rng(2, {0});
  const TextImage im = render_word("distortion", procedural_style(2, 5), r);
  Rng a = make_rng(8, {0}), b = make_rng(8, {0}), c = make_rng(8, {0});
  const TextImage x = distort(im, a), y = distort(im, b);
  CHECK(x.pixels == y.pixels);
  CHECK(distort(im, c, DistortMagnitudes::none()).pixels == im.pixels);
  CHECK(x.height == im.height);
  CHECK(x.width >= im.width);
  CHECK(x.width <= im.width + static_cast<int>(std::ceil(0.2 * (im.height - 1))));
  CHECK(x.pixels != im.pixels);
}

TEST_CASE("generate_corpus: counts, balance, split files and determinism") {
  CorpusConfig cfg;
  cfg.num_styles = 3;
  cfg.words_per_style = 10;
  cfg.seed = 42;
  cfg.out_dir = temp_dir("corpus_a");
  const Corpus a = generate_corpus(cfg);
  CHECK(a.manifest.size() == 30);
  std::map<std::string, int> per;
  for (const auto& e : a.manifest.entries) per[e.label]++;
  CHECK(per == std::map<std::string, int>{{"0", 10}, {"1", 10}, {"2", 10}});
  CHECK(a.train.size() == 27);
  CHECK(a.val.size() == 3);
  CHECK(fs::exists(cfg.out_dir / "train.tsv"));
  CHECK(read_manifest(cfg.out_dir / "manifest.tsv").seed == 42);
  for (const auto& e : a.manifest.entries) CHECK(decode(a.manifest.resolve(e)).height >= 40);

  CorpusConfig again = cfg;
  again.out_dir = temp_dir("corpus_b");
  const Corpus b = generate_corpus(again);
  CHECK(slurp(cfg.out_dir / "manifest.tsv") == slurp(again.out_dir / "manifest.tsv"));
  for (const auto& e : a.manifest.entries) CHECK(slurp(cfg.out_dir / e.path) == slurp(again.out_dir / e.path));

  CorpusConfig bad = cfg;
  bad.num_styles = 1;
  CHECK_THROWS_AS(generate_corpus(bad), ContractError);
}

TEST_CASE("generate_corpus: short word list reuses words with distinct seeds") {
  CorpusConfig cfg;
  cfg.num_styles = 2;
  cfg.words_per_style = 12;
  cfg.word_list = {"alpha", "beta"};
  cfg.out_dir = temp_dir("corpus_short");
  const Corpus c = generate_corpus(cfg);
  CHECK(c.manifest.size() == 24);
  std::set<std::uint64_t> seeds(c.entry_seeds.begin(), c.entry_seeds.end());
  CHECK(seeds.size() == 24);
  for (const auto& e : c.manifest.entries) CHECK((e.text == "alpha" || e.text == "beta"));
}

TEST_CASE("generate_corpus: unwritable output directory") {
  const fs::path blocker = temp_dir("blocked") / "file";
  std::ofstream(blocker) << "x";
  CorpusConfig cfg;
  cfg.num_styles = 2;
  cfg.words_per_style = 1;
  cfg.out_dir = blocker / "sub";
  CHECK_THROWS_AS(generate_corpus(cfg), IoError);
}

TEST_CASE("manifest: parse, round-trip and errors") {
  const fs::path dir = temp_dir("manifest");
  std::ofstream(dir / "m.tsv") << "#hwdkit-manifest v1 seed=77\r\n# note\r\na.pgm\tw1\thello world\r\nb.pgm\tw2\t\r\n";
  const Manifest m = read_manifest(dir / "m.tsv");
  CHECK(m.seed == 77);
  REQUIRE(m.size() == 2);
  CHECK(m.entries[0].text == "hello world");
  CHECK(m.entries[1].label == "w2");
  CHECK(m.resolve(m.entries[0]) == dir / "a.pgm");
  CHECK(m.labels() == std::vector<std::string>{"w1", "w2"});
  write_manifest(m, dir / "copy.tsv");
  const Manifest back = read_manifest(dir / "copy.tsv");
  CHECK(format_manifest(back) == format_manifest(m));

  std::ofstream(dir / "bad.tsv") << "#hwdkit-manifest v1 seed=1\nno-tabs-here\n";
  CHECK_THROWS_AS(read_manifest(dir / "bad.tsv"), IoError);
  std::ofstream(dir / "nolabel.tsv") << "x.pgm\t\tword\n";
  CHECK_THROWS_AS(read_manifest(dir / "nolabel.tsv"), IoError);
  CHECK_THROWS_AS(read_manifest(dir / "missing.tsv"), IoError);
}

TEST_CASE("split_train_val keeps the last share of each label") {
  Manifest m;
  for (int i = 0; i < 10; ++i) m.entries.push_back({"a" + std::to_string(i), "A", ""});
  for (int i = 0; i < 3; ++i) m.entries.push_back({"b" + std::to_string(i), "B", ""});
  const TrainValSplit s = split_train_val(m, 0.2);
  CHECK(s.val.size() == 2 + 1);
  CHECK(s.val.entries[0].path == "a8");
  CHECK(s.val.entries[1].path == "a9");
  CHECK(s.val.entries[2].path == "b2");
  CHECK(s.train.size() == 10);
  Manifest one;
  one.entries.push_back({"x", "C", ""});
  CHECK(split_train_val(one, 0.9).val.size() == 0);
  CHECK_THROWS_AS(split_train_val(m, 1.0), ContractError);
}

TEST_CASE("load_images sets writer ids and reports missing files") {
  CorpusConfig cfg;
  cfg.num_styles = 2;
  cfg.words_per_style = 2;
  cfg.out_dir = temp_dir("load");
  const Corpus c = generate_corpus(cfg);
  const auto images = load_images(c.manifest);
  REQUIRE(images.size() == 4);
  CHECK(images[0].writer_id == "0");
  CHECK(images[3].writer_id == "1");
  const auto inverted = load_images(c.manifest, true);
  CHECK(inverted[0].pixels == invert(images[0]).pixels);
  Manifest broken = c.manifest;
  broken.entries[1].path = "images/nope.pgm";
  CHECK_THROWS(load_images(broken));
}
