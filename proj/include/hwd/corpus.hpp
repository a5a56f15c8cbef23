#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hwd/imaging.hpp"
#include "hwd/manifest.hpp"
#include "hwd/rng.hpp"

namespace hwd {

// Lengths are in x-height units. Ranges are sampled per rendered word.
struct StrokeParams {
  double thickness_min = 0.12, thickness_max = 0.14;
  double slant_min = 0.0, slant_max = 0.05;
  double curvature_min = 0.0, curvature_max = 0.05;
  double baseline_jitter = 0.05;
  double width_scale = 1.0;
  double spacing = 0.2;
  double shape_jitter = 0.1;  // per-style deformation of the shared letter skeletons
  bool cursive = false;
};

enum class StyleKind { Procedural, VectorFont };

struct StyleClass {
  int id = 0;
  StyleKind kind = StyleKind::Procedural;
  std::uint64_t seed = 0;
  StrokeParams params;
  std::filesystem::path font_path;  // VectorFont only
};

// Stroke parameters drawn from the seed; the same seed gives the same style.
StyleClass procedural_style(int id, std::uint64_t seed);
// Font outlines with the seed's slant and baseline jitter.
StyleClass vector_font_style(int id, const std::filesystem::path& font, std::uint64_t seed);

// Dark word on a light noisy gradient background, height in [40, 96].
// Procedural styles accept ASCII letters and spaces. Throws ContractError on
// empty or unsupported text, GenerationError when a font cannot be used.
TextImage render_word(const std::string& text, const StyleClass& style, Rng& rng);

struct DistortMagnitudes {
  double rotation_deg = 3.0;
  double shear = 0.2;
  double brightness = 0.15;
  double contrast = 0.15;
  double noise_sigma = 4.0;

  static DistortMagnitudes none() { return {0, 0, 0, 0, 0}; }
};

// Rotation, shear, brightness/contrast and pixel noise, each drawn uniformly
// within its magnitude. All-zero magnitudes return the input unchanged.
TextImage distort(const TextImage& image, Rng& rng, const DistortMagnitudes& magnitudes = {});

struct CorpusConfig {
  int num_styles = 10;
  int words_per_style = 200;
  std::vector<std::string> word_list;  // empty = bundled English list
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  std::vector<std::filesystem::path> fonts;  // styles 0..fonts.size()-1 use these
  double val_fraction = 0.1;
  DistortMagnitudes distortion;
};

struct Corpus {
  Manifest manifest;  // out_dir/manifest.tsv
  Manifest train;     // out_dir/train.tsv
  Manifest val;       // out_dir/val.tsv
  std::vector<StyleClass> styles;
  std::vector<std::uint64_t> entry_seeds;  // aligned with manifest.entries
};

// Writes images under out_dir/images and the three manifests. Labels are the
// style ids. Deterministic for a given config regardless of thread count.
Corpus generate_corpus(const CorpusConfig& config);

// Seed for entry `index` of style `style` under the master seed.
std::uint64_t corpus_entry_seed(std::uint64_t master, int style, int index);

const std::vector<std::string>& default_word_list();

}  // namespace hwd
