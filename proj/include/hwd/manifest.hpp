#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hwd/imaging.hpp"

namespace hwd {

struct ManifestEntry {
  std::string path;  // relative to the manifest's directory unless absolute
  std::string label;
  std::string text;
};

// Tab-separated `path<TAB>label<TAB>text` records under a
// `#hwdkit-manifest v1 seed=<u64>` header. Other '#' lines are comments.
struct Manifest {
  std::vector<ManifestEntry> entries;
  std::uint64_t seed = 0;
  std::string version = "v1";
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const ManifestEntry& e) const;
  // Distinct labels in first-appearance order.
  std::vector<std::string> labels() const;
  std::size_t size() const noexcept { return entries.size(); }
};

Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const Manifest& manifest, const std::filesystem::path& path);
std::string format_manifest(const Manifest& manifest);

struct TrainValSplit {
  Manifest train;
  Manifest val;
};

// Per label, the last round(n * val_fraction) entries (at most n - 1) go to
// val, the rest to train; relative order is preserved.
TrainValSplit split_train_val(const Manifest& manifest, double val_fraction);

// Decodes every entry (in parallel), setting writer_id to the label.
std::vector<TextImage> load_images(const Manifest& manifest, bool invert_ink = false);

}  // namespace hwd
