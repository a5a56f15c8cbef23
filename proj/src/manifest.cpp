#include "hwd/manifest.hpp"

#include <exception>
#include <fstream>
#include <sstream>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "hwd/errors.hpp"

namespace hwd {

std::filesystem::path Manifest::resolve(const ManifestEntry& e) const {
  const std::filesystem::path p(e.path);
  return p.is_absolute() ? p : base_dir / p;
}

std::vector<std::string> Manifest::labels() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& e : entries)
    if (seen.insert(e.label).second) out.push_back(e.label);
  return out;
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  Manifest m;
  m.base_dir = path.parent_path();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (lineno == 1 && line.rfind("#hwdkit-manifest", 0) == 0) {
        std::istringstream hs(line.substr(16));
        std::string tok;
        while (hs >> tok) {
          if (tok.rfind("seed=", 0) == 0) {
            try {
              m.seed = std::stoull(tok.substr(5));
            } catch (const std::exception&) {
              throw IoError(path.string() + ":1: bad seed '" + tok + "'");
            }
          } else if (tok.size() > 1 && tok[0] == 'v') {
            m.version = tok;
          }
        }
      }
      continue;
    }
    const auto t1 = line.find('\t');
    if (t1 == std::string::npos || t1 == 0)
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected path<TAB>label<TAB>text");
    const auto t2 = line.find('\t', t1 + 1);
    ManifestEntry e;
    e.path = line.substr(0, t1);
    e.label = line.substr(t1 + 1, t2 == std::string::npos ? std::string::npos : t2 - t1 - 1);
    if (t2 != std::string::npos) e.text = line.substr(t2 + 1);
    if (e.label.empty()) throw IoError(path.string() + ":" + std::to_string(lineno) + ": empty label");
    m.entries.push_back(std::move(e));
  }
  return m;
}

std::string format_manifest(const Manifest& m) {
  std::string s = "#hwdkit-manifest " + m.version + " seed=" + std::to_string(m.seed) + "\n";
  for (const auto& e : m.entries) s += e.path + "\t" + e.label + "\t" + e.text + "\n";
  return s;
}

void write_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write manifest " + path.string());
  out << format_manifest(manifest);
  if (!out) throw IoError("write failed for " + path.string());
}

TrainValSplit split_train_val(const Manifest& manifest, double val_fraction) {
  if (!(val_fraction >= 0.0 && val_fraction < 1.0)) throw ContractError("val fraction must be in [0, 1)");
  std::unordered_map<std::string, std::size_t> total, seen;
  for (const auto& e : manifest.entries) ++total[e.label];
  TrainValSplit out{manifest, manifest};
  out.train.entries.clear();
  out.val.entries.clear();
  for (const auto& e : manifest.entries) {
    const std::size_t n = total[e.label];
    const std::size_t n_val = std::min(n - 1, static_cast<std::size_t>(std::llround(static_cast<double>(n) * val_fraction)));
    (seen[e.label]++ >= n - n_val ? out.val : out.train).entries.push_back(e);
  }
  return out;
}

std::vector<TextImage> load_images(const Manifest& manifest, bool invert_ink) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(manifest.size());
  std::vector<TextImage> out(manifest.size());
  std::vector<std::exception_ptr> errors(manifest.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& e = manifest.entries[static_cast<std::size_t>(i)];
    try {
      TextImage img = decode(manifest.resolve(e));
      if (invert_ink) img = invert(img);
      img.writer_id = e.label;
      img.source = manifest.resolve(e).string();
      out[static_cast<std::size_t>(i)] = std::move(img);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace hwd
