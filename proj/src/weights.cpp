#include "hwd/weights.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>

#include "hwd/errors.hpp"

namespace hwd {
namespace {

using Kind = WeightFileError::Kind;

static_assert(std::endian::native == std::endian::little, "weight IO assumes a little-endian host");

std::uint32_t crc32_of(const std::uint8_t* p, std::size_t n) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  while (n > 0) {
    const uInt chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
    crc = ::crc32(crc, p, chunk);
    p += chunk;
    n -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

template <class T>
void put(std::vector<std::uint8_t>& out, T v) {
  const auto* b = reinterpret_cast<const std::uint8_t*>(&v);
  out.insert(out.end(), b, b + sizeof(T));
}

class Reader {
 public:
  Reader(const std::uint8_t* p, std::size_t n) : p_(p), n_(n) {}

  template <class T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, p_ + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  void bytes(void* dst, std::size_t n) {
    need(n);
    std::memcpy(dst, p_ + pos_, n);
    pos_ += n;
  }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return n_ - pos_; }

 private:
  void need(std::size_t k) const {
    if (n_ - pos_ < k)
      throw WeightFileError(Kind::Truncated, "weight file truncated at byte " + std::to_string(pos_));
  }
  const std::uint8_t* p_;
  std::size_t n_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_weights(const ParamSet& params) {
  std::vector<std::uint8_t> out{'H', 'W', 'D', 'W'};
  put<std::uint32_t>(out, kWeightFileVersion);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const std::string& name = params.names[i];
    const Tensor& t = params.tensors[i];
    if (name.size() > 0xFFFF) throw ContractError("parameter name too long: " + name.substr(0, 32) + "...");
    if (t.rank() > 0xFF) throw ContractError("parameter rank too large: " + name);
    put<std::uint16_t>(out, static_cast<std::uint16_t>(name.size()));
    out.insert(out.end(), name.begin(), name.end());
    put<std::uint8_t>(out, static_cast<std::uint8_t>(t.rank()));
    for (int d : t.shape()) put<std::uint32_t>(out, static_cast<std::uint32_t>(d));
    const auto* b = reinterpret_cast<const std::uint8_t*>(t.data());
    out.insert(out.end(), b, b + t.size() * sizeof(float));
  }
  put<std::uint32_t>(out, crc32_of(out.data(), out.size()));
  return out;
}

ParamSet decode_weights(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "HWDW", 4) != 0) {
    if (bytes.size() < 4) throw WeightFileError(Kind::Truncated, "weight file truncated at byte " + std::to_string(bytes.size()));
    throw WeightFileError(Kind::BadMagic, "not a weight file (bad magic)");
  }
  if (bytes.size() < 12) throw WeightFileError(Kind::Truncated, "weight file truncated at byte " + std::to_string(bytes.size()));
  const std::size_t body = bytes.size() - 4;
  std::uint32_t stored;
  std::memcpy(&stored, bytes.data() + body, 4);
  const std::uint32_t actual = crc32_of(bytes.data(), body);

  Reader r(bytes.data(), body);
  r.get<std::uint32_t>();  // magic
  const auto version = r.get<std::uint32_t>();

  ParamSet p;
  std::set<std::string> seen;
  try {
    while (r.remaining() > 0) {
      const auto len = r.get<std::uint16_t>();
      std::string name(len, '\0');
      r.bytes(name.data(), len);
      const auto rank = r.get<std::uint8_t>();
      std::vector<int> shape;
      std::size_t count = 1;
      for (int i = 0; i < rank; ++i) {
        const auto d = r.get<std::uint32_t>();
        if (d == 0 || d > (1u << 30)) throw WeightFileError(Kind::Truncated, "bad dimension in entry '" + name + "'");
        shape.push_back(static_cast<int>(d));
        count *= d;
      }
      if (count > r.remaining() / sizeof(float) + 1)
        throw WeightFileError(Kind::Truncated, "weight file truncated inside entry '" + name + "'");
      std::vector<float> values(count);
      r.bytes(values.data(), count * sizeof(float));
      if (!seen.insert(name).second) throw WeightFileError(Kind::DuplicateEntry, "duplicate entry '" + name + "'");
      p.names.push_back(std::move(name));
      p.tensors.emplace_back(std::move(shape), std::move(values));
    }
  } catch (const WeightFileError& e) {
    // A truncated file usually also fails the CRC; report truncation first
    // only when the CRC happens to match.
    if (stored != actual && e.kind() != Kind::Truncated)
      throw WeightFileError(Kind::CrcMismatch, "weight file CRC mismatch");
    throw;
  }
  if (stored != actual) throw WeightFileError(Kind::CrcMismatch, "weight file CRC mismatch");
  if (version != kWeightFileVersion)
    throw WeightFileError(Kind::BadVersion, "unsupported weight file version " + std::to_string(version));
  return p;
}

ParamSet read_weight_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WeightFileError(Kind::Io, "cannot open weight file " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_weights(bytes);
}

void save_weights(const ArchitectureSpec& spec, const ParamSet& params, const std::filesystem::path& path) {
  validate_params(spec, params);
  // Spec order, so files for one architecture are laid out identically.
  ParamSet ordered;
  for (const ParamShape& ps : spec.parameters()) {
    ordered.names.push_back(ps.name);
    ordered.tensors.push_back(params.get(ps.name));
  }
  const auto bytes = encode_weights(ordered);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw WeightFileError(Kind::Io, "cannot write weight file " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw WeightFileError(Kind::Io, "write failed for " + path.string());
}

namespace {

ParamSet match_spec(const ArchitectureSpec& spec, ParamSet raw) {
  ParamSet out;
  for (const ParamShape& ps : spec.parameters()) {
    auto it = std::find(raw.names.begin(), raw.names.end(), ps.name);
    if (it == raw.names.end())
      throw WeightFileError(Kind::MissingEntry, spec.name + ": weight file lacks entry '" + ps.name + "'");
    Tensor& t = raw.tensors[static_cast<std::size_t>(it - raw.names.begin())];
    if (t.shape() != ps.shape)
      throw WeightFileError(Kind::ShapeMismatch, spec.name + ": entry '" + ps.name + "' has shape " +
                                                     shape_string(t.shape()) + ", expected " + shape_string(ps.shape));
    out.names.push_back(ps.name);
    out.tensors.push_back(std::move(t));
  }
  if (raw.names.size() != out.names.size()) {
    for (const std::string& n : raw.names)
      if (std::find(out.names.begin(), out.names.end(), n) == out.names.end())
        throw WeightFileError(Kind::UnexpectedEntry, spec.name + ": unexpected entry '" + n + "'");
  }
  return out;
}

}  // namespace

ParamSet load_weights(const ArchitectureSpec& spec, const std::filesystem::path& path) {
  return match_spec(spec, read_weight_file(path));
}

Backbone load_backbone(const std::string& arch_name, const std::filesystem::path& path) {
  ParamSet raw = read_weight_file(path);
  int num_classes = 0;
  auto it = std::find(raw.names.begin(), raw.names.end(), "head.bias");
  if (it != raw.names.end()) {
    const Tensor& hb = raw.tensors[static_cast<std::size_t>(it - raw.names.begin())];
    if (hb.rank() != 1) throw WeightFileError(Kind::ShapeMismatch, "entry 'head.bias' must be rank 1");
    num_classes = hb.dim(0);
  }
  const ArchitectureSpec spec = spec_by_name(arch_name, num_classes);
  return Backbone(spec, match_spec(spec, std::move(raw)));
}

std::string detect_arch(const std::filesystem::path& path) {
  const ParamSet raw = read_weight_file(path);
  auto it = std::find(raw.names.begin(), raw.names.end(), "conv1.weight");
  if (it == raw.names.end()) throw WeightFileError(Kind::MissingEntry, "weight file lacks entry 'conv1.weight'");
  const Tensor& w = raw.tensors[static_cast<std::size_t>(it - raw.names.begin())];
  if (w.rank() == 4 && w.dim(0) == tinynet_spec(2).layers.front().out_channels) return "tinynet";
  if (w.rank() == 4 && w.dim(0) == vgg16_32_spec().layers.front().out_channels) return "vgg16";
  throw WeightFileError(Kind::ShapeMismatch, "cannot infer architecture from 'conv1.weight' " + shape_string(w.shape()));
}

}  // namespace hwd
