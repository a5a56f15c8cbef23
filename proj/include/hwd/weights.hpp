#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "hwd/backbone.hpp"

// Portable weight file:
//   "HWDW" | u32 version | entries... | u32 CRC32 of all preceding bytes
// entry: u16 name_len | name (UTF-8) | u8 rank | u32 dims[rank] | f32 payload
// All integers and floats little-endian.
namespace hwd {

// Version 1 = inputs normalized to [-1, 1] by (p/255 - 0.5) / 0.5.
inline constexpr std::uint32_t kWeightFileVersion = 1;

class WeightFileError : public std::runtime_error {
 public:
  enum class Kind { Io, BadMagic, BadVersion, Truncated, CrcMismatch, MissingEntry, ShapeMismatch, UnexpectedEntry, DuplicateEntry };

  WeightFileError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

// Raw entries in file order, CRC and framing verified but not matched to a spec.
ParamSet read_weight_file(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_weights(const ParamSet& params);
ParamSet decode_weights(const std::vector<std::uint8_t>& bytes);

void save_weights(const ArchitectureSpec& spec, const ParamSet& params, const std::filesystem::path& path);
// Reads and validates every spec parameter (names, shapes), rejecting extras.
ParamSet load_weights(const ArchitectureSpec& spec, const std::filesystem::path& path);

// Reads a file for the named architecture, inferring the head size from
// "head.bias" when present.
Backbone load_backbone(const std::string& arch_name, const std::filesystem::path& path);

// "tinynet" or "vgg16", from the width of the first convolution.
std::string detect_arch(const std::filesystem::path& path);

}  // namespace hwd
