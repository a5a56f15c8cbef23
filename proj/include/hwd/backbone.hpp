#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hwd/tensor.hpp"

namespace hwd {

enum class LayerKind { Conv, Relu, MaxPool };

struct LayerDesc {
  LayerKind kind;
  int in_channels = 0;
  int out_channels = 0;
  std::string name;  // parameter prefix for Conv layers
};

struct ParamShape {
  std::string name;
  std::vector<int> shape;
};

// A plain conv/relu/pool trunk whose output (after the last pool) is the
// feature tap, plus an optional global-average-pool + linear classifier head.
struct ArchitectureSpec {
  std::string name;
  std::vector<LayerDesc> layers;
  int input_height = 32;
  int in_channels = 1;
  int feature_dim = 0;
  int pool_count = 0;
  int num_classes = 0;  // 0 = feature extractor only

  bool has_head() const noexcept { return num_classes > 0; }
  // Names and shapes of every parameter, in weight-file order.
  std::vector<ParamShape> parameters() const;
  int min_width() const noexcept { return 1 << pool_count; }
  // Width of the feature tap for an input of the given width. Throws
  // ContractError naming the minimum width when the tap would be empty.
  int feature_width(int input_width) const;
};

// conv blocks 64,64 | 128,128 | 256x3 | 512x3 | 512x3, 5 pools, D = 512.
// num_classes > 0 attaches the training head.
ArchitectureSpec vgg16_32_spec(int num_classes = 0);
// conv 16 | 32 | 64 | 128 | 128, one conv per block, 5 pools, D = 128.
ArchitectureSpec tinynet_spec(int num_classes);
// "vgg16" or "tinynet"; num_classes 0 drops the head (tinynet included).
ArchitectureSpec spec_by_name(const std::string& name, int num_classes);

struct ParamSet {
  std::vector<std::string> names;
  std::vector<Tensor> tensors;

  std::size_t size() const noexcept { return tensors.size(); }
  const Tensor& get(const std::string& name) const;
  Tensor& get(const std::string& name);
  friend bool operator==(const ParamSet&, const ParamSet&) = default;
};

// Throws ContractError on a missing entry or shape mismatch.
void validate_params(const ArchitectureSpec& spec, const ParamSet& params);

// He-uniform weights (limit sqrt(6 / fan_in)), zero biases.
ParamSet init_he_uniform(const ArchitectureSpec& spec, std::uint64_t seed);

// Immutable network; all forward calls are const and thread-safe.
class Backbone {
 public:
  Backbone(ArchitectureSpec spec, ParamSet params);

  const ArchitectureSpec& spec() const noexcept { return spec_; }
  const ParamSet& params() const noexcept { return params_; }

  // image [1,32,W] -> feature tap [D,1,W']
  Tensor feature_map(const Tensor& image) const;
  // Spatial mean of the feature tap, length D.
  std::vector<float> pooled(const Tensor& image) const;
  // Requires a head.
  Tensor logits(const Tensor& image) const;

 private:
  ArchitectureSpec spec_;
  ParamSet params_;
};

struct TrainStep {
  double loss = 0.0;
  int predicted = -1;
  std::vector<Tensor> grads;  // aligned with ParamSet::tensors
};

// Full forward + backward for one labelled image through trunk and head.
TrainStep forward_backward(const ArchitectureSpec& spec, const ParamSet& params, const Tensor& image, int label);

}  // namespace hwd
