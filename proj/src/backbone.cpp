#include "hwd/backbone.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hwd/errors.hpp"
#include "hwd/nn.hpp"

namespace hwd {
namespace {

ArchitectureSpec build_spec(std::string name, const std::vector<std::vector<int>>& blocks, int num_classes) {
  ArchitectureSpec s;
  s.name = std::move(name);
  int ch = s.in_channels;
  int conv_index = 0;
  for (const auto& block : blocks) {
    for (int out : block) {
      s.layers.push_back({LayerKind::Conv, ch, out, "conv" + std::to_string(++conv_index)});
      s.layers.push_back({LayerKind::Relu, out, out, {}});
      ch = out;
    }
    s.layers.push_back({LayerKind::MaxPool, ch, ch, {}});
    ++s.pool_count;
  }
  s.feature_dim = ch;
  s.num_classes = num_classes;
  return s;
}

void check_image(const ArchitectureSpec& spec, const Tensor& image) {
  if (image.rank() != 3 || image.dim(0) != spec.in_channels || image.dim(1) != spec.input_height)
    throw ContractError(spec.name + ": input must be [" + std::to_string(spec.in_channels) + "," +
                        std::to_string(spec.input_height) + ",W], got " + shape_string(image.shape()));
  spec.feature_width(image.dim(2));
}

std::size_t index_of(const ParamSet& p, const std::string& name) {
  auto it = std::find(p.names.begin(), p.names.end(), name);
  if (it == p.names.end()) throw ContractError("parameter '" + name + "' not found");
  return static_cast<std::size_t>(it - p.names.begin());
}

}  // namespace

std::vector<ParamShape> ArchitectureSpec::parameters() const {
  std::vector<ParamShape> out;
  for (const LayerDesc& l : layers) {
    if (l.kind != LayerKind::Conv) continue;
    out.push_back({l.name + ".weight", {l.out_channels, l.in_channels, 3, 3}});
    out.push_back({l.name + ".bias", {l.out_channels}});
  }
  if (has_head()) {
    out.push_back({"head.weight", {num_classes, feature_dim}});
    out.push_back({"head.bias", {num_classes}});
  }
  return out;
}

int ArchitectureSpec::feature_width(int input_width) const {
  const int w = input_width >> pool_count;
  if (input_width < min_width() || w < 1)
    throw ContractError(name + ": input width " + std::to_string(input_width) + " is below the minimum width " +
                        std::to_string(min_width()));
  return w;
}

ArchitectureSpec vgg16_32_spec(int num_classes) {
  if (num_classes == 1 || num_classes < 0) throw ContractError("vgg16_32: num_classes must be 0 or >= 2");
  return build_spec("vgg16", {{64, 64}, {128, 128}, {256, 256, 256}, {512, 512, 512}, {512, 512, 512}}, num_classes);
}

ArchitectureSpec tinynet_spec(int num_classes) {
  if (num_classes < 2) throw ContractError("tinynet: num_classes must be >= 2, got " + std::to_string(num_classes));
  return build_spec("tinynet", {{16}, {32}, {64}, {128}, {128}}, num_classes);
}

ArchitectureSpec spec_by_name(const std::string& name, int num_classes) {
  if (name == "vgg16") return vgg16_32_spec(num_classes);
  if (name == "tinynet") {
    if (num_classes == 0) {
      ArchitectureSpec s = tinynet_spec(2);
      s.num_classes = 0;
      return s;
    }
    return tinynet_spec(num_classes);
  }
  throw ContractError("unknown architecture '" + name + "' (expected vgg16 or tinynet)");
}

const Tensor& ParamSet::get(const std::string& name) const { return tensors[index_of(*this, name)]; }
Tensor& ParamSet::get(const std::string& name) { return tensors[index_of(*this, name)]; }

void validate_params(const ArchitectureSpec& spec, const ParamSet& params) {
  const auto expected = spec.parameters();
  if (params.names.size() != params.tensors.size()) throw ContractError("parameter set: names/tensors size mismatch");
  for (const ParamShape& ps : expected) {
    auto it = std::find(params.names.begin(), params.names.end(), ps.name);
    if (it == params.names.end()) throw ContractError(spec.name + ": missing parameter '" + ps.name + "'");
    const Tensor& t = params.tensors[static_cast<std::size_t>(it - params.names.begin())];
    if (t.shape() != ps.shape)
      throw ContractError(spec.name + ": parameter '" + ps.name + "' has shape " + shape_string(t.shape()) +
                          ", expected " + shape_string(ps.shape));
  }
  if (params.names.size() != expected.size())
    throw ContractError(spec.name + ": expected " + std::to_string(expected.size()) + " parameters, got " +
                        std::to_string(params.names.size()));
}

ParamSet init_he_uniform(const ArchitectureSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ParamSet p;
  for (const ParamShape& ps : spec.parameters()) {
    Tensor t(ps.shape);
    if (ps.shape.size() > 1) {
      int fan_in = 1;
      for (std::size_t i = 1; i < ps.shape.size(); ++i) fan_in *= ps.shape[i];
      const float limit = std::sqrt(6.0f / static_cast<float>(fan_in));
      std::uniform_real_distribution<float> dist(-limit, limit);
      for (float& v : t.values()) v = dist(rng);
    }
    p.names.push_back(ps.name);
    p.tensors.push_back(std::move(t));
  }
  return p;
}

Backbone::Backbone(ArchitectureSpec spec, ParamSet params) : spec_(std::move(spec)), params_(std::move(params)) {
  validate_params(spec_, params_);
}

Tensor Backbone::feature_map(const Tensor& image) const {
  check_image(spec_, image);
  Tensor x = image;
  for (const LayerDesc& l : spec_.layers) {
    switch (l.kind) {
      case LayerKind::Conv:
        x = nn::conv2d_forward(x, params_.get(l.name + ".weight"), params_.get(l.name + ".bias"));
        break;
      case LayerKind::Relu:
        for (float& v : x.values()) v = v > 0.0f ? v : 0.0f;
        break;
      case LayerKind::MaxPool:
        x = nn::maxpool2_forward(x).output;
        break;
    }
  }
  return x;
}

std::vector<float> Backbone::pooled(const Tensor& image) const {
  const Tensor fm = feature_map(image);
  const Tensor g = nn::global_avg_pool_forward(fm);
  return {g.values().begin(), g.values().end()};
}

Tensor Backbone::logits(const Tensor& image) const {
  if (!spec_.has_head()) throw ContractError(spec_.name + ": network has no classifier head");
  const Tensor g = nn::global_avg_pool_forward(feature_map(image));
  return nn::linear_forward(g, params_.get("head.weight"), params_.get("head.bias"));
}

TrainStep forward_backward(const ArchitectureSpec& spec, const ParamSet& params, const Tensor& image, int label) {
  if (!spec.has_head()) throw ContractError(spec.name + ": training requires a classifier head");
  check_image(spec, image);

  // Activations kept per layer: conv/relu inputs and pool switch tables.
  std::vector<Tensor> inputs;
  std::vector<nn::PoolResult> pools;
  inputs.reserve(spec.layers.size());
  Tensor x = image;
  for (const LayerDesc& l : spec.layers) {
    switch (l.kind) {
      case LayerKind::Conv: {
        Tensor y = nn::conv2d_forward(x, params.get(l.name + ".weight"), params.get(l.name + ".bias"));
        inputs.push_back(std::move(x));
        x = std::move(y);
        break;
      }
      case LayerKind::Relu: {
        Tensor y = nn::relu_forward(x);
        inputs.push_back(std::move(x));
        x = std::move(y);
        break;
      }
      case LayerKind::MaxPool: {
        nn::PoolResult pr = nn::maxpool2_forward(x);
        x = pr.output;
        inputs.emplace_back();
        pools.push_back(std::move(pr));
        break;
      }
    }
  }
  const std::vector<int> tap_shape = x.shape();
  const Tensor pooled = nn::global_avg_pool_forward(x);
  const Tensor& hw = params.get("head.weight");
  const Tensor logits = nn::linear_forward(pooled, hw, params.get("head.bias"));
  nn::XentResult xent = nn::softmax_xent(logits, label);

  TrainStep step;
  step.loss = xent.loss;
  step.predicted = static_cast<int>(std::max_element(logits.values().begin(), logits.values().end()) -
                                    logits.values().begin());
  step.grads.resize(params.size());

  nn::LayerGrad head = nn::linear_backward(pooled, hw, xent.logit_grad);
  step.grads[index_of(params, "head.weight")] = std::move(head.param_grads[0]);
  step.grads[index_of(params, "head.bias")] = std::move(head.param_grads[1]);
  Tensor g = nn::global_avg_pool_backward(tap_shape, head.input_grad);

  std::size_t pool_i = pools.size();
  for (std::size_t li = spec.layers.size(); li-- > 0;) {
    const LayerDesc& l = spec.layers[li];
    switch (l.kind) {
      case LayerKind::Conv: {
        const bool first = li == 0;
        nn::LayerGrad lg = nn::conv2d_backward(inputs[li], params.get(l.name + ".weight"), g);
        step.grads[index_of(params, l.name + ".weight")] = std::move(lg.param_grads[0]);
        step.grads[index_of(params, l.name + ".bias")] = std::move(lg.param_grads[1]);
        if (!first) g = std::move(lg.input_grad);
        break;
      }
      case LayerKind::Relu:
        g = nn::relu_backward(inputs[li], g);
        break;
      case LayerKind::MaxPool:
        g = nn::maxpool2_backward(pools[--pool_i], g);
        break;
    }
  }
  return step;
}

}  // namespace hwd
