#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "hwd/backbone.hpp"
#include "hwd/manifest.hpp"

namespace hwd {

struct LabeledImage {
  Tensor tensor;  // prepared [1,32,W]
  int label = 0;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_accuracy = 0.0;
};

struct Hyper {
  int epochs = 10;
  int batch_size = 16;
  double lr = 0.01;
  double momentum = 0.9;
  std::uint64_t seed = 0;
};

struct TrainResult {
  ArchitectureSpec spec;
  ParamSet best;
  std::vector<EpochRecord> history;
  double best_val_accuracy = 0.0;
  int best_epoch = 0;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// He-uniform init from the seed, per-epoch seeded shuffle, gradients of each
// batch summed in sample order and averaged, SGD with momentum. Keeps the
// weights of the first epoch reaching the best validation accuracy (training
// accuracy when `val` is empty). Throws NumericalError on a non-finite loss.
TrainResult train_on(const ArchitectureSpec& spec, const std::vector<LabeledImage>& train,
                     const std::vector<LabeledImage>& val, const Hyper& hyper, const EpochCallback& on_epoch = {});

// Top-1 accuracy. Throws ContractError when empty or a label exceeds the head.
double evaluate(const Backbone& net, const std::vector<LabeledImage>& samples);

struct TrainConfig {
  Hyper hyper;
  std::string arch = "tinynet";
  std::filesystem::path manifest;
  std::filesystem::path val_manifest;  // empty = last 10% of each class of `manifest`
  std::filesystem::path out_weights;
  std::filesystem::path history_json;  // optional
  bool invert_ink = false;
};

// Labels must be integers in [0, K); K = largest label + 1 >= 2.
std::vector<LabeledImage> load_labeled(const Manifest& manifest, bool invert_ink = false);
int class_count(const std::vector<LabeledImage>& samples);

TrainResult train(const TrainConfig& config, const EpochCallback& on_epoch = {});
double evaluate(const std::filesystem::path& weights, const std::string& arch, const Manifest& manifest,
                bool invert_ink = false);

std::string history_json(const std::vector<EpochRecord>& history);

}  // namespace hwd
