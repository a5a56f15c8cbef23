#include "hwd/trainer.hpp"

#include <cmath>
#include <exception>
#include <fstream>
#include <json.hpp>

#include "hwd/errors.hpp"
#include "hwd/nn.hpp"
#include "hwd/rng.hpp"
#include "hwd/weights.hpp"

namespace hwd {
namespace {

int predict(const Backbone& net, const Tensor& image) {
  const Tensor logits = net.logits(image);
  int best = 0;
  for (int i = 1; i < logits.dim(0); ++i)
    if (logits[static_cast<std::size_t>(i)] > logits[static_cast<std::size_t>(best)]) best = i;
  return best;
}

}  // namespace

double evaluate(const Backbone& net, const std::vector<LabeledImage>& samples) {
  if (samples.empty()) throw ContractError("evaluate: no samples");
  if (!net.spec().has_head()) throw ContractError("evaluate: network has no classifier head");
  const int k = net.spec().num_classes;
  for (const auto& s : samples)
    if (s.label < 0 || s.label >= k)
      throw ContractError("evaluate: label " + std::to_string(s.label) + " outside head of " + std::to_string(k) + " classes");
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(samples.size());
  std::size_t correct = 0;
#pragma omp parallel for schedule(dynamic, 4) reduction(+ : correct)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    correct += predict(net, s.tensor) == s.label ? 1u : 0u;
  }
  return static_cast<double>(correct) / static_cast<double>(samples.size());
}

TrainResult train_on(const ArchitectureSpec& spec, const std::vector<LabeledImage>& train,
                     const std::vector<LabeledImage>& val, const Hyper& h, const EpochCallback& on_epoch) {
  if (h.epochs < 1) throw ContractError("train: epochs must be >= 1");
  if (h.batch_size < 1) throw ContractError("train: batch_size must be >= 1");
  if (!(h.lr >= 0.0)) throw ContractError("train: learning rate must be >= 0");
  if (train.empty()) throw ContractError("train: empty training set");
  if (!spec.has_head()) throw ContractError("train: architecture has no classifier head");

  TrainResult result;
  result.spec = spec;
  ParamSet params = init_he_uniform(spec, h.seed);
  nn::Sgd sgd(static_cast<float>(h.lr), static_cast<float>(h.momentum));
  result.best = params;
  result.best_val_accuracy = -1.0;

  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t bs = static_cast<std::size_t>(h.batch_size);

  for (int epoch = 1; epoch <= h.epochs; ++epoch) {
    Rng rng = make_rng(h.seed, {0xE90Cu, static_cast<std::uint64_t>(epoch)});
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);

    double loss_sum = 0.0;
    int step = 0;
    for (std::size_t start = 0; start < order.size(); start += bs, ++step) {
      const std::size_t end = std::min(order.size(), start + bs);
      std::vector<TrainStep> steps(end - start);
      std::vector<std::exception_ptr> errors(steps.size());
#pragma omp parallel for schedule(dynamic, 1)
      for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(steps.size()); ++k) {
        const std::size_t j = static_cast<std::size_t>(k);
        try {
          const LabeledImage& s = train[order[start + j]];
          steps[j] = forward_backward(spec, params, s.tensor, s.label);
        } catch (...) {
          errors[j] = std::current_exception();
        }
      }
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);

      std::vector<Tensor> grads = steps.front().grads;
      for (std::size_t j = 1; j < steps.size(); ++j)
        for (std::size_t p = 0; p < grads.size(); ++p) {
          float* g = grads[p].data();
          const float* o = steps[j].grads[p].data();
          for (std::size_t q = 0; q < grads[p].size(); ++q) g[q] += o[q];
        }
      const float inv = 1.0f / static_cast<float>(steps.size());
      for (Tensor& g : grads)
        for (float& v : g.values()) v *= inv;
      for (const TrainStep& s : steps) {
        if (!std::isfinite(s.loss))
          throw NumericalError("train: non-finite loss at epoch " + std::to_string(epoch) + " step " + std::to_string(step));
        loss_sum += s.loss;
      }
      sgd.step(params.tensors, grads);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(train.size());
    const Backbone net(spec, params);
    rec.val_accuracy = evaluate(net, val.empty() ? train : val);
    result.history.push_back(rec);
    if (rec.val_accuracy > result.best_val_accuracy) {
      result.best_val_accuracy = rec.val_accuracy;
      result.best_epoch = epoch;
      result.best = params;
    }
    if (on_epoch) on_epoch(rec);
  }
  return result;
}

std::vector<LabeledImage> load_labeled(const Manifest& manifest, bool invert_ink) {
  const std::vector<TextImage> images = load_images(manifest, invert_ink);
  std::vector<LabeledImage> out(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string& l = manifest.entries[i].label;
    std::size_t used = 0;
    int label = -1;
    try {
      label = std::stoi(l, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != l.size() || label < 0)
      throw ContractError("training labels must be non-negative integers, got '" + l + "'");
    out[i].label = label;
  }
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(images.size()); ++k)
    out[static_cast<std::size_t>(k)].tensor = prepare(images[static_cast<std::size_t>(k)], Portion::Whole).tensor;
  return out;
}

int class_count(const std::vector<LabeledImage>& samples) {
  int k = 0;
  for (const auto& s : samples) k = std::max(k, s.label + 1);
  return k;
}

std::string history_json(const std::vector<EpochRecord>& history) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : history)
    arr.push_back({{"epoch", r.epoch}, {"train_loss", r.train_loss}, {"val_accuracy", r.val_accuracy}});
  return arr.dump(2) + "\n";
}

TrainResult train(const TrainConfig& cfg, const EpochCallback& on_epoch) {
  const Manifest all = read_manifest(cfg.manifest);
  Manifest train_m, val_m;
  if (cfg.val_manifest.empty()) {
    TrainValSplit split = split_train_val(all, 0.1);
    train_m = std::move(split.train);
    val_m = std::move(split.val);
  } else {
    train_m = all;
    val_m = read_manifest(cfg.val_manifest);
  }
  const auto train_set = load_labeled(train_m, cfg.invert_ink);
  const auto val_set = val_m.entries.empty() ? std::vector<LabeledImage>{} : load_labeled(val_m, cfg.invert_ink);
  const int k = std::max(class_count(train_set), class_count(val_set));
  if (k < 2) throw ContractError("train: need at least 2 classes");
  TrainResult r = train_on(spec_by_name(cfg.arch, k), train_set, val_set, cfg.hyper, on_epoch);
  if (!cfg.out_weights.empty()) save_weights(r.spec, r.best, cfg.out_weights);
  if (!cfg.history_json.empty()) {
    std::ofstream out(cfg.history_json, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + cfg.history_json.string());
    out << history_json(r.history);
  }
  return r;
}

double evaluate(const std::filesystem::path& weights, const std::string& arch, const Manifest& manifest, bool invert_ink) {
  if (manifest.entries.empty()) throw ContractError("evaluate: empty manifest");
  const Backbone net = load_backbone(arch, weights);
  return evaluate(net, load_labeled(manifest, invert_ink));
}

}  // namespace hwd
