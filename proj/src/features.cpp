#include <cmath>
#include <exception>

#include "hwd/errors.hpp"
#include "hwd/metrics.hpp"

namespace hwd {

BagRefs refs(std::span<const FeatureBag> bags) {
  BagRefs out;
  out.reserve(bags.size());
  for (const FeatureBag& b : bags) out.push_back(&b);
  return out;
}

FeatureBag extract_bag(const TextImage& image, const Backbone& backbone, Portion portion) {
  const PreparedImage prepared = prepare(image, portion);
  FeatureBag bag;
  bag.image_id = image.source;
  bag.writer_id = image.writer_id;
  bag.dim = backbone.spec().feature_dim;
  if (portion == Portion::Beginning) {
    const std::vector<float> v = backbone.pooled(prepared.tensor);
    bag.data.assign(v.begin(), v.end());
    return bag;
  }
  const Tensor fm = backbone.feature_map(prepared.tensor);  // [D,1,W']
  const int d = fm.dim(0), w = fm.dim(2);
  bag.data.resize(static_cast<std::size_t>(d) * static_cast<std::size_t>(w));
  for (int j = 0; j < w; ++j)
    for (int c = 0; c < d; ++c) bag.data[static_cast<std::size_t>(j) * d + c] = fm.at(c, 0, j);
  return bag;
}

Extraction extract_bags(const std::vector<TextImage>& images, const Backbone& backbone, Portion portion) {
  const std::size_t n = images.size();
  std::vector<FeatureBag> bags(n);
  std::vector<std::string> skipped(n);
  std::vector<std::exception_ptr> errors(n);
  const int min_w = backbone.spec().min_width();

#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
    const std::size_t i = static_cast<std::size_t>(k);
    try {
      const TextImage& img = images[i];
      const int rw = std::max(kBeginWidth, static_cast<int>(std::lround(static_cast<double>(img.width) * kPreparedHeight / img.height)));
      if (portion == Portion::Whole && rw < min_w) {
        skipped[i] = "prepared width " + std::to_string(rw) + " below backbone minimum " + std::to_string(min_w);
        continue;
      }
      bags[i] = extract_bag(img, backbone, portion);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  Extraction out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!skipped[i].empty())
      out.warnings.push_back({images[i].source.empty() ? "#" + std::to_string(i) : images[i].source, skipped[i]});
    else
      out.bags.push_back(std::move(bags[i]));
  }
  return out;
}

}  // namespace hwd
