#include "hwd/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hwd/errors.hpp"

namespace hwd::nn {

double GradCheckReport::max_rel_error() const {
  double m = 0.0;
  for (const BlockError& b : blocks) m = std::max(m, b.max_rel_error);
  return m;
}

GradCheckReport gradient_check(const std::function<double()>& loss, std::span<const GradBlock> blocks,
                               const GradCheckOptions& options) {
  if (!(options.eps > 0.0)) throw ContractError("gradient_check: eps must be positive");
  GradCheckReport report;
  report.tolerance = options.tolerance;
  std::mt19937_64 rng(options.seed);

  for (const GradBlock& block : blocks) {
    if (!block.value || !block.analytic) throw ContractError("gradient_check: block '" + block.name + "' is incomplete");
    if (block.value->shape() != block.analytic->shape())
      throw ContractError("gradient_check: block '" + block.name + "' value " + shape_string(block.value->shape()) +
                          " vs gradient " + shape_string(block.analytic->shape()));

    std::vector<std::size_t> idx(block.value->size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (options.max_entries_per_block && idx.size() > options.max_entries_per_block) {
      std::shuffle(idx.begin(), idx.end(), rng);
      idx.resize(options.max_entries_per_block);
      std::sort(idx.begin(), idx.end());
    }

    BlockError err{block.name, idx.size(), 0.0, 0.0};
    Tensor& v = *block.value;
    for (std::size_t i : idx) {
      const float orig = v[i];
      const float up = static_cast<float>(orig + options.eps);
      const float down = static_cast<float>(orig - options.eps);
      v[i] = up;
      const double f_up = loss();
      v[i] = down;
      const double f_down = loss();
      v[i] = orig;
      if (!std::isfinite(f_up) || !std::isfinite(f_down))
        throw NumericalError("gradient_check: non-finite loss while perturbing '" + block.name + "' entry " +
                             std::to_string(i));
      const double numeric = (f_up - f_down) / (static_cast<double>(up) - static_cast<double>(down));
      const double analytic = (*block.analytic)[i];
      const double abs_err = std::abs(analytic - numeric);
      const double denom = std::max({std::abs(analytic), std::abs(numeric), options.abs_floor});
      err.max_abs_error = std::max(err.max_abs_error, abs_err);
      err.max_rel_error = std::max(err.max_rel_error, abs_err / denom);
    }
    report.blocks.push_back(std::move(err));
  }
  return report;
}

}  // namespace hwd::nn
