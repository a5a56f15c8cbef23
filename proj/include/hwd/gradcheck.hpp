#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hwd/tensor.hpp"

namespace hwd::nn {

// One tensor to probe: `value` is perturbed in place, `analytic` holds the
// gradient of the scalar loss with respect to it.
struct GradBlock {
  std::string name;
  Tensor* value = nullptr;
  const Tensor* analytic = nullptr;
};

struct GradCheckOptions {
  double eps = 1e-3;
  double tolerance = 1e-2;
  // Denominator floor of the relative error |a-n| / max(|a|, |n|, abs_floor).
  double abs_floor = 1e-3;
  // 0 checks every entry; otherwise a seeded sample of this many entries per block.
  std::size_t max_entries_per_block = 0;
  std::uint64_t seed = 0;
};

struct BlockError {
  std::string name;
  std::size_t checked = 0;
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
};

struct GradCheckReport {
  std::vector<BlockError> blocks;
  double tolerance = 0.0;

  double max_rel_error() const;
  bool passed() const { return max_rel_error() < tolerance; }
};

// Central differences (f(x+eps) - f(x-eps)) / (2 eps) per entry, compared with
// the analytic gradients. Throws NumericalError naming the block when the loss
// turns non-finite.
GradCheckReport gradient_check(const std::function<double()>& loss, std::span<const GradBlock> blocks,
                               const GradCheckOptions& options = {});

}  // namespace hwd::nn
