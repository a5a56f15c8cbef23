#pragma once

#include <string>

#include "hwd/errors.hpp"
#include "hwd/nn.hpp"

namespace hwd::nn::detail {

inline void check_conv_args(const Tensor& input, const Tensor& weights, const Tensor& bias) {
  if (input.rank() != 3) throw ContractError("conv2d: input must be [C,H,W], got " + shape_string(input.shape()));
  if (weights.rank() != 4 || weights.dim(2) != 3 || weights.dim(3) != 3)
    throw ContractError("conv2d: weights must be [C_out,C_in,3,3], got " + shape_string(weights.shape()));
  if (weights.dim(1) != input.dim(0))
    throw ContractError("conv2d: weights expect " + std::to_string(weights.dim(1)) + " input channels, input has " +
                        std::to_string(input.dim(0)));
  if (bias.rank() != 1 || bias.dim(0) != weights.dim(0))
    throw ContractError("conv2d: bias must be [" + std::to_string(weights.dim(0)) + "], got " + shape_string(bias.shape()));
}

inline void check_conv_backward_args(const Tensor& input, const Tensor& weights, const Tensor& upstream) {
  check_conv_args(input, weights, Tensor({weights.dim(0)}));
  const std::vector<int> expect{weights.dim(0), input.dim(1), input.dim(2)};
  if (upstream.shape() != expect)
    throw ContractError("conv2d_backward: upstream grad " + shape_string(upstream.shape()) + " != output shape " +
                        shape_string(expect));
}

inline void check_pool_input(const Tensor& input) {
  if (input.rank() != 3) throw ContractError("maxpool2: input must be [C,H,W], got " + shape_string(input.shape()));
  if (input.dim(1) < 2 || input.dim(2) < 2)
    throw ContractError("maxpool2: spatial size must be at least 2x2, got " + shape_string(input.shape()));
}

inline void check_pool_backward(const PoolResult& fwd, const Tensor& upstream) {
  if (upstream.shape() != fwd.output.shape())
    throw ContractError("maxpool2_backward: upstream grad " + shape_string(upstream.shape()) + " != output shape " +
                        shape_string(fwd.output.shape()));
  if (fwd.argmax.size() != upstream.size()) throw ContractError("maxpool2_backward: argmax table size mismatch");
}

}  // namespace hwd::nn::detail
