#pragma once

#include "hwd/nn.hpp"

// Single-threaded, element-at-a-time versions of the heavy kernels. They use the
// same per-element summation order as the OpenMP kernels in nn.hpp, so both
// must agree bit for bit.
namespace hwd::nn::reference {

Tensor conv2d_forward(const Tensor& input, const Tensor& weights, const Tensor& bias);
LayerGrad conv2d_backward(const Tensor& input, const Tensor& weights, const Tensor& upstream);
PoolResult maxpool2_forward(const Tensor& input);
Tensor maxpool2_backward(const PoolResult& forward, const Tensor& upstream);

}  // namespace hwd::nn::reference
