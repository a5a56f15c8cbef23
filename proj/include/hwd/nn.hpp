#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hwd/tensor.hpp"

// Layer kernels for the two backbones. Every op is a pure function of its
// arguments. Reductions accumulate in double in a fixed order, so results are
// bit-identical for any OpenMP thread count; the serial versions in
// nn_reference.hpp produce the same bits and exist for testing/benchmarking.
namespace hwd::nn {

struct LayerGrad {
  std::vector<Tensor> param_grads;  // same order and shapes as the layer's parameters
  Tensor input_grad;
};

// 3x3 cross-correlation, zero padding 1, stride 1.
// input [C_in,H,W], weights [C_out,C_in,3,3], bias [C_out] -> [C_out,H,W]
Tensor conv2d_forward(const Tensor& input, const Tensor& weights, const Tensor& bias);
// param_grads = {d_weights, d_bias}
LayerGrad conv2d_backward(const Tensor& input, const Tensor& weights, const Tensor& upstream);

struct PoolResult {
  Tensor output;
  std::vector<std::uint32_t> argmax;  // flat input index per output element
  std::vector<int> input_shape;
};

// 2x2 window, stride 2; a trailing odd row/column is dropped. Ties go to the
// first maximum in row-major window order.
PoolResult maxpool2_forward(const Tensor& input);
Tensor maxpool2_backward(const PoolResult& forward, const Tensor& upstream);

Tensor relu_forward(const Tensor& input);
// Gradient passes where the forward input was strictly positive.
Tensor relu_backward(const Tensor& input, const Tensor& upstream);

// x [in], weights [out,in], bias [out] -> [out]
Tensor linear_forward(const Tensor& x, const Tensor& weights, const Tensor& bias);
LayerGrad linear_backward(const Tensor& x, const Tensor& weights, const Tensor& upstream);

// [C,H,W] -> [C]
Tensor global_avg_pool_forward(const Tensor& input);
Tensor global_avg_pool_backward(const std::vector<int>& input_shape, const Tensor& upstream);

struct XentResult {
  double loss = 0.0;
  Tensor logit_grad;
};

// Softmax cross-entropy with max subtraction.
XentResult softmax_xent(const Tensor& logits, int label);

// SGD with heavy-ball momentum: v <- momentum*v + g; p <- p - lr*v.
class Sgd {
 public:
  Sgd(float lr, float momentum);

  void step(std::span<Tensor> params, std::span<const Tensor> grads);
  const std::vector<Tensor>& velocity() const noexcept { return velocity_; }

 private:
  float lr_;
  float momentum_;
  std::vector<Tensor> velocity_;
};

}  // namespace hwd::nn
