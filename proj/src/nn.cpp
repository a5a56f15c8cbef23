#include "hwd/nn.hpp"

#include <algorithm>
#include <cmath>

#include "nn_checks.hpp"

namespace hwd::nn {

Tensor conv2d_forward(const Tensor& input, const Tensor& weights, const Tensor& bias) {
  detail::check_conv_args(input, weights, bias);
  const int cin = input.dim(0), h = input.dim(1), w = input.dim(2), cout = weights.dim(0);
  const std::size_t plane = static_cast<std::size_t>(h) * w;
  Tensor out({cout, h, w});
  const float* in = input.data();
  const float* wt = weights.data();
  float* dst = out.data();

#pragma omp parallel
  {
    std::vector<double> acc(plane);
#pragma omp for schedule(static)
    for (int k = 0; k < cout; ++k) {
      std::fill(acc.begin(), acc.end(), static_cast<double>(bias[static_cast<std::size_t>(k)]));
      for (int c = 0; c < cin; ++c) {
        const float* src = in + static_cast<std::size_t>(c) * plane;
        const float* kern = wt + (static_cast<std::size_t>(k) * cin + c) * 9;
        for (int ky = 0; ky < 3; ++ky) {
          const int y0 = std::max(0, 1 - ky), y1 = std::min(h, h + 1 - ky);
          for (int kx = 0; kx < 3; ++kx) {
            const double wv = kern[ky * 3 + kx];
            const int x0 = std::max(0, 1 - kx), x1 = std::min(w, w + 1 - kx);
            for (int y = y0; y < y1; ++y) {
              const float* s = src + static_cast<std::size_t>(y + ky - 1) * w + (kx - 1);
              double* a = acc.data() + static_cast<std::size_t>(y) * w;
              for (int x = x0; x < x1; ++x) a[x] += wv * static_cast<double>(s[x]);
            }
          }
        }
      }
      float* o = dst + static_cast<std::size_t>(k) * plane;
      for (std::size_t i = 0; i < plane; ++i) o[i] = static_cast<float>(acc[i]);
    }
  }
  return out;
}

LayerGrad conv2d_backward(const Tensor& input, const Tensor& weights, const Tensor& upstream) {
  detail::check_conv_backward_args(input, weights, upstream);
  const int cin = input.dim(0), h = input.dim(1), w = input.dim(2), cout = weights.dim(0);
  const std::size_t plane = static_cast<std::size_t>(h) * w;
  Tensor d_in({cin, h, w});
  Tensor d_w(weights.shape());
  Tensor d_b({cout});
  const float* in = input.data();
  const float* wt = weights.data();
  const float* up = upstream.data();

#pragma omp parallel
  {
    std::vector<double> acc(plane);
    // Input gradient: one input channel per iteration, summed over (k, ky, kx).
#pragma omp for schedule(static)
    for (int c = 0; c < cin; ++c) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int k = 0; k < cout; ++k) {
        const float* g = up + static_cast<std::size_t>(k) * plane;
        const float* kern = wt + (static_cast<std::size_t>(k) * cin + c) * 9;
        for (int ky = 0; ky < 3; ++ky) {
          const int y0 = std::max(0, ky - 1), y1 = std::min(h, h + ky - 1);
          for (int kx = 0; kx < 3; ++kx) {
            const double wv = kern[ky * 3 + kx];
            const int x0 = std::max(0, kx - 1), x1 = std::min(w, w + kx - 1);
            for (int y = y0; y < y1; ++y) {
              const float* s = g + static_cast<std::size_t>(y - ky + 1) * w - (kx - 1);
              double* a = acc.data() + static_cast<std::size_t>(y) * w;
              for (int x = x0; x < x1; ++x) a[x] += wv * static_cast<double>(s[x]);
            }
          }
        }
      }
      float* o = d_in.data() + static_cast<std::size_t>(c) * plane;
      for (std::size_t i = 0; i < plane; ++i) o[i] = static_cast<float>(acc[i]);
    }

    // Weight and bias gradients: one output channel per iteration. Each tap keeps
    // a per-column lane summed over rows, then lanes are summed left to right.
    std::vector<double> lanes(9 * static_cast<std::size_t>(w));
#pragma omp for schedule(static)
    for (int k = 0; k < cout; ++k) {
      const float* g = up + static_cast<std::size_t>(k) * plane;
      double bsum = 0.0;
      for (std::size_t i = 0; i < plane; ++i) bsum += static_cast<double>(g[i]);
      d_b[static_cast<std::size_t>(k)] = static_cast<float>(bsum);

      for (int c = 0; c < cin; ++c) {
        const float* src = in + static_cast<std::size_t>(c) * plane;
        std::fill(lanes.begin(), lanes.end(), 0.0);
        for (int y = 0; y < h; ++y) {
          const float* grow = g + static_cast<std::size_t>(y) * w;
          for (int ky = 0; ky < 3; ++ky) {
            const int sy = y + ky - 1;
            if (sy < 0 || sy >= h) continue;
            for (int kx = 0; kx < 3; ++kx) {
              const int x0 = std::max(0, 1 - kx), x1 = std::min(w, w + 1 - kx);
              const float* s = src + static_cast<std::size_t>(sy) * w + (kx - 1);
              double* lane = lanes.data() + static_cast<std::size_t>(ky * 3 + kx) * w;
              for (int x = x0; x < x1; ++x) lane[x] += static_cast<double>(grow[x]) * static_cast<double>(s[x]);
            }
          }
        }
        float* dw = d_w.data() + (static_cast<std::size_t>(k) * cin + c) * 9;
        for (int t = 0; t < 9; ++t) {
          const double* lane = lanes.data() + static_cast<std::size_t>(t) * w;
          double total = 0.0;
          for (int x = 0; x < w; ++x) total += lane[x];
          dw[t] = static_cast<float>(total);
        }
      }
    }
  }

  LayerGrad out;
  out.param_grads.push_back(std::move(d_w));
  out.param_grads.push_back(std::move(d_b));
  out.input_grad = std::move(d_in);
  return out;
}

PoolResult maxpool2_forward(const Tensor& input) {
  detail::check_pool_input(input);
  const int ch = input.dim(0), h = input.dim(1), w = input.dim(2);
  const int oh = h / 2, ow = w / 2;
  PoolResult r;
  r.output = Tensor({ch, oh, ow});
  r.argmax.resize(r.output.size());
  r.input_shape = input.shape();
  const float* in = input.data();

#pragma omp parallel for schedule(static)
  for (int c = 0; c < ch; ++c) {
    for (int oy = 0; oy < oh; ++oy) {
      for (int ox = 0; ox < ow; ++ox) {
        std::size_t best = (static_cast<std::size_t>(c) * h + 2 * oy) * w + 2 * ox;
        float bv = in[best];
        for (int dy = 0; dy < 2; ++dy) {
          for (int dx = 0; dx < 2; ++dx) {
            const std::size_t idx = (static_cast<std::size_t>(c) * h + 2 * oy + dy) * w + 2 * ox + dx;
            if (in[idx] > bv) {
              bv = in[idx];
              best = idx;
            }
          }
        }
        const std::size_t o = (static_cast<std::size_t>(c) * oh + oy) * ow + ox;
        r.output[o] = bv;
        r.argmax[o] = static_cast<std::uint32_t>(best);
      }
    }
  }
  return r;
}

Tensor maxpool2_backward(const PoolResult& forward, const Tensor& upstream) {
  detail::check_pool_backward(forward, upstream);
  Tensor d_in(forward.input_shape);
  // Windows do not overlap, so every argmax target is written by one output.
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(upstream.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) d_in[forward.argmax[static_cast<std::size_t>(i)]] += upstream[static_cast<std::size_t>(i)];
  return d_in;
}

Tensor relu_forward(const Tensor& input) {
  Tensor out = input;
  for (float& v : out.values()) v = v > 0.0f ? v : 0.0f;
  return out;
}

Tensor relu_backward(const Tensor& input, const Tensor& upstream) {
  if (input.shape() != upstream.shape())
    throw ContractError("relu_backward: upstream " + shape_string(upstream.shape()) + " != input " +
                        shape_string(input.shape()));
  Tensor out(input.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = input[i] > 0.0f ? upstream[i] : 0.0f;
  return out;
}

Tensor linear_forward(const Tensor& x, const Tensor& weights, const Tensor& bias) {
  if (x.rank() != 1 || weights.rank() != 2 || weights.dim(1) != x.dim(0))
    throw ContractError("linear: weights " + shape_string(weights.shape()) + " incompatible with input " +
                        shape_string(x.shape()));
  if (bias.rank() != 1 || bias.dim(0) != weights.dim(0))
    throw ContractError("linear: bias " + shape_string(bias.shape()) + " incompatible with weights " +
                        shape_string(weights.shape()));
  const int out_dim = weights.dim(0), in_dim = weights.dim(1);
  Tensor y({out_dim});
  for (int o = 0; o < out_dim; ++o) {
    double acc = bias[static_cast<std::size_t>(o)];
    const float* row = weights.data() + static_cast<std::size_t>(o) * in_dim;
    for (int i = 0; i < in_dim; ++i) acc += static_cast<double>(row[i]) * static_cast<double>(x[static_cast<std::size_t>(i)]);
    y[static_cast<std::size_t>(o)] = static_cast<float>(acc);
  }
  return y;
}

LayerGrad linear_backward(const Tensor& x, const Tensor& weights, const Tensor& upstream) {
  if (x.rank() != 1 || weights.rank() != 2 || weights.dim(1) != x.dim(0))
    throw ContractError("linear_backward: weights " + shape_string(weights.shape()) + " incompatible with input " +
                        shape_string(x.shape()));
  if (upstream.rank() != 1 || upstream.dim(0) != weights.dim(0))
    throw ContractError("linear_backward: upstream " + shape_string(upstream.shape()) + " != output [" +
                        std::to_string(weights.dim(0)) + "]");
  const int out_dim = weights.dim(0), in_dim = weights.dim(1);
  Tensor d_w(weights.shape());
  Tensor d_b = upstream;
  Tensor d_x({in_dim});
  for (int o = 0; o < out_dim; ++o) {
    const float g = upstream[static_cast<std::size_t>(o)];
    float* row = d_w.data() + static_cast<std::size_t>(o) * in_dim;
    for (int i = 0; i < in_dim; ++i) row[i] = g * x[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < in_dim; ++i) {
    double acc = 0.0;
    for (int o = 0; o < out_dim; ++o)
      acc += static_cast<double>(weights.data()[static_cast<std::size_t>(o) * in_dim + i]) *
             static_cast<double>(upstream[static_cast<std::size_t>(o)]);
    d_x[static_cast<std::size_t>(i)] = static_cast<float>(acc);
  }
  LayerGrad out;
  out.param_grads.push_back(std::move(d_w));
  out.param_grads.push_back(std::move(d_b));
  out.input_grad = std::move(d_x);
  return out;
}

Tensor global_avg_pool_forward(const Tensor& input) {
  if (input.rank() != 3) throw ContractError("global_avg_pool: input must be [C,H,W], got " + shape_string(input.shape()));
  const int ch = input.dim(0);
  const std::size_t plane = static_cast<std::size_t>(input.dim(1)) * input.dim(2);
  Tensor out({ch});
  for (int c = 0; c < ch; ++c) {
    double acc = 0.0;
    const float* p = input.data() + static_cast<std::size_t>(c) * plane;
    for (std::size_t i = 0; i < plane; ++i) acc += p[i];
    out[static_cast<std::size_t>(c)] = static_cast<float>(acc / static_cast<double>(plane));
  }
  return out;
}

Tensor global_avg_pool_backward(const std::vector<int>& input_shape, const Tensor& upstream) {
  if (input_shape.size() != 3 || upstream.rank() != 1 || upstream.dim(0) != input_shape[0])
    throw ContractError("global_avg_pool_backward: upstream " + shape_string(upstream.shape()) +
                        " incompatible with input " + shape_string(input_shape));
  Tensor d_in(input_shape);
  const std::size_t plane = static_cast<std::size_t>(input_shape[1]) * input_shape[2];
  for (int c = 0; c < input_shape[0]; ++c) {
    const float g = static_cast<float>(static_cast<double>(upstream[static_cast<std::size_t>(c)]) / static_cast<double>(plane));
    std::fill_n(d_in.data() + static_cast<std::size_t>(c) * plane, plane, g);
  }
  return d_in;
}

XentResult softmax_xent(const Tensor& logits, int label) {
  if (logits.rank() != 1) throw ContractError("softmax_xent: logits must be rank 1, got " + shape_string(logits.shape()));
  const int k = logits.dim(0);
  if (label < 0 || label >= k)
    throw ContractError("softmax_xent: label " + std::to_string(label) + " outside [0," + std::to_string(k) + ")");
  double mx = logits[0];
  for (int i = 1; i < k; ++i) mx = std::max(mx, static_cast<double>(logits[static_cast<std::size_t>(i)]));
  std::vector<double> e(static_cast<std::size_t>(k));
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    e[static_cast<std::size_t>(i)] = std::exp(static_cast<double>(logits[static_cast<std::size_t>(i)]) - mx);
    sum += e[static_cast<std::size_t>(i)];
  }
  XentResult r;
  r.loss = std::log(sum) - (static_cast<double>(logits[static_cast<std::size_t>(label)]) - mx);
  r.loss = std::max(r.loss, 0.0);
  r.logit_grad = Tensor({k});
  for (int i = 0; i < k; ++i)
    r.logit_grad[static_cast<std::size_t>(i)] =
        static_cast<float>(e[static_cast<std::size_t>(i)] / sum - (i == label ? 1.0 : 0.0));
  return r;
}

Sgd::Sgd(float lr, float momentum) : lr_(lr), momentum_(momentum) {
  if (!(lr >= 0.0f)) throw ContractError("sgd: learning rate must be non-negative");
  if (!(momentum >= 0.0f && momentum < 1.0f)) throw ContractError("sgd: momentum must be in [0,1)");
}

void Sgd::step(std::span<Tensor> params, std::span<const Tensor> grads) {
  if (params.size() != grads.size())
    throw ContractError("sgd: " + std::to_string(params.size()) + " params but " + std::to_string(grads.size()) + " grads");
  for (std::size_t i = 0; i < params.size(); ++i)
    if (params[i].shape() != grads[i].shape())
      throw ContractError("sgd: param " + std::to_string(i) + " shape " + shape_string(params[i].shape()) +
                          " != grad shape " + shape_string(grads[i].shape()));
  if (velocity_.empty()) {
    for (const Tensor& p : params) velocity_.emplace_back(p.shape());
  } else if (velocity_.size() != params.size()) {
    throw ContractError("sgd: parameter list changed between steps");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor& v = velocity_[i];
    if (v.shape() != params[i].shape()) throw ContractError("sgd: parameter shape changed between steps");
    float* pv = params[i].data();
    const float* gv = grads[i].data();
    float* vv = v.data();
    for (std::size_t j = 0; j < v.size(); ++j) {
      vv[j] = momentum_ * vv[j] + gv[j];
      pv[j] -= lr_ * vv[j];
    }
  }
}

}  // namespace hwd::nn
