#include "hwd/nn_reference.hpp"

#include "nn_checks.hpp"

namespace hwd::nn::reference {

Tensor conv2d_forward(const Tensor& input, const Tensor& weights, const Tensor& bias) {
  detail::check_conv_args(input, weights, bias);
  const int cin = input.dim(0), h = input.dim(1), w = input.dim(2), cout = weights.dim(0);
  Tensor out({cout, h, w});
  for (int k = 0; k < cout; ++k) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double acc = bias[static_cast<std::size_t>(k)];
        for (int c = 0; c < cin; ++c) {
          for (int ky = 0; ky < 3; ++ky) {
            const int sy = y + ky - 1;
            if (sy < 0 || sy >= h) continue;
            for (int kx = 0; kx < 3; ++kx) {
              const int sx = x + kx - 1;
              if (sx < 0 || sx >= w) continue;
              const double wv = weights.data()[((static_cast<std::size_t>(k) * cin + c) * 3 + ky) * 3 + kx];
              acc += wv * static_cast<double>(input.at(c, sy, sx));
            }
          }
        }
        out.at(k, y, x) = static_cast<float>(acc);
      }
    }
  }
  return out;
}

LayerGrad conv2d_backward(const Tensor& input, const Tensor& weights, const Tensor& upstream) {
  detail::check_conv_backward_args(input, weights, upstream);
  const int cin = input.dim(0), h = input.dim(1), w = input.dim(2), cout = weights.dim(0);
  Tensor d_in({cin, h, w});
  Tensor d_w(weights.shape());
  Tensor d_b({cout});

  for (int c = 0; c < cin; ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int k = 0; k < cout; ++k) {
          for (int ky = 0; ky < 3; ++ky) {
            const int oy = y - ky + 1;
            if (oy < 0 || oy >= h) continue;
            for (int kx = 0; kx < 3; ++kx) {
              const int ox = x - kx + 1;
              if (ox < 0 || ox >= w) continue;
              const double wv = weights.data()[((static_cast<std::size_t>(k) * cin + c) * 3 + ky) * 3 + kx];
              acc += wv * static_cast<double>(upstream.at(k, oy, ox));
            }
          }
        }
        d_in.at(c, y, x) = static_cast<float>(acc);
      }
    }
  }

  for (int k = 0; k < cout; ++k) {
    double bsum = 0.0;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) bsum += static_cast<double>(upstream.at(k, y, x));
    d_b[static_cast<std::size_t>(k)] = static_cast<float>(bsum);

    for (int c = 0; c < cin; ++c) {
      for (int ky = 0; ky < 3; ++ky) {
        for (int kx = 0; kx < 3; ++kx) {
          double total = 0.0;
          for (int x = 0; x < w; ++x) {
            double lane = 0.0;
            const int sx = x + kx - 1;
            if (sx >= 0 && sx < w) {
              for (int y = 0; y < h; ++y) {
                const int sy = y + ky - 1;
                if (sy < 0 || sy >= h) continue;
                lane += static_cast<double>(upstream.at(k, y, x)) * static_cast<double>(input.at(c, sy, sx));
              }
            }
            total += lane;
          }
          d_w.data()[((static_cast<std::size_t>(k) * cin + c) * 3 + ky) * 3 + kx] = static_cast<float>(total);
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
  PoolResult r;
  r.output = Tensor({ch, h / 2, w / 2});
  r.argmax.resize(r.output.size());
  r.input_shape = input.shape();
  std::size_t o = 0;
  for (int c = 0; c < ch; ++c) {
    for (int oy = 0; oy < h / 2; ++oy) {
      for (int ox = 0; ox < w / 2; ++ox, ++o) {
        int by = 2 * oy, bx = 2 * ox;
        for (int dy = 0; dy < 2; ++dy)
          for (int dx = 0; dx < 2; ++dx)
            if (input.at(c, 2 * oy + dy, 2 * ox + dx) > input.at(c, by, bx)) {
              by = 2 * oy + dy;
              bx = 2 * ox + dx;
            }
        r.output[o] = input.at(c, by, bx);
        r.argmax[o] = static_cast<std::uint32_t>((static_cast<std::size_t>(c) * h + by) * w + bx);
      }
    }
  }
  return r;
}

Tensor maxpool2_backward(const PoolResult& forward, const Tensor& upstream) {
  detail::check_pool_backward(forward, upstream);
  Tensor d_in(forward.input_shape);
  for (std::size_t i = 0; i < upstream.size(); ++i) d_in[forward.argmax[i]] += upstream[i];
  return d_in;
}

}  // namespace hwd::nn::reference
