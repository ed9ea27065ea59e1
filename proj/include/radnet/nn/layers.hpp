// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "radnet/nn/tensor.hpp"

// Fixed-topology layer kernels. Each forward optionally fills a cache that the
// matching backward consumes. Instantiated for float and double.
namespace radnet::nn {

template <class T>
struct ConvCache {
    Tensor4<T> input;
    int pad = 0;
    int stride = 1;
};

template <class T>
struct ParamGrads {
    Tensor4<T> grad_input;
    Tensor4<T> grad_weight;
    std::vector<T> grad_bias;
};

/// Cross-correlation, weight layout (out, in, kh, kw), zero padding.
template <class T>
Tensor4<T> conv2d_forward(const Tensor4<T>& input, const Tensor4<T>& weight,
                          std::span<const T> bias, int pad, int stride,
                          ConvCache<T>* cache = nullptr);

template <class T>
ParamGrads<T> conv2d_backward(const ConvCache<T>& cache, const Tensor4<T>& weight,
                              const Tensor4<T>& grad_out);

struct PoolCache {
    std::array<int, 4> input_shape{};
    std::vector<std::uint32_t> argmax;  // flat input offset per output element
};

/// 2x2 / stride 2. Ties go to the first element in row-major order.
template <class T>
Tensor4<T> maxpool2x2_forward(const Tensor4<T>& input, PoolCache* cache = nullptr);

template <class T>
Tensor4<T> maxpool2x2_backward(const PoolCache& cache, const Tensor4<T>& grad_out);

template <class T>
struct UpConvCache {
    Tensor4<T> input;
};

/// Transposed 2x2 / stride 2 convolution, weight layout (in, out, 2, 2):
/// out[b,o,2y+dy,2x+dx] = bias[o] + sum_i in[b,i,y,x] * w[i,o,dy,dx].
template <class T>
Tensor4<T> upconv2x2_forward(const Tensor4<T>& input, const Tensor4<T>& weight,
                             std::span<const T> bias, UpConvCache<T>* cache = nullptr);

template <class T>
ParamGrads<T> upconv2x2_backward(const UpConvCache<T>& cache, const Tensor4<T>& weight,
                                 const Tensor4<T>& grad_out);

template <class T>
Tensor4<T> relu_forward(const Tensor4<T>& input);

/// Takes the forward *output*; the gradient passes where it is positive.
template <class T>
Tensor4<T> relu_backward(const Tensor4<T>& output, const Tensor4<T>& grad_out);

template <class T>
Tensor4<T> sigmoid_forward(const Tensor4<T>& input);

/// Takes the forward *output* s; returns grad * s * (1 - s).
template <class T>
Tensor4<T> sigmoid_backward(const Tensor4<T>& output, const Tensor4<T>& grad_out);

template <class T>
Tensor4<T> concat_channels(const Tensor4<T>& a, const Tensor4<T>& b);

/// Splits a gradient of `concat_channels(a, b)` back into (grad_a, grad_b).
template <class T>
std::pair<Tensor4<T>, Tensor4<T>> split_channels(const Tensor4<T>& g, int channels_a);

}  // namespace radnet::nn
