// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "radnet/nn/layers.hpp"
#include "radnet/nn/tensor.hpp"

namespace radnet::nn {

enum class LayerKind : std::uint8_t { Conv3x3 = 0, Conv1x1 = 1, UpConv2x2 = 2 };

struct LayerInfo {
    std::string name;
    LayerKind kind = LayerKind::Conv3x3;
    int in_channels = 0;
    int out_channels = 0;

    int kernel() const { return kind == LayerKind::Conv3x3 ? 3 : (kind == LayerKind::Conv1x1 ? 1 : 2); }
    /// Weight shape: (out, in, k, k) for convolutions, (in, out, 2, 2) for up-convolutions.
    std::array<int, 4> weight_shape() const;
    int fan_in() const;
};

struct HiddenCensus {
    int conv = 0;
    int maxpool = 0;
    int upconv = 0;
    int total() const { return conv + maxpool + upconv; }
};

/// U-Net variant with five encoder levels (two 3x3 convs each, 2x2 max-pool
/// between levels), four decoder levels (2x2 up-conv, skip concatenation, two
/// 3x3 convs), two shared 3x3 convs and three 1x1 sigmoid heads.
///
/// Construction throws unless the hidden stack is 20 conv + 4 pool + 4 up-conv.
class NetworkSpec {
public:
    static constexpr int kLevels = 5;
    static constexpr int kHiddenLayers = 28;

    explicit NetworkSpec(int input_channels = 32, std::vector<int> widths = {16, 32, 64, 128, 256});

    int input_channels() const { return input_channels_; }
    const std::vector<int>& widths() const { return widths_; }
    const std::vector<LayerInfo>& layers() const { return layers_; }
    HiddenCensus census() const;

    /// Spatial dims must be divisible by this.
    static constexpr int spatial_divisor() { return 1 << (kLevels - 1); }

    std::size_t parameter_count() const;

    bool operator==(const NetworkSpec& o) const {
        return input_channels_ == o.input_channels_ && widths_ == o.widths_;
    }

private:
    int input_channels_;
    std::vector<int> widths_;
    std::vector<LayerInfo> layers_;
};

/// Weights and biases parallel to NetworkSpec::layers().
template <class T>
struct NetworkParams {
    std::vector<Tensor4<T>> weights;
    std::vector<std::vector<T>> biases;

    static NetworkParams zeros(const NetworkSpec& spec);
    std::size_t count() const;
};

template <class To, class From>
NetworkParams<To> params_cast(const NetworkParams<From>& p) {
    NetworkParams<To> out;
    for (const auto& w : p.weights) out.weights.push_back(tensor_cast<To>(w));
    for (const auto& b : p.biases) out.biases.emplace_back(b.begin(), b.end());
    return out;
}

/// He-normal weights, std = sqrt(2 / fan_in); zero biases.
template <class T>
NetworkParams<T> init_params(const NetworkSpec& spec, std::uint64_t seed);

template <class T>
struct UNetOutputs {
    Tensor4<T> presence;  // C_p, (B,1,K,M)
    Tensor4<T> coord_x;   // C_x
    Tensor4<T> coord_y;   // C_y
};

template <class T>
struct UNetCache {
    std::vector<ConvCache<T>> conv;           // per layer index (unused slots empty)
    std::vector<UpConvCache<T>> up;           // per layer index
    std::vector<Tensor4<T>> activation;       // ReLU output per hidden conv layer index
    std::vector<PoolCache> pool;              // per encoder level 0..3
    std::vector<int> skip_channels;           // per decoder level
    UNetOutputs<T> outputs;
};

template <class T>
UNetOutputs<T> unet_forward(const NetworkParams<T>& params, const NetworkSpec& spec,
                            const Tensor4<T>& input, UNetCache<T>* cache = nullptr);

/// Gradients w.r.t. the three head *logits* (pre-sigmoid), each (B,1,K,M).
template <class T>
struct HeadGrads {
    Tensor4<T> presence;
    Tensor4<T> coord_x;
    Tensor4<T> coord_y;
};

template <class T>
NetworkParams<T> unet_backward(const NetworkParams<T>& params, const NetworkSpec& spec,
                               const UNetCache<T>& cache, const HeadGrads<T>& grads);

}  // namespace radnet::nn
