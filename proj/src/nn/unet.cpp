// SPDX-License-Identifier: Apache-2.0
#include "radnet/nn/unet.hpp"
#include "radnet/parallel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace radnet::nn {

namespace {

constexpr int kEncoderBase = 0;
constexpr int kDecoderBase = 2 * NetworkSpec::kLevels;                       // 10
constexpr int kSharedBase = kDecoderBase + 3 * (NetworkSpec::kLevels - 1);   // 22
constexpr int kHeadBase = kSharedBase + 2;                                   // 24

int enc_layer(int level, int j) { return kEncoderBase + 2 * level + j; }
// Decoder levels run from 3 down to 0; slot 0 is the up-conv, 1 and 2 the convs.
int dec_layer(int level, int slot) { return kDecoderBase + 3 * (NetworkSpec::kLevels - 2 - level) + slot; }

template <class T>
std::span<const T> bias_of(const NetworkParams<T>& p, int idx) {
    return std::span<const T>(p.biases[idx]);
}

template <class T>
void add_into(Tensor4<T>& dst, const Tensor4<T>& src) {
    if (!dst.same_shape(src)) throw std::logic_error("gradient shape mismatch");
    for (std::size_t i = 0; i < dst.size(); ++i) dst.v[i] += src.v[i];
}

}  // namespace

std::array<int, 4> LayerInfo::weight_shape() const {
    if (kind == LayerKind::UpConv2x2) return {in_channels, out_channels, 2, 2};
    const int k = kernel();
    return {out_channels, in_channels, k, k};
}

int LayerInfo::fan_in() const {
    return kind == LayerKind::UpConv2x2 ? in_channels : in_channels * kernel() * kernel();
}

NetworkSpec::NetworkSpec(int input_channels, std::vector<int> widths)
    : input_channels_(input_channels), widths_(std::move(widths)) {
    if (input_channels_ <= 0) throw std::invalid_argument("input_channels must be positive");
    for (int w : widths_)
        if (w <= 0) throw std::invalid_argument("channel widths must be positive");

    const int levels = static_cast<int>(widths_.size());
    int in = input_channels_;
    for (int l = 0; l < levels; ++l) {
        const auto tag = "enc" + std::to_string(l);
        layers_.push_back({tag + "_conv1", LayerKind::Conv3x3, in, widths_[l]});
        layers_.push_back({tag + "_conv2", LayerKind::Conv3x3, widths_[l], widths_[l]});
        in = widths_[l];
    }
    for (int l = levels - 2; l >= 0; --l) {
        const auto tag = "dec" + std::to_string(l);
        layers_.push_back({tag + "_up", LayerKind::UpConv2x2, in, widths_[l]});
        layers_.push_back({tag + "_conv1", LayerKind::Conv3x3, 2 * widths_[l], widths_[l]});
        layers_.push_back({tag + "_conv2", LayerKind::Conv3x3, widths_[l], widths_[l]});
        in = widths_[l];
    }
    layers_.push_back({"shared_conv1", LayerKind::Conv3x3, in, in});
    layers_.push_back({"shared_conv2", LayerKind::Conv3x3, in, in});
    layers_.push_back({"head_p", LayerKind::Conv1x1, in, 1});
    layers_.push_back({"head_x", LayerKind::Conv1x1, in, 1});
    layers_.push_back({"head_y", LayerKind::Conv1x1, in, 1});

    const auto c = census();
    if (c.conv != 20 || c.maxpool != 4 || c.upconv != 4 || c.total() != kHiddenLayers)
        throw std::invalid_argument("network census is " + std::to_string(c.conv) + " conv / " +
                                    std::to_string(c.maxpool) + " pool / " +
                                    std::to_string(c.upconv) + " up-conv; expected 20/4/4 = 28");
}

HiddenCensus NetworkSpec::census() const {
    HiddenCensus c;
    for (const auto& l : layers_) {
        if (l.kind == LayerKind::Conv3x3) ++c.conv;
        if (l.kind == LayerKind::UpConv2x2) ++c.upconv;
    }
    c.maxpool = static_cast<int>(widths_.size()) - 1;
    return c;
}

std::size_t NetworkSpec::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) {
        const auto s = l.weight_shape();
        n += static_cast<std::size_t>(s[0]) * s[1] * s[2] * s[3] + l.out_channels;
    }
    return n;
}

template <class T>
NetworkParams<T> NetworkParams<T>::zeros(const NetworkSpec& spec) {
    NetworkParams<T> p;
    for (const auto& l : spec.layers()) {
        const auto s = l.weight_shape();
        p.weights.emplace_back(s[0], s[1], s[2], s[3]);
        p.biases.emplace_back(l.out_channels, T(0));
    }
    return p;
}

template <class T>
std::size_t NetworkParams<T>::count() const {
    std::size_t n = 0;
    for (const auto& w : weights) n += w.size();
    for (const auto& b : biases) n += b.size();
    return n;
}

template <class T>
NetworkParams<T> init_params(const NetworkSpec& spec, std::uint64_t seed) {
    auto p = NetworkParams<T>::zeros(spec);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < spec.layers().size(); ++i) {
        std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / spec.layers()[i].fan_in()));
        for (auto& w : p.weights[i].v) w = static_cast<T>(dist(rng));
    }
    return p;
}

template <class T>
UNetOutputs<T> unet_forward(const NetworkParams<T>& params, const NetworkSpec& spec,
                            const Tensor4<T>& input, UNetCache<T>* cache) {
    const auto& layers = spec.layers();
    if (params.weights.size() != layers.size())
        throw std::invalid_argument("parameter set does not match the network spec");
    const FlushDenormals ftz;
    if (input.c != spec.input_channels())
        throw std::invalid_argument("input has " + std::to_string(input.c) + " channels, spec wants " +
                                    std::to_string(spec.input_channels()));
    const int div = NetworkSpec::spatial_divisor();
    if (input.h % div != 0 || input.w % div != 0 || input.h == 0 || input.w == 0)
        throw std::invalid_argument("input spatial dims " + input.shape_str() +
                                    " not divisible by " + std::to_string(div));

    const int levels = NetworkSpec::kLevels;
    if (cache) {
        cache->conv.assign(layers.size(), {});
        cache->up.assign(layers.size(), {});
        cache->activation.assign(layers.size(), {});
        cache->pool.assign(levels - 1, {});
        cache->skip_channels.assign(levels - 1, 0);
    }

    auto conv_relu = [&](const Tensor4<T>& x, int idx) {
        const auto& l = layers[idx];
        const int pad = l.kernel() / 2;
        auto y = relu_forward(conv2d_forward(x, params.weights[idx], bias_of(params, idx), pad, 1,
                                             cache ? &cache->conv[idx] : nullptr));
        if (cache) cache->activation[idx] = y;
        return y;
    };

    std::vector<Tensor4<T>> skips(levels - 1);
    Tensor4<T> x = input;
    for (int l = 0; l < levels; ++l) {
        x = conv_relu(x, enc_layer(l, 0));
        x = conv_relu(x, enc_layer(l, 1));
        if (l < levels - 1) {
            skips[l] = x;
            x = maxpool2x2_forward(x, cache ? &cache->pool[l] : nullptr);
        }
    }
    for (int l = levels - 2; l >= 0; --l) {
        const int up = dec_layer(l, 0);
        auto u = upconv2x2_forward(x, params.weights[up], bias_of(params, up),
                                   cache ? &cache->up[up] : nullptr);
        if (cache) cache->skip_channels[l] = skips[l].c;
        x = concat_channels(skips[l], u);
        x = conv_relu(x, dec_layer(l, 1));
        x = conv_relu(x, dec_layer(l, 2));
    }
    x = conv_relu(x, kSharedBase);
    x = conv_relu(x, kSharedBase + 1);

    auto head = [&](int idx) {
        return sigmoid_forward(conv2d_forward(x, params.weights[idx], bias_of(params, idx), 0, 1,
                                              cache ? &cache->conv[idx] : nullptr));
    };
    UNetOutputs<T> out{head(kHeadBase), head(kHeadBase + 1), head(kHeadBase + 2)};
    if (cache) cache->outputs = out;
    return out;
}

template <class T>
NetworkParams<T> unet_backward(const NetworkParams<T>& params, const NetworkSpec& spec,
                               const UNetCache<T>& cache, const HeadGrads<T>& grads) {
    const auto& layers = spec.layers();
    if (cache.conv.size() != layers.size()) throw std::invalid_argument("cache not populated");
    const FlushDenormals ftz;
    const int levels = NetworkSpec::kLevels;
    auto g_params = NetworkParams<T>::zeros(spec);

    auto store = [&](int idx, ParamGrads<T>& pg) {
        g_params.weights[idx] = std::move(pg.grad_weight);
        g_params.biases[idx] = std::move(pg.grad_bias);
        return std::move(pg.grad_input);
    };
    // Backward through relu(conv(.)) at layer idx.
    auto conv_relu_back = [&](const Tensor4<T>& g_out, int idx) {
        auto g = relu_backward(cache.activation[idx], g_out);
        auto pg = conv2d_backward(cache.conv[idx], params.weights[idx], g);
        return store(idx, pg);
    };

    Tensor4<T> g;
    const Tensor4<T>* head_grads[3] = {&grads.presence, &grads.coord_x, &grads.coord_y};
    for (int h = 0; h < 3; ++h) {
        const int idx = kHeadBase + h;
        auto pg = conv2d_backward(cache.conv[idx], params.weights[idx], *head_grads[h]);
        auto gi = store(idx, pg);
        if (h == 0) g = std::move(gi);
        else add_into(g, gi);
    }
    g = conv_relu_back(g, kSharedBase + 1);
    g = conv_relu_back(g, kSharedBase);

    std::vector<Tensor4<T>> skip_grads(levels - 1);
    for (int l = 0; l <= levels - 2; ++l) {
        g = conv_relu_back(g, dec_layer(l, 2));
        g = conv_relu_back(g, dec_layer(l, 1));
        auto [g_skip, g_up] = split_channels(g, cache.skip_channels[l]);
        skip_grads[l] = std::move(g_skip);
        const int up = dec_layer(l, 0);
        auto pg = upconv2x2_backward(cache.up[up], params.weights[up], g_up);
        g = store(up, pg);
    }
    for (int l = levels - 1; l >= 0; --l) {
        if (l < levels - 1) {
            g = maxpool2x2_backward(cache.pool[l], g);
            add_into(g, skip_grads[l]);
        }
        g = conv_relu_back(g, enc_layer(l, 1));
        g = conv_relu_back(g, enc_layer(l, 0));
    }
    return g_params;
}

template struct NetworkParams<float>;
template struct NetworkParams<double>;
template NetworkParams<float> init_params(const NetworkSpec&, std::uint64_t);
template NetworkParams<double> init_params(const NetworkSpec&, std::uint64_t);
template UNetOutputs<float> unet_forward(const NetworkParams<float>&, const NetworkSpec&,
                                         const Tensor4<float>&, UNetCache<float>*);
template UNetOutputs<double> unet_forward(const NetworkParams<double>&, const NetworkSpec&,
                                          const Tensor4<double>&, UNetCache<double>*);
template NetworkParams<float> unet_backward(const NetworkParams<float>&, const NetworkSpec&,
                                            const UNetCache<float>&, const HeadGrads<float>&);
template NetworkParams<double> unet_backward(const NetworkParams<double>&, const NetworkSpec&,
                                             const UNetCache<double>&, const HeadGrads<double>&);

}  // namespace radnet::nn
