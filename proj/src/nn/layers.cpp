// SPDX-License-Identifier: Apache-2.0
#include "radnet/nn/layers.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace radnet::nn {

namespace {

template <class T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <class T>
using MatMap = Eigen::Map<RowMat<T>>;
template <class T>
using ConstMatMap = Eigen::Map<const RowMat<T>>;

int out_extent(int in, int k, int pad, int stride) { return (in + 2 * pad - k) / stride + 1; }

// (C x B*HW) row-major buffer <-> NCHW tensor.
template <class T>
void nchw_to_cm(const Tensor4<T>& t, std::vector<T>& out) {
    const std::size_t hw = t.plane();
    const std::size_t cols = static_cast<std::size_t>(t.n) * hw;
    out.resize(static_cast<std::size_t>(t.c) * cols);
    for (int ch = 0; ch < t.c; ++ch)
        for (int b = 0; b < t.n; ++b)
            std::copy_n(t.channel(b, ch), hw, out.data() + ch * cols + b * hw);
}

template <class T>
void cm_to_nchw(const T* src, Tensor4<T>& t) {
    const std::size_t hw = t.plane();
    const std::size_t cols = static_cast<std::size_t>(t.n) * hw;
    for (int ch = 0; ch < t.c; ++ch)
        for (int b = 0; b < t.n; ++b) std::copy_n(src + ch * cols + b * hw, hw, t.channel(b, ch));
}

// Column tiles cover output rows [y0, y1) of one sample, sized to stay cache resident.
struct Tile {
    int b = 0;
    int y0 = 0;
    int y1 = 0;
};

template <class T>
int tile_rows(int kdim, int ho, int wo) {
    constexpr std::size_t kBudget = 2048 * 1024;
    const std::size_t per_row = static_cast<std::size_t>(kdim) * wo * sizeof(T);
    return std::clamp(static_cast<int>(kBudget / std::max<std::size_t>(per_row, 1)), 1, ho);
}

// Output columns x whose source column x*stride + offset lies inside [0, width).
std::pair<int, int> valid_span(int wo, int width, int offset, int stride) {
    int lo = 0;
    while (lo < wo && lo * stride + offset < 0) ++lo;
    int hi = wo;
    while (hi > lo && (hi - 1) * stride + offset >= width) --hi;
    return {lo, hi};
}

template <class T>
void im2col_tile(const Tensor4<T>& in, int kh, int kw, int pad, int stride, int wo, Tile t,
                 T* cols) {
    const std::size_t ncols = static_cast<std::size_t>(t.y1 - t.y0) * wo;
    for (int ci = 0; ci < in.c; ++ci) {
        const T* src = in.channel(t.b, ci);
        for (int dy = 0; dy < kh; ++dy)
            for (int dx = 0; dx < kw; ++dx) {
                T* row = cols + ((static_cast<std::size_t>(ci) * kh + dy) * kw + dx) * ncols;
                for (int y = t.y0; y < t.y1; ++y) {
                    T* drow = row + static_cast<std::size_t>(y - t.y0) * wo;
                    const int sy = y * stride + dy - pad;
                    if (sy < 0 || sy >= in.h) {
                        std::fill_n(drow, wo, T(0));
                        continue;
                    }
                    const T* srow = src + static_cast<std::size_t>(sy) * in.w;
                    const auto [lo, hi] = valid_span(wo, in.w, dx - pad, stride);
                    std::fill(drow, drow + lo, T(0));
                    if (stride == 1) {
                        std::copy(srow + lo + dx - pad, srow + hi + dx - pad, drow + lo);
                    } else {
                        for (int x = lo; x < hi; ++x) drow[x] = srow[x * stride + dx - pad];
                    }
                    std::fill(drow + hi, drow + wo, T(0));
                }
            }
    }
}

template <class T>
void col2im_tile(const T* cols, int kh, int kw, int pad, int stride, int wo, Tile t,
                 Tensor4<T>& grad_in) {
    const std::size_t ncols = static_cast<std::size_t>(t.y1 - t.y0) * wo;
    for (int ci = 0; ci < grad_in.c; ++ci) {
        T* dst = grad_in.channel(t.b, ci);
        for (int dy = 0; dy < kh; ++dy)
            for (int dx = 0; dx < kw; ++dx) {
                const T* row = cols + ((static_cast<std::size_t>(ci) * kh + dy) * kw + dx) * ncols;
                for (int y = t.y0; y < t.y1; ++y) {
                    const int sy = y * stride + dy - pad;
                    if (sy < 0 || sy >= grad_in.h) continue;
                    T* drow = dst + static_cast<std::size_t>(sy) * grad_in.w;
                    const T* srow = row + static_cast<std::size_t>(y - t.y0) * wo;
                    const auto [lo, hi] = valid_span(wo, grad_in.w, dx - pad, stride);
                    T* base = drow + dx - pad;
                    if (stride == 1) {
                        for (int x = lo; x < hi; ++x) base[x] += srow[x];
                    } else {
                        for (int x = lo; x < hi; ++x) base[x * stride] += srow[x];
                    }
                }
            }
    }
}

// Channel rows of one tile inside an NCHW tensor: rows are `plane` apart.
template <class T>
using StridedMap = Eigen::Map<RowMat<T>, Eigen::Unaligned, Eigen::OuterStride<>>;
template <class T>
using ConstStridedMap = Eigen::Map<const RowMat<T>, Eigen::Unaligned, Eigen::OuterStride<>>;

// Stride-1 convolution as a sum of shifted GEMMs over zero-padded planes laid
// side by side: sample b occupies columns [b*P, (b+1)*P) with P = Hp*Wp, and
// output (y, x) of that sample sits at column b*P + y*Wp + x.
template <class T>
struct PaddedLayout {
    int hp = 0, wp = 0, pad = 0;
    Eigen::Index plane = 0;

    PaddedLayout(int h, int w, int pad_) : hp(h + 2 * pad_), wp(w + 2 * pad_), pad(pad_) {
        plane = static_cast<Eigen::Index>(hp) * wp;
    }
    Eigen::Index col(int b, int y, int x) const { return b * plane + y * wp + x; }
};

template <class T>
void pack_padded(const Tensor4<T>& in, int b0, int count, const PaddedLayout<T>& lay, RowMat<T>& xp) {
    xp.setZero(in.c, count * lay.plane);
    for (int s = 0; s < count; ++s)
        for (int ci = 0; ci < in.c; ++ci) {
            const T* src = in.channel(b0 + s, ci);
            for (int y = 0; y < in.h; ++y)
                std::copy_n(src + static_cast<std::size_t>(y) * in.w, in.w,
                            &xp(ci, lay.col(s, y + lay.pad, lay.pad)));
        }
}

// One (out x in) matrix per kernel tap.
template <class T>
std::vector<RowMat<T>> split_taps(const Tensor4<T>& weight) {
    std::vector<RowMat<T>> taps(static_cast<std::size_t>(weight.h) * weight.w,
                                RowMat<T>(weight.n, weight.c));
    for (int o = 0; o < weight.n; ++o)
        for (int i = 0; i < weight.c; ++i)
            for (int d = 0; d < weight.h * weight.w; ++d)
                taps[d](o, i) = weight.v[(static_cast<std::size_t>(o) * weight.c + i) *
                                             weight.h * weight.w + d];
    return taps;
}

template <class T>
int samples_per_chunk(int channels, Eigen::Index plane, int batch) {
    constexpr std::size_t kBudget = 1 << 20;
    const std::size_t per = static_cast<std::size_t>(channels) * plane * sizeof(T);
    return std::clamp(static_cast<int>(kBudget / std::max<std::size_t>(per, 1)), 1, batch);
}

template <class T>
Tensor4<T> conv_direct_forward(const Tensor4<T>& input, const Tensor4<T>& weight,
                               std::span<const T> bias, int pad, int ho, int wo) {
    const PaddedLayout<T> lay(input.h, input.w, pad);
    const auto taps = split_taps(weight);
    const int chunk = samples_per_chunk<T>(std::max(input.c, weight.n), lay.plane, input.n);
    const Eigen::Index reach = static_cast<Eigen::Index>(weight.h - 1) * lay.wp + weight.w - 1;
    Tensor4<T> out(input.n, weight.n, ho, wo);
    RowMat<T> xp, y;
    for (int b0 = 0; b0 < input.n; b0 += chunk) {
        const int count = std::min(chunk, input.n - b0);
        pack_padded(input, b0, count, lay, xp);
        const Eigen::Index span = count * lay.plane - reach;
        y.setZero(weight.n, span);
        for (int dy = 0; dy < weight.h; ++dy)
            for (int dx = 0; dx < weight.w; ++dx)
                y.noalias() += taps[dy * weight.w + dx] * xp.middleCols(dy * lay.wp + dx, span);
        for (int s = 0; s < count; ++s)
            for (int o = 0; o < weight.n; ++o) {
                T* dst = out.channel(b0 + s, o);
                for (int r = 0; r < ho; ++r) {
                    const T* src = &y(o, lay.col(s, r, 0));
                    for (int x = 0; x < wo; ++x) dst[r * wo + x] = src[x] + bias[o];
                }
            }
    }
    return out;
}

template <class T>
ParamGrads<T> conv_direct_backward(const Tensor4<T>& input, const Tensor4<T>& weight,
                                   const Tensor4<T>& grad_out, int pad) {
    const int ho = grad_out.h, wo = grad_out.w;
    const PaddedLayout<T> lay(input.h, input.w, pad);
    const auto taps = split_taps(weight);
    std::vector<RowMat<T>> gtaps(taps.size(), RowMat<T>::Zero(weight.n, weight.c));
    const int chunk = samples_per_chunk<T>(std::max(input.c, weight.n), lay.plane, input.n);
    const Eigen::Index reach = static_cast<Eigen::Index>(weight.h - 1) * lay.wp + weight.w - 1;

    ParamGrads<T> out;
    out.grad_input = Tensor4<T>(input.n, input.c, input.h, input.w);
    out.grad_bias.assign(weight.n, T(0));
    RowMat<T> xp, gp, gxp;
    for (int b0 = 0; b0 < input.n; b0 += chunk) {
        const int count = std::min(chunk, input.n - b0);
        const Eigen::Index span = count * lay.plane - reach;
        pack_padded(input, b0, count, lay, xp);
        gp.setZero(weight.n, span);
        for (int s = 0; s < count; ++s)
            for (int o = 0; o < weight.n; ++o) {
                const T* src = grad_out.channel(b0 + s, o);
                for (int r = 0; r < ho; ++r) {
                    std::copy_n(src + static_cast<std::size_t>(r) * wo, wo, &gp(o, lay.col(s, r, 0)));
                    for (int x = 0; x < wo; ++x) out.grad_bias[o] += src[r * wo + x];
                }
            }
        gxp.setZero(input.c, count * lay.plane);
        for (int dy = 0; dy < weight.h; ++dy)
            for (int dx = 0; dx < weight.w; ++dx) {
                const int d = dy * weight.w + dx;
                const Eigen::Index off = dy * lay.wp + dx;
                gtaps[d].noalias() += gp * xp.middleCols(off, span).transpose();
                gxp.middleCols(off, span).noalias() += taps[d].transpose() * gp;
            }
        for (int s = 0; s < count; ++s)
            for (int ci = 0; ci < input.c; ++ci) {
                T* dst = out.grad_input.channel(b0 + s, ci);
                for (int r = 0; r < input.h; ++r)
                    std::copy_n(&gxp(ci, lay.col(s, r + pad, pad)), input.w,
                                dst + static_cast<std::size_t>(r) * input.w);
            }
    }
    out.grad_weight = Tensor4<T>(weight.n, weight.c, weight.h, weight.w);
    for (int o = 0; o < weight.n; ++o)
        for (int i = 0; i < weight.c; ++i)
            for (int d = 0; d < weight.h * weight.w; ++d)
                out.grad_weight.v[(static_cast<std::size_t>(o) * weight.c + i) * weight.h *
                                      weight.w + d] = gtaps[d](o, i);
    return out;
}

}  // namespace

template <class T>
Tensor4<T> conv2d_forward(const Tensor4<T>& input, const Tensor4<T>& weight,
                          std::span<const T> bias, int pad, int stride, ConvCache<T>* cache) {
    if (weight.c != input.c)
        throw std::invalid_argument("conv2d: input has " + std::to_string(input.c) +
                                    " channels, weight expects " + std::to_string(weight.c));
    if (bias.size() != static_cast<std::size_t>(weight.n))
        throw std::invalid_argument("conv2d: bias length mismatch");
    if (stride < 1 || pad < 0) throw std::invalid_argument("conv2d: bad stride/pad");
    const int ho = out_extent(input.h, weight.h, pad, stride);
    const int wo = out_extent(input.w, weight.w, pad, stride);
    if (ho <= 0 || wo <= 0) throw std::invalid_argument("conv2d: kernel larger than input");

    if (cache) {
        cache->input = input;
        cache->pad = pad;
        cache->stride = stride;
    }
    if (stride == 1) return conv_direct_forward(input, weight, bias, pad, ho, wo);

    const int kdim = input.c * weight.h * weight.w;
    const int rows = tile_rows<T>(kdim, ho, wo);
    const auto plane = static_cast<Eigen::Index>(ho) * wo;
    ConstMatMap<T> wm(weight.v.data(), weight.n, kdim);
    Tensor4<T> out(input.n, weight.n, ho, wo);
    std::vector<T> cols(static_cast<std::size_t>(kdim) * rows * wo);
    for (int b = 0; b < input.n; ++b)
        for (int y0 = 0; y0 < ho; y0 += rows) {
            const Tile t{b, y0, std::min(ho, y0 + rows)};
            const int len = (t.y1 - t.y0) * wo;
            im2col_tile(input, weight.h, weight.w, pad, stride, wo, t, cols.data());
            StridedMap<T> o(out.channel(b, 0) + static_cast<std::size_t>(y0) * wo, weight.n, len,
                            Eigen::OuterStride<>(plane));
            o.noalias() = wm * ConstMatMap<T>(cols.data(), kdim, len);
            for (int c = 0; c < weight.n; ++c) o.row(c).array() += bias[c];
        }
    return out;
}

template <class T>
ParamGrads<T> conv2d_backward(const ConvCache<T>& cache, const Tensor4<T>& weight,
                              const Tensor4<T>& grad_out) {
    const auto& input = cache.input;
    const int ho = out_extent(input.h, weight.h, cache.pad, cache.stride);
    const int wo = out_extent(input.w, weight.w, cache.pad, cache.stride);
    if (grad_out.n != input.n || grad_out.c != weight.n || grad_out.h != ho || grad_out.w != wo)
        throw std::invalid_argument("conv2d_backward: grad_out shape " + grad_out.shape_str());
    if (cache.stride == 1) return conv_direct_backward(input, weight, grad_out, cache.pad);

    const int kdim = input.c * weight.h * weight.w;
    const int rows = tile_rows<T>(kdim, ho, wo);
    const auto plane = static_cast<Eigen::Index>(ho) * wo;
    ConstMatMap<T> wm(weight.v.data(), weight.n, kdim);

    ParamGrads<T> out;
    out.grad_weight = Tensor4<T>(weight.n, weight.c, weight.h, weight.w);
    out.grad_bias.assign(weight.n, T(0));
    out.grad_input = Tensor4<T>(input.n, input.c, input.h, input.w);
    MatMap<T> gw(out.grad_weight.v.data(), weight.n, kdim);
    std::vector<T> cols(static_cast<std::size_t>(kdim) * rows * wo);
    std::vector<T> gcols(cols.size());
    for (int b = 0; b < input.n; ++b)
        for (int y0 = 0; y0 < ho; y0 += rows) {
            const Tile t{b, y0, std::min(ho, y0 + rows)};
            const int len = (t.y1 - t.y0) * wo;
            im2col_tile(input, weight.h, weight.w, cache.pad, cache.stride, wo, t, cols.data());
            ConstStridedMap<T> g(grad_out.channel(b, 0) + static_cast<std::size_t>(y0) * wo,
                                 weight.n, len, Eigen::OuterStride<>(plane));
            gw.noalias() += g * ConstMatMap<T>(cols.data(), kdim, len).transpose();
            for (int c = 0; c < weight.n; ++c) out.grad_bias[c] += g.row(c).sum();
            MatMap<T>(gcols.data(), kdim, len).noalias() = wm.transpose() * g;
            col2im_tile(gcols.data(), weight.h, weight.w, cache.pad, cache.stride, wo, t,
                        out.grad_input);
        }
    return out;
}

template <class T>
Tensor4<T> maxpool2x2_forward(const Tensor4<T>& input, PoolCache* cache) {
    if (input.h % 2 != 0 || input.w % 2 != 0)
        throw std::invalid_argument("maxpool2x2: odd spatial dims " + input.shape_str());
    Tensor4<T> out(input.n, input.c, input.h / 2, input.w / 2);
    if (cache) {
        cache->input_shape = input.shape();
        cache->argmax.resize(out.size());
    }
    std::size_t o = 0;
    for (int b = 0; b < input.n; ++b)
        for (int ch = 0; ch < input.c; ++ch)
            for (int y = 0; y < out.h; ++y)
                for (int x = 0; x < out.w; ++x, ++o) {
                    std::size_t best = input.index(b, ch, 2 * y, 2 * x);
                    for (int dy = 0; dy < 2; ++dy)
                        for (int dx = 0; dx < 2; ++dx) {
                            const auto i = input.index(b, ch, 2 * y + dy, 2 * x + dx);
                            if (input.v[i] > input.v[best]) best = i;
                        }
                    out.v[o] = input.v[best];
                    if (cache) cache->argmax[o] = static_cast<std::uint32_t>(best);
                }
    return out;
}

template <class T>
Tensor4<T> maxpool2x2_backward(const PoolCache& cache, const Tensor4<T>& grad_out) {
    const auto [n, c, h, w] = cache.input_shape;
    if (grad_out.size() != cache.argmax.size() || grad_out.h * 2 != h || grad_out.w * 2 != w)
        throw std::invalid_argument("maxpool2x2_backward: shape mismatch");
    Tensor4<T> g(n, c, h, w);
    for (std::size_t o = 0; o < grad_out.size(); ++o) g.v[cache.argmax[o]] += grad_out.v[o];
    return g;
}

template <class T>
Tensor4<T> upconv2x2_forward(const Tensor4<T>& input, const Tensor4<T>& weight,
                             std::span<const T> bias, UpConvCache<T>* cache) {
    if (weight.n != input.c || weight.h != 2 || weight.w != 2)
        throw std::invalid_argument("upconv2x2: weight shape " + weight.shape_str() +
                                    " does not fit input " + input.shape_str());
    const int cout = weight.c;
    if (bias.size() != static_cast<std::size_t>(cout))
        throw std::invalid_argument("upconv2x2: bias length mismatch");
    const int ncols = input.n * input.h * input.w;

    std::vector<T> x_cm;
    nchw_to_cm(input, x_cm);
    RowMat<T> y = ConstMatMap<T>(weight.v.data(), input.c, cout * 4).transpose() *
                  ConstMatMap<T>(x_cm.data(), input.c, ncols);

    Tensor4<T> out(input.n, cout, input.h * 2, input.w * 2);
    const int hw = input.h * input.w;
    for (int o = 0; o < cout; ++o)
        for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx) {
                const T* row = y.data() + static_cast<std::size_t>(o * 4 + dy * 2 + dx) * ncols;
                for (int b = 0; b < input.n; ++b)
                    for (int yy = 0; yy < input.h; ++yy)
                        for (int xx = 0; xx < input.w; ++xx)
                            out(b, o, 2 * yy + dy, 2 * xx + dx) =
                                row[b * hw + yy * input.w + xx] + bias[o];
            }
    if (cache) cache->input = input;
    return out;
}

template <class T>
ParamGrads<T> upconv2x2_backward(const UpConvCache<T>& cache, const Tensor4<T>& weight,
                                 const Tensor4<T>& grad_out) {
    const auto& input = cache.input;
    const int cout = weight.c;
    if (grad_out.n != input.n || grad_out.c != cout || grad_out.h != 2 * input.h ||
        grad_out.w != 2 * input.w)
        throw std::invalid_argument("upconv2x2_backward: grad_out shape " + grad_out.shape_str());
    const int hw = input.h * input.w;
    const int ncols = input.n * hw;

    RowMat<T> gy(cout * 4, ncols);
    for (int o = 0; o < cout; ++o)
        for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx) {
                T* row = gy.data() + static_cast<std::size_t>(o * 4 + dy * 2 + dx) * ncols;
                for (int b = 0; b < input.n; ++b)
                    for (int yy = 0; yy < input.h; ++yy)
                        for (int xx = 0; xx < input.w; ++xx)
                            row[b * hw + yy * input.w + xx] =
                                grad_out(b, o, 2 * yy + dy, 2 * xx + dx);
            }

    std::vector<T> x_cm;
    nchw_to_cm(input, x_cm);
    ConstMatMap<T> x(x_cm.data(), input.c, ncols);
    ConstMatMap<T> wm(weight.v.data(), input.c, cout * 4);

    ParamGrads<T> out;
    out.grad_weight = Tensor4<T>(weight.n, weight.c, 2, 2);
    MatMap<T>(out.grad_weight.v.data(), input.c, cout * 4).noalias() = x * gy.transpose();
    out.grad_bias.assign(cout, T(0));
    for (int o = 0; o < cout; ++o) out.grad_bias[o] = gy.middleRows(o * 4, 4).sum();

    RowMat<T> gx = wm * gy;
    out.grad_input = Tensor4<T>(input.n, input.c, input.h, input.w);
    cm_to_nchw(gx.data(), out.grad_input);
    return out;
}

template <class T>
Tensor4<T> relu_forward(const Tensor4<T>& input) {
    Tensor4<T> out = input;
    for (auto& x : out.v) x = x > T(0) ? x : T(0);
    return out;
}

template <class T>
Tensor4<T> relu_backward(const Tensor4<T>& output, const Tensor4<T>& grad_out) {
    if (!output.same_shape(grad_out)) throw std::invalid_argument("relu_backward: shape mismatch");
    Tensor4<T> g = grad_out;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!(output.v[i] > T(0))) g.v[i] = T(0);
    return g;
}

template <class T>
Tensor4<T> sigmoid_forward(const Tensor4<T>& input) {
    Tensor4<T> out = input;
    for (auto& x : out.v) x = T(1) / (T(1) + std::exp(-x));
    return out;
}

template <class T>
Tensor4<T> sigmoid_backward(const Tensor4<T>& output, const Tensor4<T>& grad_out) {
    if (!output.same_shape(grad_out))
        throw std::invalid_argument("sigmoid_backward: shape mismatch");
    Tensor4<T> g = grad_out;
    for (std::size_t i = 0; i < g.size(); ++i) g.v[i] *= output.v[i] * (T(1) - output.v[i]);
    return g;
}

template <class T>
Tensor4<T> concat_channels(const Tensor4<T>& a, const Tensor4<T>& b) {
    if (a.n != b.n || a.h != b.h || a.w != b.w)
        throw std::invalid_argument("concat_channels: " + a.shape_str() + " vs " + b.shape_str());
    Tensor4<T> out(a.n, a.c + b.c, a.h, a.w);
    const std::size_t hw = a.plane();
    for (int s = 0; s < a.n; ++s) {
        std::copy_n(a.channel(s, 0), a.c * hw, out.channel(s, 0));
        std::copy_n(b.channel(s, 0), b.c * hw, out.channel(s, a.c));
    }
    return out;
}

template <class T>
std::pair<Tensor4<T>, Tensor4<T>> split_channels(const Tensor4<T>& g, int channels_a) {
    if (channels_a < 0 || channels_a > g.c) throw std::invalid_argument("split_channels: bad split");
    Tensor4<T> a(g.n, channels_a, g.h, g.w), b(g.n, g.c - channels_a, g.h, g.w);
    const std::size_t hw = g.plane();
    for (int s = 0; s < g.n; ++s) {
        std::copy_n(g.channel(s, 0), a.c * hw, a.channel(s, 0));
        std::copy_n(g.channel(s, channels_a), b.c * hw, b.channel(s, 0));
    }
    return {std::move(a), std::move(b)};
}

#define RADNET_INSTANTIATE_LAYERS(T)                                                               \
    template Tensor4<T> conv2d_forward(const Tensor4<T>&, const Tensor4<T>&, std::span<const T>,   \
                                       int, int, ConvCache<T>*);                                   \
    template ParamGrads<T> conv2d_backward(const ConvCache<T>&, const Tensor4<T>&,                 \
                                           const Tensor4<T>&);                                     \
    template Tensor4<T> maxpool2x2_forward(const Tensor4<T>&, PoolCache*);                         \
    template Tensor4<T> maxpool2x2_backward(const PoolCache&, const Tensor4<T>&);                  \
    template Tensor4<T> upconv2x2_forward(const Tensor4<T>&, const Tensor4<T>&,                    \
                                          std::span<const T>, UpConvCache<T>*);                    \
    template ParamGrads<T> upconv2x2_backward(const UpConvCache<T>&, const Tensor4<T>&,            \
                                              const Tensor4<T>&);                                  \
    template Tensor4<T> relu_forward(const Tensor4<T>&);                                           \
    template Tensor4<T> relu_backward(const Tensor4<T>&, const Tensor4<T>&);                       \
    template Tensor4<T> sigmoid_forward(const Tensor4<T>&);                                        \
    template Tensor4<T> sigmoid_backward(const Tensor4<T>&, const Tensor4<T>&);                    \
    template Tensor4<T> concat_channels(const Tensor4<T>&, const Tensor4<T>&);                     \
    template std::pair<Tensor4<T>, Tensor4<T>> split_channels(const Tensor4<T>&, int);

RADNET_INSTANTIATE_LAYERS(float)
RADNET_INSTANTIATE_LAYERS(double)

#undef RADNET_INSTANTIATE_LAYERS

}  // namespace radnet::nn
