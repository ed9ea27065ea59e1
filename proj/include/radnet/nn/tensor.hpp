// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace radnet::nn {

/// Dense NCHW tensor.
template <class T>
struct Tensor4 {
    int n = 0;
    int c = 0;
    int h = 0;
    int w = 0;
    std::vector<T> v;

    Tensor4() = default;
    Tensor4(int n_, int c_, int h_, int w_, T fill = T(0))
        : n(n_), c(c_), h(h_), w(w_), v(static_cast<std::size_t>(n_) * c_ * h_ * w_, fill) {
        if (n_ < 0 || c_ < 0 || h_ < 0 || w_ < 0) throw std::invalid_argument("negative tensor dim");
    }

    std::size_t size() const { return v.size(); }
    std::size_t plane() const { return static_cast<std::size_t>(h) * w; }
    std::array<int, 4> shape() const { return {n, c, h, w}; }
    bool same_shape(const Tensor4& o) const { return shape() == o.shape(); }

    std::size_t index(int b, int ch, int y, int x) const {
        return ((static_cast<std::size_t>(b) * c + ch) * h + y) * w + x;
    }
    T& operator()(int b, int ch, int y, int x) { return v[index(b, ch, y, x)]; }
    const T& operator()(int b, int ch, int y, int x) const { return v[index(b, ch, y, x)]; }

    T* channel(int b, int ch) { return v.data() + index(b, ch, 0, 0); }
    const T* channel(int b, int ch) const { return v.data() + index(b, ch, 0, 0); }

    std::string shape_str() const {
        return "(" + std::to_string(n) + "," + std::to_string(c) + "," + std::to_string(h) + "," +
               std::to_string(w) + ")";
    }
};

template <class To, class From>
Tensor4<To> tensor_cast(const Tensor4<From>& t) {
    Tensor4<To> out;
    out.n = t.n;
    out.c = t.c;
    out.h = t.h;
    out.w = t.w;
    out.v.assign(t.v.begin(), t.v.end());
    return out;
}

}  // namespace radnet::nn
