// Slow reference implementations used as test oracles. None of them share
// code with the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "radnet/nn/tensor.hpp"
#include "radnet/scene.hpp"

namespace oracle {

using cd = std::complex<double>;

// X[k][m] = sum_{t,s} x[s][t] exp(-2pi j (k t / K + m' s / M)), where s indexes
// chirps, t fast-time samples and m' = m - M/2 (the shifted doppler bin).
inline std::vector<cd> range_doppler_naive(const std::vector<cd>& x, int K, int M) {
    const double pi = 3.14159265358979323846;
    std::vector<cd> out(static_cast<std::size_t>(K) * M);
    for (int k = 0; k < K; ++k)
        for (int m = 0; m < M; ++m) {
            const int mu = (m + M / 2) % M;
            cd acc = 0;
            for (int s = 0; s < M; ++s)
                for (int t = 0; t < K; ++t) {
                    const double arg = -2.0 * pi * (double(k) * t / K + double(mu) * s / M);
                    acc += x[static_cast<std::size_t>(s) * K + t] * cd(std::cos(arg), std::sin(arg));
                }
            out[static_cast<std::size_t>(k) * M + m] = acc;
        }
    return out;
}

// Six nested loops, zero padding, arbitrary stride.
template <class T>
radnet::nn::Tensor4<T> conv2d(const radnet::nn::Tensor4<T>& in, const radnet::nn::Tensor4<T>& w,
                              const std::vector<T>& b, int pad, int stride) {
    const int ho = (in.h + 2 * pad - w.h) / stride + 1;
    const int wo = (in.w + 2 * pad - w.w) / stride + 1;
    radnet::nn::Tensor4<T> out(in.n, w.n, ho, wo);
    for (int s = 0; s < in.n; ++s)
        for (int o = 0; o < w.n; ++o)
            for (int y = 0; y < ho; ++y)
                for (int x = 0; x < wo; ++x) {
                    T acc = b[o];
                    for (int i = 0; i < in.c; ++i)
                        for (int dy = 0; dy < w.h; ++dy)
                            for (int dx = 0; dx < w.w; ++dx) {
                                const int sy = y * stride + dy - pad, sx = x * stride + dx - pad;
                                if (sy < 0 || sy >= in.h || sx < 0 || sx >= in.w) continue;
                                acc += in(s, i, sy, sx) * w(o, i, dy, dx);
                            }
                    out(s, o, y, x) = acc;
                }
    return out;
}

inline double seg_loss(const std::vector<double>& p, const std::vector<double>& g) {
    double bce = 0, pg = 0, pp = 0, gg = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double q = std::clamp(p[i], 1e-7, 1.0 - 1e-7);
        bce += -(g[i] * std::log(q) + (1.0 - g[i]) * std::log(1.0 - q));
        pg += p[i] * g[i];
        pp += p[i] * p[i];
        gg += g[i] * g[i];
    }
    return bce / double(p.size()) - 2.0 * pg / (pp + gg + 1e-7);
}

inline double masked_mse(const std::vector<double>& c, const std::vector<double>& cg,
                         const std::vector<double>& mask) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        num += mask[i] * (c[i] - cg[i]) * (c[i] - cg[i]);
        den += mask[i];
    }
    return num / std::max(1.0, den);
}

template <class T>
void fill_normal(radnet::nn::Tensor4<T>& t, std::mt19937_64& rng, double sd = 1.0) {
    std::normal_distribution<double> nd(0.0, sd);
    for (auto& v : t.v) v = static_cast<T>(nd(rng));
}

// Noiseless, clutter-free configuration for analytic checks.
inline radnet::RadarConfig clean_config(int K = 64, int M = 64) {
    radnet::RadarConfig c;
    c.samples_per_chirp = K;
    c.chirps_per_frame = M;
    c.noise_sigma = 0.0;
    return c;
}

}  // namespace oracle
