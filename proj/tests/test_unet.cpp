#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "radnet/nn/unet.hpp"

using namespace radnet::nn;

namespace {

template <class T>
double probe_sum(const UNetOutputs<T>& o, const Tensor4<T>& a, const Tensor4<T>& b,
                 const Tensor4<T>& c) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += o.presence.v[i] * a.v[i] + o.coord_x.v[i] * b.v[i] + o.coord_y.v[i] * c.v[i];
    return s;
}

}  // namespace

TEST_CASE("hidden-layer census") {
    NetworkSpec spec;
    const auto c = spec.census();
    CHECK(c.conv == 20);
    CHECK(c.maxpool == 4);
    CHECK(c.upconv == 4);
    CHECK(c.total() == 28);
    CHECK(spec.layers().size() == 27);  // 20 conv + 4 up-conv + 3 heads
    CHECK_THROWS_AS(NetworkSpec(32, {16, 32, 64, 128}), std::invalid_argument);
    CHECK_THROWS_AS(NetworkSpec(0), std::invalid_argument);
}

TEST_CASE("parameter count follows the layer table") {
    NetworkSpec spec;
    std::size_t expect = 0;
    for (const auto& l : spec.layers()) {
        const auto s = l.weight_shape();
        expect += std::size_t(s[0]) * s[1] * s[2] * s[3] + std::size_t(l.out_channels);
    }
    CHECK(spec.parameter_count() == expect);
    CHECK(init_params<float>(spec, 1).count() == expect);
}

TEST_CASE("forward shapes and output range") {
    NetworkSpec spec(32, {4, 4, 4, 4, 4});
    const auto p = init_params<float>(spec, 2);
    Tensor4<float> x(2, 32, 64, 64);
    std::mt19937_64 rng(1);
    oracle::fill_normal(x, rng, 0.3);
    const auto out = unet_forward(p, spec, x);
    for (const auto* t : {&out.presence, &out.coord_x, &out.coord_y}) {
        CHECK(t->shape() == std::array<int, 4>{2, 1, 64, 64});
        for (float v : t->v) {
            CHECK(v > 0.0f);
            CHECK(v < 1.0f);
        }
    }
    CHECK_THROWS_AS(unet_forward(p, spec, Tensor4<float>(1, 32, 24, 64)), std::invalid_argument);
    CHECK_THROWS_AS(unet_forward(p, spec, Tensor4<float>(1, 16, 64, 64)), std::invalid_argument);
}

TEST_CASE("default network on a desk-scale input") {
    NetworkSpec spec;
    const auto p = init_params<float>(spec, 3);
    Tensor4<float> x(1, 32, 64, 64);
    std::mt19937_64 rng(2);
    oracle::fill_normal(x, rng, 0.1);
    const auto out = unet_forward(p, spec, x);
    CHECK(out.presence.shape() == std::array<int, 4>{1, 1, 64, 64});
}

TEST_CASE("init_params") {
    NetworkSpec spec;
    const auto a = init_params<float>(spec, 11), b = init_params<float>(spec, 11);
    const auto c = init_params<float>(spec, 12);
    for (std::size_t i = 0; i < a.weights.size(); ++i) {
        CHECK(a.weights[i].v == b.weights[i].v);
        for (float v : a.biases[i]) CHECK(v == 0.0f);
    }
    CHECK(a.weights[0].v != c.weights[0].v);

    for (std::size_t i = 0; i < spec.layers().size(); ++i) {
        const auto& w = a.weights[i].v;
        if (w.size() < 1000) continue;
        double s2 = 0;
        for (float v : w) s2 += double(v) * v;
        const double sd = std::sqrt(s2 / double(w.size()));
        const double expect = std::sqrt(2.0 / spec.layers()[i].fan_in());
        CAPTURE(spec.layers()[i].name);
        CHECK(std::abs(sd / expect - 1.0) < 0.1);
    }
}

TEST_CASE("forward is deterministic and batch-equivariant") {
    NetworkSpec spec(8, {3, 4, 5, 6, 7});
    const auto p = init_params<double>(spec, 4);
    Tensor4<double> x(3, 8, 16, 32);
    std::mt19937_64 rng(3);
    oracle::fill_normal(x, rng);
    const auto all = unet_forward(p, spec, x);
    const auto again = unet_forward(p, spec, x);
    CHECK(all.presence.v == again.presence.v);
    const std::size_t plane = 8u * 16 * 32;
    for (int s = 0; s < 3; ++s) {
        Tensor4<double> one(1, 8, 16, 32);
        std::copy_n(x.v.begin() + std::ptrdiff_t(s * plane), plane, one.v.begin());
        const auto o = unet_forward(p, spec, one);
        double err = 0;
        for (int i = 0; i < 16 * 32; ++i) {
            err = std::max(err, std::abs(o.presence.v[i] - all.presence.v[s * 512 + i]));
            err = std::max(err, std::abs(o.coord_x.v[i] - all.coord_x.v[s * 512 + i]));
            err = std::max(err, std::abs(o.coord_y.v[i] - all.coord_y.v[s * 512 + i]));
        }
        CHECK(err < 1e-10);
    }
}

TEST_CASE("full tiny network passes central differences") {
    NetworkSpec spec(8, {2, 2, 2, 2, 2});
    auto p = init_params<double>(spec, 5);
    std::mt19937_64 rng(6);
    for (auto& b : p.biases)
        for (auto& v : b) v = std::normal_distribution<double>(0.0, 0.1)(rng);
    Tensor4<double> x(2, 8, 16, 16);
    oracle::fill_normal(x, rng);
    Tensor4<double> a(2, 1, 16, 16), b = a, c = a;
    oracle::fill_normal(a, rng);
    oracle::fill_normal(b, rng);
    oracle::fill_normal(c, rng);

    UNetCache<double> cache;
    const auto out = unet_forward(p, spec, x, &cache);
    HeadGrads<double> g{a, b, c};
    auto through_sigmoid = [](Tensor4<double>& gr, const Tensor4<double>& s) {
        for (std::size_t i = 0; i < gr.size(); ++i) gr.v[i] *= s.v[i] * (1 - s.v[i]);
    };
    through_sigmoid(g.presence, out.presence);
    through_sigmoid(g.coord_x, out.coord_x);
    through_sigmoid(g.coord_y, out.coord_y);
    const auto grads = unet_backward(p, spec, cache, g);

    const double h = 1e-6;
    double num = 0, den = 0;
    for (std::size_t l = 0; l < p.weights.size(); ++l) {
        auto check = [&](double& param, double analytic) {
            const double keep = param;
            param = keep + h;
            const double up = probe_sum(unet_forward(p, spec, x), a, b, c);
            param = keep - h;
            const double dn = probe_sum(unet_forward(p, spec, x), a, b, c);
            param = keep;
            const double fd = (up - dn) / (2 * h);
            num = std::max(num, std::abs(fd - analytic));
            den = std::max(den, std::abs(fd));
        };
        for (std::size_t i = 0; i < p.weights[l].size(); ++i)
            check(p.weights[l].v[i], grads.weights[l].v[i]);
        for (std::size_t i = 0; i < p.biases[l].size(); ++i)
            check(p.biases[l][i], grads.biases[l][i]);
    }
    CHECK(den > 0.0);
    CHECK(num / den < 1e-4);
}

TEST_CASE("params_cast round trips float through double") {
    NetworkSpec spec(8, {2, 2, 2, 2, 2});
    const auto p = init_params<float>(spec, 7);
    const auto back = params_cast<float>(params_cast<double>(p));
    for (std::size_t i = 0; i < p.weights.size(); ++i) CHECK(back.weights[i].v == p.weights[i].v);
}
