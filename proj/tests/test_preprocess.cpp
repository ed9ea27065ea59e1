#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "radnet/dataset.hpp"
#include "radnet/preprocess.hpp"

using namespace radnet;
using cd = std::complex<double>;

namespace {

RadarFrame random_frame(int K, int M, int N, std::uint64_t seed) {
    RadarFrame f(K, M, N);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    for (auto& z : f.samples) z = {nd(rng), nd(rng)};
    return f;
}

RangeDopplerCube random_cube(int K, int M, int N, std::uint64_t seed) {
    RangeDopplerCube c(K, M, N);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    for (auto& z : c.spectra) z = {nd(rng), nd(rng)};
    return c;
}

double max_rel_error(const RadarFrame& f, const RangeDopplerCube& cube) {
    const int K = f.samples_per_chirp, M = f.chirps_per_frame;
    double err = 0, scale = 0;
    for (int n = 0; n < f.num_receivers; ++n) {
        std::vector<cd> x(f.samples.begin() + std::ptrdiff_t(n) * K * M,
                          f.samples.begin() + std::ptrdiff_t(n + 1) * K * M);
        const auto ref = oracle::range_doppler_naive(x, K, M);
        for (int k = 0; k < K; ++k)
            for (int m = 0; m < M; ++m) {
                err = std::max(err, std::abs(ref[std::size_t(k) * M + m] - cube.at(n, k, m)));
                scale = std::max(scale, std::abs(ref[std::size_t(k) * M + m]));
            }
    }
    return err / scale;
}

}  // namespace

TEST_CASE("range_doppler of a DC frame") {
    RadarFrame f(16, 16, 1);
    for (auto& z : f.samples) z = 1.0;
    const auto cube = range_doppler(f);
    CHECK_FALSE(cube.normalized);
    for (int k = 0; k < 16; ++k)
        for (int m = 0; m < 16; ++m) {
            if (k == 0 && m == 8) CHECK(std::abs(cube.at(0, k, m) - cd(256, 0)) < 1e-12);
            else CHECK(std::abs(cube.at(0, k, m)) < 1e-12);
        }
}

TEST_CASE("range_doppler matches the naive DFT oracle") {
    for (int size : {16, 32, 64}) {
        CAPTURE(size);
        const auto f = random_frame(size, size, 2, 11 + size);
        CHECK(max_rel_error(f, range_doppler(f)) < 1e-9);
    }
    const auto f = random_frame(16, 32, 3, 5);
    CHECK(max_rel_error(f, range_doppler(f)) < 1e-9);
}

TEST_CASE("range_doppler rejects non-finite samples") {
    auto f = random_frame(16, 16, 2, 1);
    f.samples[7] = {std::nan(""), 0};
    CHECK_THROWS_AS(range_doppler(f), std::domain_error);
    f.samples[7] = {0, INFINITY};
    CHECK_THROWS_AS(range_doppler(f), std::domain_error);
}

TEST_CASE("hann window tapers a DC frame into neighbouring bins") {
    RadarFrame f(16, 16, 1);
    for (auto& z : f.samples) z = 1.0;
    const auto cube = range_doppler(f, Window::Hann);
    CHECK(std::abs(cube.at(0, 0, 8)) == doctest::Approx(64.0));
    CHECK(std::abs(cube.at(0, 1, 8)) == doctest::Approx(32.0));
    CHECK(std::abs(cube.at(0, 0, 9)) == doctest::Approx(32.0));
    CHECK(std::abs(cube.at(0, 5, 3)) < 1e-12);
    CHECK(parse_window("hann") == Window::Hann);
    CHECK(parse_window("none") == Window::None);
    CHECK_THROWS_AS(parse_window("kaiser"), std::invalid_argument);
}

TEST_CASE("phase normalization cell rule") {
    SUBCASE("rotation by the reference phase") {
        std::vector<cd> v{std::polar(2.0, kPi / 4), std::polar(3.0, kPi / 2)};
        rotate_to_reference(v, 1e-12);
        CHECK(std::abs(v[0] - cd(2, 0)) < 1e-15);
        CHECK(std::abs(v[1] - std::polar(3.0, kPi / 4)) < 1e-15);
    }
    SUBCASE("zero reference is left unchanged") {
        std::vector<cd> v{0.0, cd(0, 5)};
        rotate_to_reference(v, 1e-12);
        CHECK(v[0] == cd(0, 0));
        CHECK(v[1] == cd(0, 5));
    }
    SUBCASE("reference below epsilon is left unchanged") {
        std::vector<cd> v{cd(0, 1e-15), cd(1, 1)};
        rotate_to_reference(v, 1e-12);
        CHECK(v[0] == cd(0, 1e-15));
        CHECK(v[1] == cd(1, 1));
    }
}

TEST_CASE("phase_normalize invariants") {
    const auto cube = random_cube(16, 16, 4, 3);
    const auto norm = phase_normalize(cube);
    CHECK(norm.normalized);
    for (std::size_t c = 0; c < cube.cells(); ++c) {
        CHECK(std::abs(norm.spectra[c].imag()) < 1e-9);
        CHECK(norm.spectra[c].real() >= 0.0);
        for (int n = 0; n < 4; ++n) {
            const auto i = n * cube.cells() + c;
            CHECK(std::abs(std::abs(norm.spectra[i]) - std::abs(cube.spectra[i])) < 1e-12);
        }
    }
    CHECK_THROWS_AS(phase_normalize(norm), std::logic_error);

    // Applying the cell rule again with the guard bypassed changes nothing.
    auto twice = norm;
    normalize_cells(twice);
    for (std::size_t i = 0; i < twice.spectra.size(); ++i)
        CHECK(std::abs(twice.spectra[i] - norm.spectra[i]) < 1e-12);
}

TEST_CASE("global rotation invariance over 10^4 random cells") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    double worst = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        std::vector<cd> z(8), r(8);
        const auto rot = std::polar(1.0, ang(rng));
        for (int n = 0; n < 8; ++n) {
            z[n] = {nd(rng), nd(rng)};
            r[n] = rot * z[n];
        }
        rotate_to_reference(z, 1e-12);
        rotate_to_reference(r, 1e-12);
        for (int n = 0; n < 8; ++n) worst = std::max(worst, std::abs(z[n] - r[n]));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("orientation survives normalization on a noiseless object") {
    auto cfg = oracle::clean_config();
    ObjectState o;
    o.range = 19.2;
    o.radial_velocity = -3.3;
    o.azimuth = 0.35;
    o.elevation = -0.06;
    const auto cube = phase_normalize(range_doppler(synthesize_frame(cfg, o, {}, 1)));
    const auto [k, m] = object_cell(cfg, o);
    const auto psi = steering_phases(cfg, o.azimuth, o.elevation);
    for (int n = 0; n < cfg.num_receivers; ++n)
        CHECK(std::abs(std::remainder(std::arg(cube.at(n, k, m)) - (psi[n] - psi[0]), 2 * kPi)) <
              1e-6);
}

TEST_CASE("assemble_input") {
    SUBCASE("shape and channel order") {
        const auto fg = phase_normalize(random_cube(64, 64, 8, 1));
        const auto bg = phase_normalize(random_cube(64, 64, 8, 2));
        const auto t = assemble_input(fg, bg);
        CHECK(t.channels == 32);
        CHECK(t.values.size() == 32u * 64 * 64);
        const double s = t.scale_factor;
        CHECK(t.values[t.index(2 * 3, 5, 7)] == float(fg.at(3, 5, 7).real() / s));
        CHECK(t.values[t.index(2 * 3 + 1, 5, 7)] == float(fg.at(3, 5, 7).imag() / s));
        CHECK(t.values[t.index(16 + 2 * 6 + 1, 9, 1)] == float(bg.at(6, 9, 1).imag() / s));
        float mx = 0;
        for (float v : t.values) mx = std::max(mx, std::abs(v));
        CHECK(mx <= 1.0f);
    }
    SUBCASE("all-zero input hits the scale floor") {
        RangeDopplerCube z(16, 16, 2);
        const auto t = assemble_input(z, z);
        CHECK(t.scale_factor == 1e-12);
        for (float v : t.values) CHECK(v == 0.0f);
    }
    SUBCASE("joint positive scaling leaves the tensor unchanged") {
        auto fg = random_cube(16, 16, 2, 5), bg = random_cube(16, 16, 2, 6);
        const auto ref = assemble_input(fg, bg);
        for (double alpha : {0.25, 3.0, 1024.0}) {
            auto a = fg, b = bg;
            for (auto& z : a.spectra) z *= alpha;
            for (auto& z : b.spectra) z *= alpha;
            CHECK(assemble_input(a, b).values == ref.values);
        }
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(assemble_input(RangeDopplerCube(16, 16, 2), RangeDopplerCube(16, 32, 2)),
                        std::invalid_argument);
        auto n = RangeDopplerCube(16, 16, 2);
        n.normalized = true;
        CHECK_THROWS_AS(assemble_input(n, RangeDopplerCube(16, 16, 2)), std::invalid_argument);
    }
}

TEST_CASE("make_targets") {
    FrameTruth t;
    SUBCASE("no object") {
        const auto m = make_targets(t, 64, 64);
        CHECK(m.mask_cells() == 0);
        for (float v : m.coord_x) CHECK(v == 0.0f);
    }
    SUBCASE("interior disk") {
        t.present = true;
        t.range_bin = 16;
        t.doppler_bin = 32;
        t.x_im = 0.3;
        t.y_im = 0.55;
        const auto m = make_targets(t, 64, 64);
        CHECK(m.mask_cells() == 9);
        for (int k = 0; k < 64; ++k)
            for (int d = 0; d < 64; ++d) {
                const bool in = std::abs(k - 16) <= 1 && std::abs(d - 32) <= 1;
                CHECK(m.presence[m.index(k, d)] == (in ? 1.0f : 0.0f));
                CHECK(m.coord_x[m.index(k, d)] == (in ? 0.3f : 0.0f));
                CHECK(m.coord_y[m.index(k, d)] == (in ? 0.55f : 0.0f));
            }
    }
    SUBCASE("corner clipping and radius") {
        t.present = true;
        CHECK(make_targets(t, 64, 64).mask_cells() == 4);
        CHECK(make_targets(t, 64, 64, 0).mask_cells() == 1);
        t.range_bin = 10;
        t.doppler_bin = 10;
        CHECK(make_targets(t, 64, 64, 2).mask_cells() == 25);
    }
}

TEST_CASE("dataset assembly") {
    RadarConfig cfg;
    CameraModel cam;
    const auto clutter = realize_clutter(ClutterConfig{}, cfg, 1);
    ScenarioSpec s;
    s.background_frames = 3;
    s.foreground_frames = 4;
    const auto rec = generate_recording(cfg, cam, clutter, s, 5);
    const auto pairs = train::pair_samples(int(rec.foreground.size()), 3, 9, 0.5);
    const auto ds = build_dataset(rec.background, rec.foreground, rec.truth, pairs, {});
    REQUIRE(ds.samples.size() == pairs.size());
    CHECK(ds.channels == 32);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& smp = ds.samples[i];
        CHECK(smp.present == !pairs[i].background_only);
        CHECK(smp.targets.mask_cells() == (smp.present ? 9u : 0u));
        if (smp.present) {
            CHECK(smp.meta.range_bin == rec.truth[pairs[i].fg_index].range_bin);
            CHECK(smp.truth().x_im == doctest::Approx(rec.truth[pairs[i].fg_index].x_im));
        }
        // Reference receiver channels carry zero imaginary parts after normalization.
        for (int c = 0; c < 64 * 64; ++c) CHECK(smp.input.values[64 * 64 + c] == 0.0f);
    }

    DatasetOptions raw;
    raw.phase_normalize = false;
    const auto ds_raw = build_dataset(rec.background, rec.foreground, rec.truth, pairs, raw);
    double imag = 0;
    for (int c = 0; c < 64 * 64; ++c) imag += std::abs(ds_raw.samples[0].input.values[64 * 64 + c]);
    CHECK(imag > 0.0);
}
