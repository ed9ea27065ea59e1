// SPDX-License-Identifier: Apache-2.0
#include "radnet/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "radnet/fft.hpp"

namespace radnet {

namespace {

std::vector<double> hann(int n) {
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * i / n);
    return w;
}

double max_magnitude(const RangeDopplerCube& cube) {
    double mx = 0.0;
    for (const auto& z : cube.spectra) mx = std::max(mx, std::abs(z));
    return mx;
}

}  // namespace

Window parse_window(const std::string& name) {
    if (name == "none") return Window::None;
    if (name == "hann") return Window::Hann;
    throw std::invalid_argument("unknown window: " + name);
}

const char* window_name(Window w) { return w == Window::Hann ? "hann" : "none"; }

std::size_t TargetMaps::mask_cells() const {
    return static_cast<std::size_t>(std::count_if(presence.begin(), presence.end(),
                                                  [](float v) { return v > 0.5f; }));
}

RangeDopplerCube range_doppler(const RadarFrame& frame, Window window) {
    const int K = frame.samples_per_chirp;
    const int M = frame.chirps_per_frame;
    const int N = frame.num_receivers;
    if (K <= 0 || M <= 0 || N <= 0 || frame.samples.size() != static_cast<std::size_t>(K) * M * N)
        throw std::invalid_argument("range_doppler: frame dimensions inconsistent");
    for (const auto& z : frame.samples)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::domain_error("range_doppler: non-finite sample");

    std::vector<double> wk(K, 1.0), wm(M, 1.0);
    if (window == Window::Hann) {
        wk = hann(K);
        wm = hann(M);
    }

    RangeDopplerCube cube(K, M, N);
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(K) * M);
    for (int n = 0; n < N; ++n) {
        // rows = chirps (slow time), cols = fast-time samples
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
                buf[static_cast<std::size_t>(m) * K + k] = frame.at(n, m, k) * (wk[k] * wm[m]);
        fft2d_forward(buf, M, K);
        for (int fm = 0; fm < M; ++fm) {
            const int shifted = (fm + M / 2) % M;
            for (int fk = 0; fk < K; ++fk)
                cube.at(n, fk, shifted) = buf[static_cast<std::size_t>(fm) * K + fk];
        }
    }
    return cube;
}

void rotate_to_reference(std::span<std::complex<double>> cell, double eps) {
    if (cell.empty()) return;
    const double ref = std::abs(cell[0]);
    if (!(ref > 0.0) || ref < eps) return;
    const std::complex<double> rot = std::conj(cell[0]) / ref;
    for (std::size_t i = 1; i < cell.size(); ++i) cell[i] *= rot;
    cell[0] = {ref, 0.0};
}

void normalize_cells(RangeDopplerCube& cube) {
    const double eps = 1e-12 * max_magnitude(cube);
    const std::size_t cells = cube.cells();
    std::vector<std::complex<double>> v(cube.receivers);
    for (std::size_t c = 0; c < cells; ++c) {
        for (int n = 0; n < cube.receivers; ++n) v[n] = cube.spectra[n * cells + c];
        rotate_to_reference(v, eps);
        for (int n = 0; n < cube.receivers; ++n) cube.spectra[n * cells + c] = v[n];
    }
}

RangeDopplerCube phase_normalize(const RangeDopplerCube& cube) {
    if (cube.normalized) throw std::logic_error("cube is already phase-normalized");
    RangeDopplerCube out = cube;
    normalize_cells(out);
    out.normalized = true;
    return out;
}

InputTensor assemble_input(const RangeDopplerCube& fg, const RangeDopplerCube& bg) {
    if (fg.range_bins != bg.range_bins || fg.doppler_bins != bg.doppler_bins ||
        fg.receivers != bg.receivers)
        throw std::invalid_argument("assemble_input: dimension mismatch");
    if (fg.normalized != bg.normalized)
        throw std::invalid_argument("assemble_input: mixed normalization state");

    const int N = fg.receivers;
    InputTensor t;
    t.channels = 4 * N;
    t.range_bins = fg.range_bins;
    t.doppler_bins = fg.doppler_bins;
    t.scale_factor = std::max({1e-12, max_magnitude(fg), max_magnitude(bg)});
    t.values.resize(static_cast<std::size_t>(t.channels) * fg.cells());

    const std::size_t cells = fg.cells();
    const double s = t.scale_factor;
    auto put = [&](const RangeDopplerCube& cube, int base) {
        for (int n = 0; n < N; ++n) {
            float* re = &t.values[(base + 2 * n) * cells];
            float* im = &t.values[(base + 2 * n + 1) * cells];
            const auto* src = &cube.spectra[n * cells];
            for (std::size_t c = 0; c < cells; ++c) {
                re[c] = static_cast<float>(src[c].real() / s);
                im[c] = static_cast<float>(src[c].imag() / s);
            }
        }
    };
    put(fg, 0);
    put(bg, 2 * N);
    return t;
}

TargetMaps make_targets(const FrameTruth& truth, int range_bins, int doppler_bins, int disk_radius) {
    if (range_bins <= 0 || doppler_bins <= 0) throw std::invalid_argument("make_targets: bad dims");
    if (disk_radius < 0) throw std::invalid_argument("make_targets: negative radius");
    TargetMaps t;
    t.range_bins = range_bins;
    t.doppler_bins = doppler_bins;
    const std::size_t cells = static_cast<std::size_t>(range_bins) * doppler_bins;
    t.presence.assign(cells, 0.0f);
    t.coord_x.assign(cells, 0.0f);
    t.coord_y.assign(cells, 0.0f);
    if (!truth.present) return t;
    if (truth.range_bin < 0 || truth.range_bin >= range_bins || truth.doppler_bin < 0 ||
        truth.doppler_bin >= doppler_bins)
        throw std::invalid_argument("make_targets: ground-truth cell outside the grid");

    const int k0 = std::max(0, truth.range_bin - disk_radius);
    const int k1 = std::min(range_bins - 1, truth.range_bin + disk_radius);
    const int m0 = std::max(0, truth.doppler_bin - disk_radius);
    const int m1 = std::min(doppler_bins - 1, truth.doppler_bin + disk_radius);
    for (int k = k0; k <= k1; ++k)
        for (int m = m0; m <= m1; ++m) {
            const auto i = t.index(k, m);
            t.presence[i] = 1.0f;
            t.coord_x[i] = static_cast<float>(truth.x_im);
            t.coord_y[i] = static_cast<float>(truth.y_im);
        }
    return t;
}

}  // namespace radnet
