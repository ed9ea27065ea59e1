// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <span>
#include <vector>

#include "radnet/scene.hpp"

namespace radnet {

enum class Window { None, Hann };

Window parse_window(const std::string& name);
const char* window_name(Window w);

/// N complex K x M spectra, indexed (receiver, range bin k, doppler bin m).
/// Doppler is FFT-shifted: zero radial velocity sits at m = M/2.
struct RangeDopplerCube {
    int range_bins = 0;    // K
    int doppler_bins = 0;  // M
    int receivers = 0;     // N
    bool normalized = false;
    std::vector<std::complex<double>> spectra;

    RangeDopplerCube() = default;
    RangeDopplerCube(int k, int m, int n)
        : range_bins(k), doppler_bins(m), receivers(n),
          spectra(static_cast<std::size_t>(k) * m * n) {}

    std::size_t index(int n, int k, int m) const {
        return (static_cast<std::size_t>(n) * range_bins + k) * doppler_bins + m;
    }
    std::complex<double>& at(int n, int k, int m) { return spectra[index(n, k, m)]; }
    const std::complex<double>& at(int n, int k, int m) const { return spectra[index(n, k, m)]; }
    std::size_t cells() const { return static_cast<std::size_t>(range_bins) * doppler_bins; }
};

/// Real C x K x M network input, C = 4N. Channel 2n / 2n+1 hold the real /
/// imaginary part of foreground receiver n; channels 2N + 2n / 2N + 2n + 1
/// hold the same for the background.
struct InputTensor {
    int channels = 0;
    int range_bins = 0;
    int doppler_bins = 0;
    double scale_factor = 1.0;
    std::vector<float> values;

    std::size_t index(int c, int k, int m) const {
        return (static_cast<std::size_t>(c) * range_bins + k) * doppler_bins + m;
    }
};

/// Presence / coordinate targets over the K x M grid. The mask is `presence`.
struct TargetMaps {
    int range_bins = 0;
    int doppler_bins = 0;
    std::vector<float> presence;
    std::vector<float> coord_x;
    std::vector<float> coord_y;

    std::size_t index(int k, int m) const { return static_cast<std::size_t>(k) * doppler_bins + m; }
    std::size_t mask_cells() const;
};

RangeDopplerCube range_doppler(const RadarFrame& frame, Window window = Window::None);

/// Rotates one cell vector so element 0 becomes a nonnegative real. Cells whose
/// reference magnitude is below `eps` (or zero) are left untouched.
void rotate_to_reference(std::span<std::complex<double>> cell, double eps);

/// Applies `rotate_to_reference` to every cell with eps = 1e-12 * max |cube|,
/// regardless of the `normalized` flag.
void normalize_cells(RangeDopplerCube& cube);

/// Flag-guarded normalization; throws std::logic_error on a normalized cube.
RangeDopplerCube phase_normalize(const RangeDopplerCube& cube);

/// Both cubes must share dimensions and normalization state.
InputTensor assemble_input(const RangeDopplerCube& fg, const RangeDopplerCube& bg);

TargetMaps make_targets(const FrameTruth& truth, int range_bins, int doppler_bins, int disk_radius = 1);

}  // namespace radnet
