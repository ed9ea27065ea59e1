// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "radnet/detect.hpp"
#include "radnet/preprocess.hpp"

namespace radnet {

/// 8-bit raster, 1 (gray) or 3 (RGB) channels, row-major. Rows are range
/// bins, columns doppler bins.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> pixels;

    Image() = default;
    Image(int w, int h, int c) : width(w), height(h), channels(c),
        pixels(static_cast<std::size_t>(w) * h * c, 0) {}

    std::uint8_t* at(int row, int col) {
        return pixels.data() + (static_cast<std::size_t>(row) * width + col) * channels;
    }
    const std::uint8_t* at(int row, int col) const {
        return pixels.data() + (static_cast<std::size_t>(row) * width + col) * channels;
    }
};

inline constexpr double kDefaultDynamicRangeDb = 60.0;

/// Log-magnitude of one receiver, 255 at the image maximum and 0 at or below
/// `dynamic_range_db` under it. An all-zero spectrum renders black.
Image render_spectrum(const RangeDopplerCube& cube, int receiver = 0,
                      double dynamic_range_db = kDefaultDynamicRangeDb);

/// Presence probabilities as gray levels round(255 p).
Image render_presence(std::span<const float> presence, int range_bins, int doppler_bins);

/// Gray -> RGB copy with a one-pixel pure-red rectangle on the detection box.
Image overlay_detection(const Image& gray, const Detection& det);

/// Binary PGM (P5) for 1 channel, PPM (P6) for 3.
void write_pnm(std::ostream& os, const Image& img);
void write_pnm(const std::filesystem::path& path, const Image& img);
Image read_pnm(const std::filesystem::path& path);

}  // namespace radnet
