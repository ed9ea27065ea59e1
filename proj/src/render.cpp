// SPDX-License-Identifier: Apache-2.0
#include "radnet/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace radnet {

Image render_spectrum(const RangeDopplerCube& cube, int receiver, double dynamic_range_db) {
    if (receiver < 0 || receiver >= cube.receivers)
        throw std::out_of_range("render_spectrum: receiver index out of range");
    if (!(dynamic_range_db > 0.0)) throw std::invalid_argument("dynamic range must be positive");
    Image img(cube.doppler_bins, cube.range_bins, 1);
    double mx = 0.0;
    for (int k = 0; k < cube.range_bins; ++k)
        for (int m = 0; m < cube.doppler_bins; ++m) mx = std::max(mx, std::abs(cube.at(receiver, k, m)));
    if (mx == 0.0) return img;
    for (int k = 0; k < cube.range_bins; ++k)
        for (int m = 0; m < cube.doppler_bins; ++m) {
            const double a = std::abs(cube.at(receiver, k, m));
            if (a == 0.0) continue;
            const double level = 1.0 + 20.0 * std::log10(a / mx) / dynamic_range_db;
            *img.at(k, m) = static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(level, 0.0, 1.0)));
        }
    return img;
}

Image render_presence(std::span<const float> presence, int range_bins, int doppler_bins) {
    if (presence.size() != static_cast<std::size_t>(range_bins) * doppler_bins)
        throw std::invalid_argument("render_presence: size mismatch");
    Image img(doppler_bins, range_bins, 1);
    for (std::size_t i = 0; i < presence.size(); ++i)
        img.pixels[i] = static_cast<std::uint8_t>(
            std::lround(255.0 * std::clamp(static_cast<double>(presence[i]), 0.0, 1.0)));
    return img;
}

Image overlay_detection(const Image& gray, const Detection& det) {
    if (gray.channels != 1) throw std::invalid_argument("overlay_detection: expects a gray image");
    if (det.k_min < 0 || det.k_max >= gray.height || det.m_min < 0 || det.m_max >= gray.width ||
        det.k_min > det.k_max || det.m_min > det.m_max)
        throw std::out_of_range("overlay_detection: box outside the image");
    Image rgb(gray.width, gray.height, 3);
    for (int r = 0; r < gray.height; ++r)
        for (int c = 0; c < gray.width; ++c) {
            const auto v = *gray.at(r, c);
            auto* px = rgb.at(r, c);
            px[0] = px[1] = px[2] = v;
        }
    auto red = [&](int r, int c) {
        auto* px = rgb.at(r, c);
        px[0] = 255;
        px[1] = 0;
        px[2] = 0;
    };
    for (int c = det.m_min; c <= det.m_max; ++c) {
        red(det.k_min, c);
        red(det.k_max, c);
    }
    for (int r = det.k_min; r <= det.k_max; ++r) {
        red(r, det.m_min);
        red(r, det.m_max);
    }
    return rgb;
}

void write_pnm(std::ostream& os, const Image& img) {
    if (img.channels != 1 && img.channels != 3) throw std::invalid_argument("write_pnm: 1 or 3 channels");
    os << (img.channels == 1 ? "P5" : "P6") << '\n' << img.width << ' ' << img.height << "\n255\n";
    os.write(reinterpret_cast<const char*>(img.pixels.data()),
             static_cast<std::streamsize>(img.pixels.size()));
    if (!os) throw std::runtime_error("write_pnm: write failed");
}

void write_pnm(const std::filesystem::path& path, const Image& img) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    write_pnm(os, img);
}

Image read_pnm(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    is >> magic >> w >> h >> maxval;
    is.get();
    if ((magic != "P5" && magic != "P6") || w <= 0 || h <= 0 || maxval != 255)
        throw std::runtime_error("read_pnm: unsupported header");
    Image img(w, h, magic == "P5" ? 1 : 3);
    is.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (!is) throw std::runtime_error("read_pnm: truncated");
    return img;
}

}  // namespace radnet
