// SPDX-License-Identifier: Apache-2.0
#include "radnet/dataset.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "radnet/binary_io.hpp"

namespace radnet {

FrameTruth Sample::truth() const {
    FrameTruth t;
    t.present = present;
    t.range_bin = meta.range_bin;
    t.doppler_bin = meta.doppler_bin;
    t.object.range = meta.range;
    t.object.radial_velocity = meta.velocity;
    t.x_im = meta.x_im;
    t.y_im = meta.y_im;
    return t;
}

RangeDopplerCube preprocess_frame(const RadarFrame& frame, const DatasetOptions& options) {
    auto cube = range_doppler(frame, options.window);
    return options.phase_normalize ? phase_normalize(cube) : cube;
}

Sample make_sample(const RangeDopplerCube& fg, const RangeDopplerCube& bg, const FrameTruth& truth,
                   int disk_radius) {
    Sample s;
    s.input = assemble_input(fg, bg);
    s.targets = make_targets(truth, fg.range_bins, fg.doppler_bins, disk_radius);
    s.present = truth.present;
    if (truth.present) {
        s.meta.range = static_cast<float>(truth.object.range);
        s.meta.velocity = static_cast<float>(truth.object.radial_velocity);
        s.meta.x_im = static_cast<float>(truth.x_im);
        s.meta.y_im = static_cast<float>(truth.y_im);
        s.meta.range_bin = truth.range_bin;
        s.meta.doppler_bin = truth.doppler_bin;
    }
    return s;
}

Dataset build_dataset(const std::vector<RadarFrame>& background,
                      const std::vector<RadarFrame>& foreground,
                      const std::vector<FrameTruth>& truth,
                      const std::vector<train::SamplePair>& pairs, const DatasetOptions& options) {
    if (truth.size() != foreground.size())
        throw std::invalid_argument("build_dataset: truth list does not match foreground frames");

    std::vector<RangeDopplerCube> bg_cubes, fg_cubes;
    for (const auto& f : background) bg_cubes.push_back(preprocess_frame(f, options));
    for (const auto& f : foreground) fg_cubes.push_back(preprocess_frame(f, options));

    Dataset ds;
    const auto* ref = !fg_cubes.empty() ? &fg_cubes.front()
                                        : (!bg_cubes.empty() ? &bg_cubes.front() : nullptr);
    if (ref) {
        ds.channels = 4 * ref->receivers;
        ds.range_bins = ref->range_bins;
        ds.doppler_bins = ref->doppler_bins;
    }
    for (const auto& p : pairs) {
        if (p.bg_index < 0 || p.bg_index >= static_cast<int>(bg_cubes.size()))
            throw std::out_of_range("build_dataset: background index out of range");
        if (p.background_only) {
            if (p.fg_index < 0 || p.fg_index >= static_cast<int>(bg_cubes.size()))
                throw std::out_of_range("build_dataset: background index out of range");
            ds.samples.push_back(
                make_sample(bg_cubes[p.fg_index], bg_cubes[p.bg_index], FrameTruth{}, options.disk_radius));
        } else {
            if (p.fg_index < 0 || p.fg_index >= static_cast<int>(fg_cubes.size()))
                throw std::out_of_range("build_dataset: foreground index out of range");
            ds.samples.push_back(make_sample(fg_cubes[p.fg_index], bg_cubes[p.bg_index],
                                             truth[p.fg_index], options.disk_radius));
        }
    }
    return ds;
}

void write_dataset(const std::filesystem::path& path, const Dataset& ds) {
    const std::size_t cells = static_cast<std::size_t>(ds.range_bins) * ds.doppler_bins;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    io::LeWriter w(os);
    w.magic("RDT1");
    w.u32(kDatasetVersion);
    w.u32(static_cast<std::uint32_t>(ds.channels));
    w.u32(static_cast<std::uint32_t>(ds.range_bins));
    w.u32(static_cast<std::uint32_t>(ds.doppler_bins));
    w.u32(static_cast<std::uint32_t>(ds.samples.size()));
    for (const auto& s : ds.samples) {
        if (s.input.values.size() != ds.channels * cells || s.targets.presence.size() != cells)
            throw std::invalid_argument("write_dataset: sample dimensions differ from header");
        w.f32s(s.input.values);
        w.f32s(s.targets.presence);
        w.f32s(s.targets.coord_x);
        w.f32s(s.targets.coord_y);
        w.u8(s.present ? 1 : 0);
        for (float v : {s.meta.range, s.meta.velocity, s.meta.x_im, s.meta.y_im,
                        static_cast<float>(s.meta.range_bin), static_cast<float>(s.meta.doppler_bin)})
            w.f32(v);
    }
    w.check();
}

Dataset read_dataset(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    io::LeReader r(is);
    r.expect_magic("RDT1");
    if (r.u32() != kDatasetVersion) throw io::FormatError("unsupported RDT1 version");
    Dataset ds;
    ds.channels = static_cast<int>(r.u32());
    ds.range_bins = static_cast<int>(r.u32());
    ds.doppler_bins = static_cast<int>(r.u32());
    const auto count = r.u32();
    if (ds.channels <= 0 || ds.channels > 1024 || ds.range_bins <= 0 || ds.range_bins > 4096 ||
        ds.doppler_bins <= 0 || ds.doppler_bins > 4096)
        throw io::FormatError("implausible RDT1 dimensions");
    const std::size_t cells = static_cast<std::size_t>(ds.range_bins) * ds.doppler_bins;
    for (std::uint32_t i = 0; i < count; ++i) {
        Sample s;
        s.input.channels = ds.channels;
        s.input.range_bins = ds.range_bins;
        s.input.doppler_bins = ds.doppler_bins;
        s.input.values.resize(ds.channels * cells);
        r.f32s(s.input.values);
        s.targets.range_bins = ds.range_bins;
        s.targets.doppler_bins = ds.doppler_bins;
        s.targets.presence.resize(cells);
        s.targets.coord_x.resize(cells);
        s.targets.coord_y.resize(cells);
        r.f32s(s.targets.presence);
        r.f32s(s.targets.coord_x);
        r.f32s(s.targets.coord_y);
        s.present = r.u8() != 0;
        s.meta.range = r.f32();
        s.meta.velocity = r.f32();
        s.meta.x_im = r.f32();
        s.meta.y_im = r.f32();
        s.meta.range_bin = static_cast<int>(std::lround(r.f32()));
        s.meta.doppler_bin = static_cast<int>(std::lround(r.f32()));
        ds.samples.push_back(std::move(s));
    }
    if (!r.at_eof()) throw io::FormatError("trailing bytes after RDT1 payload");
    return ds;
}

}  // namespace radnet
