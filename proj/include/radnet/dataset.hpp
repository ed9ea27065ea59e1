// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <vector>

#include "radnet/preprocess.hpp"
#include "radnet/scene.hpp"
#include "radnet/train/pairing.hpp"

namespace radnet {

inline constexpr std::uint32_t kDatasetVersion = 1;

struct SampleMeta {
    float range = 0.0f;
    float velocity = 0.0f;
    float x_im = 0.0f;
    float y_im = 0.0f;
    int range_bin = 0;
    int doppler_bin = 0;
};

struct Sample {
    InputTensor input;
    TargetMaps targets;
    bool present = false;
    SampleMeta meta;

    /// Ground truth as seen by the detector (present flag, cell, image coordinates).
    FrameTruth truth() const;
};

struct Dataset {
    int channels = 0;
    int range_bins = 0;
    int doppler_bins = 0;
    std::vector<Sample> samples;
};

struct DatasetOptions {
    Window window = Window::None;
    bool phase_normalize = true;
    int disk_radius = 1;
};

/// Range-doppler cube for one frame, normalized when requested.
RangeDopplerCube preprocess_frame(const RadarFrame& frame, const DatasetOptions& options);

Sample make_sample(const RangeDopplerCube& fg, const RangeDopplerCube& bg, const FrameTruth& truth,
                   int disk_radius);

/// Each frame is transformed once and reused by every pair that references it.
Dataset build_dataset(const std::vector<RadarFrame>& background,
                      const std::vector<RadarFrame>& foreground,
                      const std::vector<FrameTruth>& truth,
                      const std::vector<train::SamplePair>& pairs, const DatasetOptions& options);

/// "RDT1" layout, little-endian:
///   magic, u32 version, u32 C, u32 K, u32 M, u32 sample count, then per sample:
///   f32 tensor[C*K*M], f32 targets[3*K*M] (presence, x, y), u8 present,
///   f32 meta[6] (R, v, x_im, y_im, k, m).
void write_dataset(const std::filesystem::path& path, const Dataset& ds);
Dataset read_dataset(const std::filesystem::path& path);

}  // namespace radnet
