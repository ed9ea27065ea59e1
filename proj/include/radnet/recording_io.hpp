// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "json.hpp"
#include "radnet/scene.hpp"

namespace radnet {

inline constexpr std::uint32_t kRecordingVersion = 1;

/// Writes `<path>` (RDR1 binary) and `<path>.json` (ground truth + config echo).
///
/// Binary layout, little-endian:
///   "RDR1", u32 version, u32 K, u32 M, u32 N, u32 background count, u32 foreground count,
///   then every background frame followed by every foreground frame, each frame as
///   K*M*N interleaved f32 (re, im) pairs ordered receiver, chirp, fast-time sample.
void write_recording(const std::filesystem::path& path, const AnnotatedRecording& rec);

/// Reads both files back. Samples come back quantized to f32.
AnnotatedRecording read_recording(const std::filesystem::path& path);

nlohmann::json recording_sidecar(const AnnotatedRecording& rec);

std::filesystem::path sidecar_path(const std::filesystem::path& path);

}  // namespace radnet
