// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "radnet/nn/unet.hpp"

namespace radnet::nn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
    NetworkSpec spec;
    NetworkParams<float> params;
    std::optional<NetworkParams<float>> momentum;
};

/// "RDW1" layout, little-endian:
///   magic, u32 version, u32 input channels, u32 level count, u32 widths[levels],
///   u32 layer count, per layer {str name, u8 kind, u32 in, u32 out},
///   per layer {u32 shape[4], f32 weights, u32 bias length, f32 bias},
///   u8 momentum flag, and when set the same blob section for the velocity.
void write_checkpoint(std::ostream& os, const Checkpoint& ckpt);
void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);

Checkpoint read_checkpoint(std::istream& is);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace radnet::nn
