// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "json.hpp"
#include "radnet/dataset.hpp"
#include "radnet/detect.hpp"
#include "radnet/scene.hpp"
#include "radnet/train/trainer.hpp"

namespace radnet::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Everything a pipeline run can be configured with. The JSON form has one
/// object per section; missing sections and keys keep their defaults.
struct PipelineConfig {
    RadarConfig radar;
    CameraModel camera;
    ClutterConfig clutter;
    ScenarioSpec scenario;
    DatasetOptions dataset;
    train::TrainConfig train;
    std::vector<int> widths{16, 32, 64, 128, 256};
    DetectParams detect;
};

nlohmann::json config_json(const PipelineConfig& c);
PipelineConfig parse_config(const nlohmann::json& j);
PipelineConfig load_config(const std::filesystem::path& path);

/// Entry point of the `radnet` executable. Errors are reported on `err` as a
/// single JSON line and mapped to a nonzero exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace radnet::cli
