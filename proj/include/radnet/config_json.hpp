// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "json.hpp"

#include "radnet/scene.hpp"

// JSON mappings for configuration types. Readers accept partial objects and
// fill missing keys from the defaults.
namespace radnet {

void to_json(nlohmann::json& j, const ReceiverOffset& v);
void from_json(const nlohmann::json& j, ReceiverOffset& v);
void to_json(nlohmann::json& j, const RadarConfig& v);
void from_json(const nlohmann::json& j, RadarConfig& v);
void to_json(nlohmann::json& j, const CameraModel& v);
void from_json(const nlohmann::json& j, CameraModel& v);
void to_json(nlohmann::json& j, const ClutterConfig& v);
void from_json(const nlohmann::json& j, ClutterConfig& v);
void to_json(nlohmann::json& j, const Scatterer& v);
void from_json(const nlohmann::json& j, Scatterer& v);
void to_json(nlohmann::json& j, const ScenarioSpec& v);
void from_json(const nlohmann::json& j, ScenarioSpec& v);
void to_json(nlohmann::json& j, const ObjectState& v);
void from_json(const nlohmann::json& j, ObjectState& v);

}  // namespace radnet
