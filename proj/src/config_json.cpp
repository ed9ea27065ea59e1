// SPDX-License-Identifier: Apache-2.0
#include "radnet/config_json.hpp"

namespace radnet {

using nlohmann::json;

void to_json(json& j, const ReceiverOffset& v) { j = json::array({v.horizontal, v.vertical}); }

void from_json(const json& j, ReceiverOffset& v) {
    v.horizontal = j.at(0).get<double>();
    v.vertical = j.at(1).get<double>();
}

void to_json(json& j, const RadarConfig& v) {
    j = json{{"carrier_freq", v.carrier_freq},
             {"bandwidth", v.bandwidth},
             {"chirp_duration", v.chirp_duration},
             {"samples_per_chirp", v.samples_per_chirp},
             {"chirps_per_frame", v.chirps_per_frame},
             {"num_receivers", v.num_receivers},
             {"receiver_positions", v.receiver_positions},
             {"noise_sigma", v.noise_sigma},
             {"rng_seed", v.rng_seed}};
}

void from_json(const json& j, RadarConfig& v) {
    RadarConfig d;
    v.carrier_freq = j.value("carrier_freq", d.carrier_freq);
    v.bandwidth = j.value("bandwidth", d.bandwidth);
    v.chirp_duration = j.value("chirp_duration", d.chirp_duration);
    v.samples_per_chirp = j.value("samples_per_chirp", d.samples_per_chirp);
    v.chirps_per_frame = j.value("chirps_per_frame", d.chirps_per_frame);
    v.num_receivers = j.value("num_receivers", d.num_receivers);
    if (j.contains("receiver_positions"))
        v.receiver_positions = j.at("receiver_positions").get<std::vector<ReceiverOffset>>();
    else
        v.receiver_positions = RadarConfig::default_receiver_grid(v.carrier_freq);
    v.noise_sigma = j.value("noise_sigma", d.noise_sigma);
    v.rng_seed = j.value("rng_seed", d.rng_seed);
}

void to_json(json& j, const CameraModel& v) {
    j = json{{"focal_x", v.focal_x},
             {"focal_y", v.focal_y},
             {"principal_x", v.principal_x},
             {"principal_y", v.principal_y}};
}

void from_json(const json& j, CameraModel& v) {
    CameraModel d;
    v.focal_x = j.value("focal_x", d.focal_x);
    v.focal_y = j.value("focal_y", d.focal_y);
    v.principal_x = j.value("principal_x", d.principal_x);
    v.principal_y = j.value("principal_y", d.principal_y);
}

void to_json(json& j, const ClutterConfig& v) {
    j = json{{"num_scatterers", v.num_scatterers},
             {"range_min", v.range_min},
             {"range_max", v.range_max},
             {"amplitude_min", v.amplitude_min},
             {"amplitude_max", v.amplitude_max},
             {"azimuth_span", v.azimuth_span},
             {"elevation_span", v.elevation_span}};
}

void from_json(const json& j, ClutterConfig& v) {
    ClutterConfig d;
    v.num_scatterers = j.value("num_scatterers", d.num_scatterers);
    v.range_min = j.value("range_min", d.range_min);
    v.range_max = j.value("range_max", d.range_max);
    v.amplitude_min = j.value("amplitude_min", d.amplitude_min);
    v.amplitude_max = j.value("amplitude_max", d.amplitude_max);
    v.azimuth_span = j.value("azimuth_span", d.azimuth_span);
    v.elevation_span = j.value("elevation_span", d.elevation_span);
}

void to_json(json& j, const Scatterer& v) {
    j = json{{"range", v.range},
             {"azimuth", v.azimuth},
             {"elevation", v.elevation},
             {"amplitude", v.amplitude}};
}

void from_json(const json& j, Scatterer& v) {
    v.range = j.at("range").get<double>();
    v.azimuth = j.at("azimuth").get<double>();
    v.elevation = j.at("elevation").get<double>();
    v.amplitude = j.at("amplitude").get<double>();
}

void to_json(json& j, const ScenarioSpec& v) {
    j = json{{"background_frames", v.background_frames},
             {"foreground_frames", v.foreground_frames},
             {"range_min", v.range_min},
             {"range_max", v.range_max},
             {"trajectory", "horizontal"},
             {"frame_interval", v.frame_interval},
             {"range_period_frames", v.range_period_frames},
             {"azimuth_period_frames", v.azimuth_period_frames},
             {"azimuth_span", v.azimuth_span},
             {"elevation_center", v.elevation_center},
             {"elevation_swing", v.elevation_swing},
             {"elevation_period_frames", v.elevation_period_frames},
             {"reference_range", v.reference_range},
             {"reference_amplitude", v.reference_amplitude}};
}

void from_json(const json& j, ScenarioSpec& v) {
    ScenarioSpec d;
    v.background_frames = j.value("background_frames", d.background_frames);
    v.foreground_frames = j.value("foreground_frames", d.foreground_frames);
    v.range_min = j.value("range_min", d.range_min);
    v.range_max = j.value("range_max", d.range_max);
    const auto traj = j.value("trajectory", std::string("horizontal"));
    if (traj != "horizontal") throw std::invalid_argument("unknown trajectory: " + traj);
    v.trajectory = Trajectory::Horizontal;
    v.frame_interval = j.value("frame_interval", d.frame_interval);
    v.range_period_frames = j.value("range_period_frames", d.range_period_frames);
    v.azimuth_period_frames = j.value("azimuth_period_frames", d.azimuth_period_frames);
    v.azimuth_span = j.value("azimuth_span", d.azimuth_span);
    v.elevation_center = j.value("elevation_center", d.elevation_center);
    v.elevation_swing = j.value("elevation_swing", d.elevation_swing);
    v.elevation_period_frames = j.value("elevation_period_frames", d.elevation_period_frames);
    v.reference_range = j.value("reference_range", d.reference_range);
    v.reference_amplitude = j.value("reference_amplitude", d.reference_amplitude);
}

void to_json(json& j, const ObjectState& v) {
    j = json{{"R", v.range},
             {"v", v.radial_velocity},
             {"phi", v.azimuth},
             {"theta", v.elevation},
             {"amplitude", v.amplitude}};
}

void from_json(const json& j, ObjectState& v) {
    v.range = j.at("R").get<double>();
    v.radial_velocity = j.at("v").get<double>();
    v.azimuth = j.at("phi").get<double>();
    v.elevation = j.at("theta").get<double>();
    v.amplitude = j.value("amplitude", 1.0);
}

}  // namespace radnet
