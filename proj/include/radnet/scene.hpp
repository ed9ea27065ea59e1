// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace radnet {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

/// Receiver offset in the antenna plane, meters.
struct ReceiverOffset {
    double horizontal = 0.0;
    double vertical = 0.0;
};

/// Chirp numerology and array geometry of a single-transmitter FMCW radar.
struct RadarConfig {
    double carrier_freq = 77e9;
    double bandwidth = 150e6;
    double chirp_duration = 50e-6;
    int samples_per_chirp = 64;  // K, fast time
    int chirps_per_frame = 64;   // M, slow time
    int num_receivers = 8;       // N
    std::vector<ReceiverOffset> receiver_positions = default_receiver_grid(77e9);
    double noise_sigma = 0.1;
    std::uint64_t rng_seed = 1;

    double wavelength() const { return kSpeedOfLight / carrier_freq; }
    double range_resolution() const { return kSpeedOfLight / (2.0 * bandwidth); }
    double max_range() const { return samples_per_chirp * range_resolution(); }
    double max_velocity() const { return wavelength() / (4.0 * chirp_duration); }
    double velocity_resolution() const {
        return wavelength() / (2.0 * chirps_per_frame * chirp_duration);
    }

    /// Throws std::invalid_argument on any broken invariant.
    void validate() const;

    /// 4x2 grid at half-wavelength spacing, receiver 0 at the origin.
    static std::vector<ReceiverOffset> default_receiver_grid(double carrier_freq);
};

struct ObjectState {
    double range = 10.0;             // m
    double radial_velocity = 0.0;    // m/s, positive = receding
    double azimuth = 0.0;            // rad
    double elevation = 0.0;          // rad
    double amplitude = 1.0;
};

/// Pinhole camera rigidly attached to the radar, normalized image coordinates.
struct CameraModel {
    double focal_x = 0.6;
    double focal_y = 0.8;
    double principal_x = 0.5;
    double principal_y = 0.5;
};

struct Scatterer {
    double range = 0.0;
    double azimuth = 0.0;
    double elevation = 0.0;
    double amplitude = 0.0;
};

/// Parameters of the static environment; `realize_clutter` draws the scene.
struct ClutterConfig {
    int num_scatterers = 16;
    double range_min = 2.0;
    double range_max = 50.0;
    double amplitude_min = 0.05;
    double amplitude_max = 0.5;
    double azimuth_span = 1.0;    // uniform in [-span, span]
    double elevation_span = 0.3;
};

/// A realized, fixed set of zero-doppler scatterers.
struct ClutterModel {
    std::vector<Scatterer> scatterers;
};

ClutterModel realize_clutter(const ClutterConfig& cfg, const RadarConfig& radar,
                             std::uint64_t seed);

/// Complex baseband samples, receiver-major, then chirp, then fast-time sample.
struct RadarFrame {
    int samples_per_chirp = 0;
    int chirps_per_frame = 0;
    int num_receivers = 0;
    std::int64_t frame_id = 0;
    double timestamp = 0.0;
    std::vector<std::complex<double>> samples;

    RadarFrame() = default;
    RadarFrame(int k, int m, int n);

    std::size_t index(int receiver, int chirp, int sample) const {
        return (static_cast<std::size_t>(receiver) * chirps_per_frame + chirp) *
                   samples_per_chirp + sample;
    }
    std::complex<double>& at(int receiver, int chirp, int sample) {
        return samples[index(receiver, chirp, sample)];
    }
    const std::complex<double>& at(int receiver, int chirp, int sample) const {
        return samples[index(receiver, chirp, sample)];
    }
};

/// Ground truth attached to one foreground frame.
struct FrameTruth {
    bool present = false;
    int range_bin = 0;     // k
    int doppler_bin = 0;   // m, zero velocity at M/2
    ObjectState object;
    double x_im = 0.0;
    double y_im = 0.0;
};

enum class Trajectory { Horizontal };

/// Describes how a recording is laid out in time.
struct ScenarioSpec {
    int background_frames = 256;
    int foreground_frames = 512;
    double range_min = 4.0;
    double range_max = 28.0;
    Trajectory trajectory = Trajectory::Horizontal;
    double frame_interval = 0.05;        // s
    double range_period_frames = 300.0;  // one full in-and-out sweep
    double azimuth_period_frames = 170.0;
    double azimuth_span = 0.55;          // rad
    double elevation_center = -0.05;     // rad
    double elevation_swing = 0.03;       // rad
    double elevation_period_frames = 410.0;
    double reference_range = 4.0;        // amplitude = reference_amplitude at this range
    double reference_amplitude = 1.0;
};

struct AnnotatedRecording {
    RadarConfig config;
    CameraModel camera;
    ClutterModel clutter;
    std::vector<RadarFrame> background;
    std::vector<RadarFrame> foreground;
    std::vector<FrameTruth> truth;  // parallel to `foreground`
    int excluded_frames = 0;        // dropped because the camera could not see the object
};

/// Far-field steering phases, one per receiver.
std::vector<double> steering_phases(const RadarConfig& config, double azimuth, double elevation);

/// Dechirped baseband frame: object (optional) plus clutter plus complex white noise.
RadarFrame synthesize_frame(const RadarConfig& config, const std::optional<ObjectState>& object,
                            const ClutterModel& clutter, std::uint64_t seed);

/// Nearest (range bin, shifted doppler bin) for an object; may be out of the grid.
std::pair<int, int> object_cell(const RadarConfig& config, const ObjectState& object);

struct ImagePoint {
    double x = 0.0;
    double y = 0.0;
};

struct Angles {
    double azimuth = 0.0;
    double elevation = 0.0;
};

/// Throws OutOfFrameError when the object lands outside [0,1]^2.
ImagePoint project_to_image(const CameraModel& camera, double azimuth, double elevation);
Angles backproject(const CameraModel& camera, double x_im, double y_im);

struct OutOfFrameError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Object state of the scripted trajectory at frame `t` for a segment phase set.
struct TrajectoryPhases {
    double range = 0.0;
    double azimuth = 0.0;
    double elevation = 0.0;
};
ObjectState trajectory_state(const ScenarioSpec& scenario, const TrajectoryPhases& phases, int t);

AnnotatedRecording generate_recording(const RadarConfig& config, const CameraModel& camera,
                                      const ClutterModel& clutter, const ScenarioSpec& scenario,
                                      std::uint64_t seed);

/// Counter-based sub-seed; streams for different counters never share state.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t counter);

}  // namespace radnet
