// SPDX-License-Identifier: Apache-2.0
#include "radnet/scene.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace radnet {

namespace {

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

void check_front_field(double azimuth, double elevation) {
    if (!(std::abs(azimuth) < kPi / 2) || !(std::abs(elevation) < kPi / 2)) {
        throw std::domain_error("angle outside the front field");
    }
}

// Adds amplitude * exp(j(phase0 + psi_n + w_dop*m + w_rng*k)) to every sample.
void add_point_return(RadarFrame& frame, const RadarConfig& config, double range,
                      double velocity, double azimuth, double elevation, double amplitude) {
    const int K = frame.samples_per_chirp;
    const int M = frame.chirps_per_frame;
    const int N = frame.num_receivers;
    const double slope = config.bandwidth / config.chirp_duration;
    const double beat = 2.0 * range * slope / kSpeedOfLight;
    const double doppler = 2.0 * velocity * config.carrier_freq / kSpeedOfLight;
    const double w_rng = 2.0 * kPi * beat * config.chirp_duration / K;
    const double w_dop = 2.0 * kPi * doppler * config.chirp_duration;
    const double carrier_phase = 4.0 * kPi * range * config.carrier_freq / kSpeedOfLight;

    std::vector<std::complex<double>> fast(K), slow(M);
    for (int k = 0; k < K; ++k) fast[k] = std::polar(1.0, w_rng * k);
    for (int m = 0; m < M; ++m) slow[m] = std::polar(1.0, w_dop * m);
    const auto psi = steering_phases(config, azimuth, elevation);

    for (int n = 0; n < N; ++n) {
        const auto rx = std::polar(amplitude, std::remainder(carrier_phase, 2.0 * kPi) + psi[n]);
        for (int m = 0; m < M; ++m) {
            const auto rm = rx * slow[m];
            auto* row = &frame.at(n, m, 0);
            for (int k = 0; k < K; ++k) row[k] += rm * fast[k];
        }
    }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t counter) {
    // splitmix64 finalizer over a Weyl-sequence offset
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<ReceiverOffset> RadarConfig::default_receiver_grid(double carrier_freq) {
    const double half = kSpeedOfLight / carrier_freq / 2.0;
    std::vector<ReceiverOffset> out;
    for (int row = 0; row < 2; ++row)
        for (int col = 0; col < 4; ++col) out.push_back({col * half, row * half});
    return out;
}

void RadarConfig::validate() const {
    if (!is_pow2(samples_per_chirp) || samples_per_chirp < 16)
        throw std::invalid_argument("samples_per_chirp must be a power of two >= 16");
    if (!is_pow2(chirps_per_frame) || chirps_per_frame < 16)
        throw std::invalid_argument("chirps_per_frame must be a power of two >= 16");
    if (num_receivers < 2) throw std::invalid_argument("num_receivers must be >= 2");
    if (static_cast<int>(receiver_positions.size()) != num_receivers)
        throw std::invalid_argument("receiver_positions size differs from num_receivers");
    if (receiver_positions[0].horizontal != 0.0 || receiver_positions[0].vertical != 0.0)
        throw std::invalid_argument("receiver 0 must sit at the origin");
    if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be positive");
    if (!(chirp_duration > 0.0)) throw std::invalid_argument("chirp_duration must be positive");
    if (!(carrier_freq > bandwidth)) throw std::invalid_argument("carrier_freq must exceed bandwidth");
    if (!(noise_sigma >= 0.0)) throw std::invalid_argument("noise_sigma must be >= 0");
}

RadarFrame::RadarFrame(int k, int m, int n)
    : samples_per_chirp(k), chirps_per_frame(m), num_receivers(n),
      samples(static_cast<std::size_t>(k) * m * n) {}

std::vector<double> steering_phases(const RadarConfig& config, double azimuth, double elevation) {
    check_front_field(azimuth, elevation);
    const double wavenumber = 2.0 * kPi / config.wavelength();
    const double u = std::cos(elevation) * std::sin(azimuth);
    const double w = std::sin(elevation);
    std::vector<double> psi(config.receiver_positions.size());
    for (std::size_t n = 0; n < psi.size(); ++n) {
        const auto& p = config.receiver_positions[n];
        psi[n] = wavenumber * (p.horizontal * u + p.vertical * w);
    }
    return psi;
}

ClutterModel realize_clutter(const ClutterConfig& cfg, const RadarConfig& radar,
                             std::uint64_t seed) {
    if (cfg.num_scatterers < 0) throw std::invalid_argument("num_scatterers must be >= 0");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r_hi = std::min(cfg.range_max, 0.95 * radar.max_range());
    ClutterModel out;
    for (int i = 0; i < cfg.num_scatterers; ++i) {
        Scatterer s;
        s.range = cfg.range_min + (r_hi - cfg.range_min) * unit(rng);
        s.azimuth = cfg.azimuth_span * (2.0 * unit(rng) - 1.0);
        s.elevation = cfg.elevation_span * (2.0 * unit(rng) - 1.0);
        s.amplitude = cfg.amplitude_min + (cfg.amplitude_max - cfg.amplitude_min) * unit(rng);
        out.scatterers.push_back(s);
    }
    return out;
}

RadarFrame synthesize_frame(const RadarConfig& config, const std::optional<ObjectState>& object,
                            const ClutterModel& clutter, std::uint64_t seed) {
    RadarFrame frame(config.samples_per_chirp, config.chirps_per_frame, config.num_receivers);
    if (object) {
        const auto& o = *object;
        if (!(o.range > 0.0 && o.range < config.max_range()))
            throw std::domain_error("object range outside the unambiguous interval");
        if (!(std::abs(o.radial_velocity) < config.max_velocity()))
            throw std::domain_error("object velocity outside the unambiguous interval");
        add_point_return(frame, config, o.range, o.radial_velocity, o.azimuth, o.elevation,
                         o.amplitude);
    }
    for (const auto& s : clutter.scatterers)
        add_point_return(frame, config, s.range, 0.0, s.azimuth, s.elevation, s.amplitude);

    if (config.noise_sigma > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, config.noise_sigma / std::sqrt(2.0));
        for (auto& z : frame.samples) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            z += std::complex<double>(re, im);
        }
    }
    return frame;
}

std::pair<int, int> object_cell(const RadarConfig& config, const ObjectState& object) {
    const int k = static_cast<int>(std::lround(object.range / config.range_resolution()));
    const int m = static_cast<int>(std::lround(object.radial_velocity / config.velocity_resolution())) +
                  config.chirps_per_frame / 2;
    return {k, m};
}

ImagePoint project_to_image(const CameraModel& camera, double azimuth, double elevation) {
    check_front_field(azimuth, elevation);
    const ImagePoint p{camera.principal_x + camera.focal_x * std::tan(azimuth),
                       camera.principal_y - camera.focal_y * std::tan(elevation)};
    if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0))
        throw OutOfFrameError("object projects outside the camera frame");
    return p;
}

Angles backproject(const CameraModel& camera, double x_im, double y_im) {
    return {std::atan((x_im - camera.principal_x) / camera.focal_x),
            std::atan((camera.principal_y - y_im) / camera.focal_y)};
}

ObjectState trajectory_state(const ScenarioSpec& scenario, const TrajectoryPhases& phases, int t) {
    const double center = 0.5 * (scenario.range_min + scenario.range_max);
    const double swing = 0.5 * (scenario.range_max - scenario.range_min);
    const double w_r = 2.0 * kPi / scenario.range_period_frames;
    const double arg = w_r * t + phases.range;

    ObjectState o;
    o.range = center + swing * std::cos(arg);
    o.radial_velocity = -swing * w_r * std::sin(arg) / scenario.frame_interval;
    o.azimuth = scenario.azimuth_span *
                std::sin(2.0 * kPi * t / scenario.azimuth_period_frames + phases.azimuth);
    o.elevation = scenario.elevation_center +
                  scenario.elevation_swing *
                      std::sin(2.0 * kPi * t / scenario.elevation_period_frames + phases.elevation);
    o.amplitude = scenario.reference_amplitude *
                  std::pow(scenario.reference_range / o.range, 2.0);
    return o;
}

AnnotatedRecording generate_recording(const RadarConfig& config, const CameraModel& camera,
                                      const ClutterModel& clutter, const ScenarioSpec& scenario,
                                      std::uint64_t seed) {
    config.validate();
    if (scenario.background_frames < 0 || scenario.foreground_frames < 0)
        throw std::invalid_argument("frame counts must be >= 0");
    if (!(scenario.range_min > 0.0 && scenario.range_max >= scenario.range_min))
        throw std::invalid_argument("bad scenario range span");

    AnnotatedRecording rec;
    rec.config = config;
    rec.camera = camera;
    rec.clutter = clutter;

    const std::uint64_t bg_stream = derive_seed(seed, 1);
    const std::uint64_t fg_stream = derive_seed(seed, 2);
    for (int i = 0; i < scenario.background_frames; ++i) {
        auto f = synthesize_frame(config, std::nullopt, clutter, derive_seed(bg_stream, i));
        f.frame_id = i;
        f.timestamp = i * scenario.frame_interval;
        rec.background.push_back(std::move(f));
    }

    std::mt19937_64 rng(derive_seed(seed, 3));
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    TrajectoryPhases phases;
    phases.range = angle(rng);
    phases.azimuth = angle(rng);
    phases.elevation = angle(rng);

    for (int t = 0; t < scenario.foreground_frames; ++t) {
        const ObjectState o = trajectory_state(scenario, phases, t);
        FrameTruth gt;
        try {
            const auto p = project_to_image(camera, o.azimuth, o.elevation);
            gt.x_im = p.x;
            gt.y_im = p.y;
        } catch (const OutOfFrameError&) {
            ++rec.excluded_frames;
            continue;
        }
        const auto [k, m] = object_cell(config, o);
        if (k < 0 || k >= config.samples_per_chirp || m < 0 || m >= config.chirps_per_frame) {
            ++rec.excluded_frames;
            continue;
        }
        gt.present = true;
        gt.range_bin = k;
        gt.doppler_bin = m;
        gt.object = o;

        auto f = synthesize_frame(config, o, clutter, derive_seed(fg_stream, t));
        f.frame_id = t;
        f.timestamp = t * scenario.frame_interval;
        rec.foreground.push_back(std::move(f));
        rec.truth.push_back(gt);
    }
    return rec;
}

}  // namespace radnet
