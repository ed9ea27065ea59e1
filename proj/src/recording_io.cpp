// SPDX-License-Identifier: Apache-2.0
#include "radnet/recording_io.hpp"

#include <fstream>

#include "radnet/binary_io.hpp"
#include "radnet/config_json.hpp"

namespace radnet {

using nlohmann::json;

namespace {

void write_frame(io::LeWriter& w, const RadarFrame& f) {
    std::vector<float> buf(f.samples.size() * 2);
    for (std::size_t i = 0; i < f.samples.size(); ++i) {
        buf[2 * i] = static_cast<float>(f.samples[i].real());
        buf[2 * i + 1] = static_cast<float>(f.samples[i].imag());
    }
    w.f32s(buf);
}

RadarFrame read_frame(io::LeReader& r, int k, int m, int n) {
    RadarFrame f(k, m, n);
    std::vector<float> buf(f.samples.size() * 2);
    r.f32s(buf);
    for (std::size_t i = 0; i < f.samples.size(); ++i)
        f.samples[i] = {static_cast<double>(buf[2 * i]), static_cast<double>(buf[2 * i + 1])};
    return f;
}

json frame_stamp(const RadarFrame& f) {
    return json{{"frame_id", f.frame_id}, {"timestamp", f.timestamp}};
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
    auto p = path;
    p += ".json";
    return p;
}

json recording_sidecar(const AnnotatedRecording& rec) {
    json j;
    j["format"] = "RDR1";
    j["version"] = kRecordingVersion;
    j["config"] = rec.config;
    j["camera"] = rec.camera;
    j["clutter"] = rec.clutter.scatterers;
    j["excluded_frames"] = rec.excluded_frames;
    json bg = json::array();
    for (const auto& f : rec.background) bg.push_back(frame_stamp(f));
    j["background"] = std::move(bg);
    json fg = json::array();
    for (std::size_t i = 0; i < rec.foreground.size(); ++i) {
        const auto& gt = rec.truth[i];
        json e = frame_stamp(rec.foreground[i]);
        e["present"] = gt.present;
        e["k"] = gt.range_bin;
        e["m"] = gt.doppler_bin;
        e["R"] = gt.object.range;
        e["v"] = gt.object.radial_velocity;
        e["phi"] = gt.object.azimuth;
        e["theta"] = gt.object.elevation;
        e["amplitude"] = gt.object.amplitude;
        e["x_im"] = gt.x_im;
        e["y_im"] = gt.y_im;
        fg.push_back(std::move(e));
    }
    j["foreground"] = std::move(fg);
    return j;
}

void write_recording(const std::filesystem::path& path, const AnnotatedRecording& rec) {
    if (rec.truth.size() != rec.foreground.size())
        throw std::invalid_argument("truth list does not match foreground frames");
    const int K = rec.config.samples_per_chirp;
    const int M = rec.config.chirps_per_frame;
    const int N = rec.config.num_receivers;
    for (const auto* list : {&rec.background, &rec.foreground})
        for (const auto& f : *list)
            if (f.samples_per_chirp != K || f.chirps_per_frame != M || f.num_receivers != N)
                throw std::invalid_argument("frame dimensions differ from the config");

    {
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + path.string());
        io::LeWriter w(os);
        w.magic("RDR1");
        w.u32(kRecordingVersion);
        w.u32(static_cast<std::uint32_t>(K));
        w.u32(static_cast<std::uint32_t>(M));
        w.u32(static_cast<std::uint32_t>(N));
        w.u32(static_cast<std::uint32_t>(rec.background.size()));
        w.u32(static_cast<std::uint32_t>(rec.foreground.size()));
        for (const auto& f : rec.background) write_frame(w, f);
        for (const auto& f : rec.foreground) write_frame(w, f);
        w.check();
    }
    std::ofstream js(sidecar_path(path), std::ios::trunc);
    if (!js) throw std::runtime_error("cannot open " + sidecar_path(path).string());
    js << recording_sidecar(rec).dump(1) << '\n';
}

AnnotatedRecording read_recording(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    io::LeReader r(is);
    r.expect_magic("RDR1");
    if (r.u32() != kRecordingVersion) throw io::FormatError("unsupported RDR1 version");
    const int K = static_cast<int>(r.u32());
    const int M = static_cast<int>(r.u32());
    const int N = static_cast<int>(r.u32());
    const auto n_bg = r.u32();
    const auto n_fg = r.u32();
    if (K <= 0 || M <= 0 || N <= 0 || K > 4096 || M > 4096 || N > 256)
        throw io::FormatError("implausible RDR1 dimensions");

    std::ifstream js(sidecar_path(path));
    if (!js) throw std::runtime_error("missing sidecar " + sidecar_path(path).string());
    const json meta = json::parse(js);

    AnnotatedRecording rec;
    rec.config = meta.at("config").get<RadarConfig>();
    rec.camera = meta.at("camera").get<CameraModel>();
    rec.clutter.scatterers = meta.at("clutter").get<std::vector<Scatterer>>();
    rec.excluded_frames = meta.value("excluded_frames", 0);
    if (rec.config.samples_per_chirp != K || rec.config.chirps_per_frame != M ||
        rec.config.num_receivers != N)
        throw io::FormatError("sidecar config disagrees with RDR1 header");
    const auto& bg = meta.at("background");
    const auto& fg = meta.at("foreground");
    if (bg.size() != n_bg || fg.size() != n_fg)
        throw io::FormatError("sidecar frame counts disagree with RDR1 header");

    for (std::uint32_t i = 0; i < n_bg; ++i) {
        auto f = read_frame(r, K, M, N);
        f.frame_id = bg[i].at("frame_id").get<std::int64_t>();
        f.timestamp = bg[i].at("timestamp").get<double>();
        rec.background.push_back(std::move(f));
    }
    for (std::uint32_t i = 0; i < n_fg; ++i) {
        auto f = read_frame(r, K, M, N);
        const auto& e = fg[i];
        f.frame_id = e.at("frame_id").get<std::int64_t>();
        f.timestamp = e.at("timestamp").get<double>();
        rec.foreground.push_back(std::move(f));
        FrameTruth gt;
        gt.present = e.at("present").get<bool>();
        gt.range_bin = e.at("k").get<int>();
        gt.doppler_bin = e.at("m").get<int>();
        gt.object = e.get<ObjectState>();
        gt.x_im = e.at("x_im").get<double>();
        gt.y_im = e.at("y_im").get<double>();
        rec.truth.push_back(gt);
    }
    if (!r.at_eof()) throw io::FormatError("trailing bytes after RDR1 payload");
    return rec;
}

}  // namespace radnet
