// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>

#include "CLI11.hpp"
#include "radnet/binary_io.hpp"
#include "radnet/config_json.hpp"
#include "radnet/nn/checkpoint.hpp"
#include "radnet/parallel.hpp"
#include "radnet/recording_io.hpp"
#include "radnet/render.hpp"
#include "radnet/train/pairing.hpp"

namespace radnet::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

json dataset_options_json(const DatasetOptions& o) {
    return {{"window", window_name(o.window)},
            {"phase_normalize", o.phase_normalize},
            {"disk_radius", o.disk_radius}};
}

DatasetOptions dataset_options_from(const json& j, DatasetOptions o) {
    if (j.contains("window")) o.window = parse_window(j.at("window").get<std::string>());
    o.phase_normalize = j.value("phase_normalize", o.phase_normalize);
    o.disk_radius = j.value("disk_radius", o.disk_radius);
    return o;
}

json read_json(const fs::path& p) {
    std::ifstream is(p);
    if (!is) throw std::runtime_error("cannot open " + p.string());
    try {
        return json::parse(is);
    } catch (const json::exception& e) {
        throw std::runtime_error("malformed JSON in " + p.string() + ": " + e.what());
    }
}

void write_json(const fs::path& p, const json& j) {
    std::ofstream os(p, std::ios::trunc);
    os << j.dump(2) << '\n';
    if (!os) throw std::runtime_error("cannot write " + p.string());
}

using Clock = std::chrono::steady_clock;

// Artifacts are written into a hidden staging directory and moved next to the
// manifest only when the command succeeds, so a failed run leaves nothing.
class Output {
public:
    Output(fs::path dir, std::string command)
        : dir_(std::move(dir)), command_(std::move(command)), start_(Clock::now()) {
        if (dir_.empty()) throw UsageError("--out is required");
        created_ = fs::create_directories(dir_);
        stage_ = dir_ / (".staging-" + command_);
        fs::remove_all(stage_);
        fs::create_directories(stage_);
        manifest_ = {{"command", command_}, {"tool_version", kToolVersion}, {"threads", threads()}};
    }
    ~Output() {
        std::error_code ec;
        fs::remove_all(stage_, ec);
        if (created_ && !committed_ && fs::is_empty(dir_, ec)) fs::remove(dir_, ec);
    }
    Output(const Output&) = delete;
    Output& operator=(const Output&) = delete;

    fs::path file(const std::string& name) {
        files_.push_back(name);
        return stage_ / name;
    }
    json& manifest() { return manifest_; }
    void input(const std::string& role, const fs::path& p) { manifest_["inputs"][role] = p.string(); }

    void commit() {
        manifest_["outputs"] = files_;
        manifest_["timings"]["wall_ms"] =
            std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
        write_json(stage_ / "manifest.json", manifest_);
        for (const auto& f : files_) fs::rename(stage_ / f, dir_ / f);
        fs::rename(stage_ / "manifest.json", dir_ / "manifest.json");
        committed_ = true;
    }

private:
    fs::path dir_;
    fs::path stage_;
    std::string command_;
    Clock::time_point start_;
    std::vector<std::string> files_;
    json manifest_;
    bool created_ = false;
    bool committed_ = false;
};

struct Common {
    std::string config;
    std::string out;
};

PipelineConfig effective_config(const std::string& path) {
    return path.empty() ? PipelineConfig{} : load_config(path);
}

// The preprocess sidecar carries what eval/infer need to interpret a dataset.
json dataset_sidecar(const AnnotatedRecording& fg, const DatasetOptions& opt, std::uint64_t seed,
                     double ratio, const Dataset& ds) {
    return {{"radar", fg.config},
            {"camera", fg.camera},
            {"options", dataset_options_json(opt)},
            {"pairing_seed", seed},
            {"background_ratio", ratio},
            {"samples", ds.samples.size()},
            {"channels", ds.channels},
            {"range_bins", ds.range_bins},
            {"doppler_bins", ds.doppler_bins}};
}

struct DatasetContext {
    RadarConfig radar;
    CameraModel camera;
};

DatasetContext dataset_context(const fs::path& dataset, const PipelineConfig& cfg) {
    const auto side = fs::path(dataset.string() + ".json");
    if (!fs::exists(side)) return {cfg.radar, cfg.camera};
    const auto j = read_json(side);
    return {j.at("radar").get<RadarConfig>(), j.at("camera").get<CameraModel>()};
}

std::vector<std::vector<Detection>> detect_all(const std::vector<nn::UNetOutputs<float>>& outs,
                                               int K, int M, const DetectParams& params,
                                               const RadarConfig& radar) {
    std::vector<std::vector<Detection>> dets;
    const std::size_t cells = std::size_t(K) * M;
    for (const auto& o : outs)
        for (int b = 0; b < o.presence.n; ++b)
            dets.push_back(extract_detections({o.presence.channel(b, 0), cells},
                                              {o.coord_x.channel(b, 0), cells},
                                              {o.coord_y.channel(b, 0), cells}, K, M, params, radar));
    return dets;
}

int cmd_simulate(const Common& c, std::uint64_t seed, const std::string& scenario_path) {
    auto cfg = effective_config(c.config);
    if (!scenario_path.empty()) from_json(read_json(scenario_path), cfg.scenario);
    cfg.radar.validate();
    Output out(c.out, "simulate");

    const auto clutter = realize_clutter(cfg.clutter, cfg.radar, derive_seed(seed, 0));
    ScenarioSpec bg = cfg.scenario, fg = cfg.scenario;
    bg.foreground_frames = 0;
    fg.background_frames = 0;
    const std::pair<const char*, std::pair<ScenarioSpec*, std::uint64_t>> parts[] = {
        {"background.rdr", {&bg, 1}}, {"train.rdr", {&fg, 2}}, {"val.rdr", {&fg, 3}}};
    json excluded;
    for (const auto& [name, what] : parts) {
        const auto rec = generate_recording(cfg.radar, cfg.camera, clutter, *what.first,
                                            derive_seed(seed, what.second));
        write_recording(out.file(name), rec);
        out.file(std::string(name) + ".json");
        excluded[name] = rec.excluded_frames;
    }
    out.manifest()["config"] = {{"radar", cfg.radar}, {"camera", cfg.camera},
                                {"clutter", cfg.clutter}, {"scenario", cfg.scenario}};
    out.manifest()["seeds"] = {{"seed", seed}};
    out.manifest()["excluded_frames"] = excluded;
    out.commit();
    return 0;
}

int cmd_preprocess(const Common& c, const std::string& bg_path, const std::string& fg_path,
                   std::optional<std::string> window, bool no_norm, std::uint64_t seed) {
    auto cfg = effective_config(c.config);
    if (window) cfg.dataset.window = parse_window(*window);
    if (no_norm) cfg.dataset.phase_normalize = false;
    Output out(c.out, "preprocess");
    out.input("background", bg_path);
    out.input("foreground", fg_path);

    const auto bg = read_recording(bg_path);
    const auto fg = read_recording(fg_path);
    const auto pairs = train::pair_samples(int(fg.foreground.size()), int(bg.background.size()), seed,
                                           cfg.train.background_ratio);
    const auto ds = build_dataset(bg.background, fg.foreground, fg.truth, pairs, cfg.dataset);
    write_dataset(out.file("dataset.rdt"), ds);
    write_json(out.file("dataset.rdt.json"),
               dataset_sidecar(fg, cfg.dataset, seed, cfg.train.background_ratio, ds));
    out.manifest()["config"] = {{"dataset", dataset_options_json(cfg.dataset)},
                                {"background_ratio", cfg.train.background_ratio}};
    out.manifest()["seeds"] = {{"pairing", seed}};
    out.commit();
    return 0;
}

struct TrainFlags {
    std::optional<double> lr, momentum;
    std::optional<int> epochs, batch;
    std::optional<std::uint64_t> seed;
};

int cmd_train(const Common& c, const std::string& train_path, const std::string& val_path,
              const TrainFlags& f, std::ostream& log) {
    auto cfg = effective_config(c.config);
    if (f.lr) cfg.train.learning_rate = *f.lr;
    if (f.momentum) cfg.train.momentum = *f.momentum;
    if (f.epochs) cfg.train.epochs = *f.epochs;
    if (f.batch) cfg.train.batch_size = *f.batch;
    if (f.seed) cfg.train.seed = *f.seed;
    cfg.train.validate();
    Output out(c.out, "train");
    out.input("train", train_path);
    out.input("val", val_path);

    const auto tr = read_dataset(train_path);
    const auto va = val_path.empty() ? Dataset{} : read_dataset(val_path);
    const nn::NetworkSpec spec(tr.channels, cfg.widths);
    std::ofstream jsonl(out.file("train_log.jsonl"), std::ios::trunc);
    const auto result = train::train(tr, va, spec, cfg.train, [&](const train::EpochRecord& r) {
        const auto line = train::epoch_json(r).dump();
        jsonl << line << '\n';
        jsonl.flush();
        log << line << '\n';
    });
    jsonl.close();
    if (!jsonl) throw std::runtime_error("cannot write training log");
    nn::write_checkpoint(out.file("model.rdw"), {spec, result.last, result.velocity});
    nn::write_checkpoint(out.file("best.rdw"), {spec, result.best, std::nullopt});
    out.manifest()["config"] = {{"train", cfg.train}, {"widths", cfg.widths}};
    out.manifest()["seeds"] = {{"train", cfg.train.seed}};
    out.manifest()["best_epoch"] = result.best_epoch;
    out.commit();
    return 0;
}

int cmd_eval(const Common& c, const std::string& dataset, const std::string& checkpoint,
             std::optional<double> tau, std::ostream& os) {
    auto cfg = effective_config(c.config);
    if (tau) cfg.detect.threshold = *tau;
    Output out(c.out, "eval");
    out.input("dataset", dataset);
    out.input("checkpoint", checkpoint);

    const auto ds = read_dataset(dataset);
    const auto ctx = dataset_context(dataset, cfg);
    const auto ckpt = nn::read_checkpoint(checkpoint);
    const auto outs = train::predict(ckpt.params, ckpt.spec, ds);
    const auto dets = detect_all(outs, ds.range_bins, ds.doppler_bins, cfg.detect, ctx.radar);
    std::vector<FrameTruth> truth;
    for (const auto& s : ds.samples) truth.push_back(s.truth());
    const auto report = evaluate(dets, truth, ds.range_bins, ds.doppler_bins, ctx.camera);
    auto j = report_json(report);
    const auto loss = train::evaluate_loss(ckpt.params, ckpt.spec, ds, cfg.train.weights);
    j["loss"] = {{"seg", loss.seg_loss}, {"msex", loss.mse_x}, {"msey", loss.mse_y}, {"total", loss.total}};
    write_json(out.file("report.json"), j);
    out.manifest()["config"] = {{"detect", {{"threshold", cfg.detect.threshold},
                                            {"min_cells", cfg.detect.min_cells}}}};
    out.commit();
    os << j.dump() << '\n';
    return 0;
}

struct FrameRef {
    std::string recording;
    int frame = 0;
};

const RadarFrame& pick(const std::vector<RadarFrame>& frames, int i, const std::string& what) {
    if (i < 0 || std::size_t(i) >= frames.size())
        throw std::out_of_range(what + " frame index " + std::to_string(i) + " out of range");
    return frames[std::size_t(i)];
}

int cmd_infer(const Common& c, const FrameRef& bgref, const FrameRef& fgref,
              const std::string& checkpoint, std::optional<double> tau, std::ostream& os) {
    auto cfg = effective_config(c.config);
    if (tau) cfg.detect.threshold = *tau;
    Output out(c.out, "infer");
    out.input("background", bgref.recording);
    out.input("foreground", fgref.recording);
    out.input("checkpoint", checkpoint);

    const auto bg = read_recording(bgref.recording);
    const auto fg = read_recording(fgref.recording);
    const auto& bframe = pick(bg.background, bgref.frame, "background");
    const auto& fframe = pick(fg.foreground, fgref.frame, "foreground");
    const auto& truth = fg.truth[std::size_t(fgref.frame)];
    const auto ckpt = nn::read_checkpoint(checkpoint);

    Dataset one;
    one.samples.push_back(make_sample(preprocess_frame(fframe, cfg.dataset),
                                      preprocess_frame(bframe, cfg.dataset), truth,
                                      cfg.dataset.disk_radius));
    one.channels = one.samples[0].input.channels;
    one.range_bins = one.samples[0].input.range_bins;
    one.doppler_bins = one.samples[0].input.doppler_bins;
    const auto outs = train::predict(ckpt.params, ckpt.spec, one, 1);
    const auto dets = detect_all(outs, one.range_bins, one.doppler_bins, cfg.detect, fg.config)[0];

    json j{{"background_frame", bgref.frame}, {"foreground_frame", fgref.frame},
           {"threshold", cfg.detect.threshold}, {"detections", json::array()}};
    for (const auto& d : dets) j["detections"].push_back(detection_json(d));
    j["truth"] = {{"present", truth.present}, {"range_bin", truth.range_bin},
                  {"doppler_bin", truth.doppler_bin}, {"x_im", truth.x_im}, {"y_im", truth.y_im}};
    write_json(out.file("detection.json"), j);
    write_pnm(out.file("presence.pgm"),
              render_presence({outs[0].presence.channel(0, 0), std::size_t(one.range_bins) * std::size_t(one.doppler_bins)},
                              one.range_bins, one.doppler_bins));
    out.manifest()["config"] = {{"dataset", dataset_options_json(cfg.dataset)},
                                {"detect", {{"threshold", cfg.detect.threshold},
                                            {"min_cells", cfg.detect.min_cells}}}};
    out.commit();
    os << j.dump() << '\n';
    return 0;
}

Detection box_from_json(const json& j) {
    Detection d;
    const auto& b = j.at("box");
    d.k_min = b.at("k_min");
    d.k_max = b.at("k_max");
    d.m_min = b.at("m_min");
    d.m_max = b.at("m_max");
    return d;
}

int cmd_render(const Common& c, const FrameRef& ref, bool background, int receiver,
               const std::string& detection_path) {
    auto cfg = effective_config(c.config);
    Output out(c.out, "render");
    out.input("recording", ref.recording);
    const auto rec = read_recording(ref.recording);
    const auto& frame = background ? pick(rec.background, ref.frame, "background")
                                   : pick(rec.foreground, ref.frame, "foreground");
    const auto img = render_spectrum(range_doppler(frame, cfg.dataset.window), receiver);
    write_pnm(out.file("spectrum.pgm"), img);
    if (!detection_path.empty()) {
        out.input("detection", detection_path);
        const auto j = read_json(detection_path);
        const auto& list = j.contains("detections") ? j.at("detections") : json::array({j});
        if (!list.empty()) write_pnm(out.file("overlay.ppm"), overlay_detection(img, box_from_json(list[0])));
    }
    out.manifest()["config"] = {{"window", window_name(cfg.dataset.window)}, {"receiver", receiver},
                                {"frame", ref.frame}, {"background", background}};
    out.commit();
    return 0;
}

std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const UsageError*>(&e)) return "usage";
    if (dynamic_cast<const io::FormatError*>(&e)) return "format";
    if (dynamic_cast<const train::TrainingDiverged*>(&e)) return "diverged";
    if (dynamic_cast<const fs::filesystem_error*>(&e)) return "io";
    if (dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const std::out_of_range*>(&e) ||
        dynamic_cast<const std::domain_error*>(&e))
        return "invalid_input";
    return "runtime";
}

void report(std::ostream& err, const std::string& command, const std::string& kind,
            const std::string& message) {
    err << json{{"error", kind}, {"command", command}, {"message", message}}.dump() << std::endl;
}

}  // namespace

json config_json(const PipelineConfig& c) {
    return {{"radar", c.radar},
            {"camera", c.camera},
            {"clutter", c.clutter},
            {"scenario", c.scenario},
            {"dataset", dataset_options_json(c.dataset)},
            {"train", c.train},
            {"network", {{"widths", c.widths}}},
            {"detect", {{"threshold", c.detect.threshold}, {"min_cells", c.detect.min_cells}}}};
}

PipelineConfig parse_config(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    PipelineConfig c;
    if (j.contains("radar")) from_json(j.at("radar"), c.radar);
    if (j.contains("camera")) from_json(j.at("camera"), c.camera);
    if (j.contains("clutter")) from_json(j.at("clutter"), c.clutter);
    if (j.contains("scenario")) from_json(j.at("scenario"), c.scenario);
    if (j.contains("dataset")) c.dataset = dataset_options_from(j.at("dataset"), c.dataset);
    if (j.contains("train")) train::from_json(j.at("train"), c.train);
    if (j.contains("network")) c.widths = j.at("network").value("widths", c.widths);
    if (j.contains("detect")) {
        c.detect.threshold = j.at("detect").value("threshold", c.detect.threshold);
        c.detect.min_cells = j.at("detect").value("min_cells", c.detect.min_cells);
    }
    return c;
}

PipelineConfig load_config(const fs::path& path) {
    try {
        return parse_config(read_json(path));
    } catch (const json::exception& e) {
        throw std::invalid_argument("bad config " + path.string() + ": " + e.what());
    }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Radar range-doppler object detection pipeline", "radnet"};
    app.require_subcommand(1);
    app.fallthrough();
    std::optional<int> thread_count;
    app.add_option("--threads", thread_count, "worker threads (1 = deterministic)")
        ->check(CLI::PositiveNumber);

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "pipeline config JSON (see print-config)");
        sub->add_option("--out", common.out, "output directory")->required();
    };

    std::uint64_t sim_seed = 1;
    std::string scenario;
    auto* sim = app.add_subcommand("simulate", "synthesize background, training and validation recordings");
    add_common(sim);
    sim->add_option("--scenario", scenario, "scenario JSON overriding the config's scenario section");
    sim->add_option("--seed", sim_seed, "top-level seed");

    std::string bg_path, fg_path;
    std::optional<std::string> window;
    bool no_norm = false;
    std::uint64_t pair_seed = 1;
    auto* pre = app.add_subcommand("preprocess", "turn recordings into a training dataset");
    add_common(pre);
    pre->add_option("--background", bg_path, "recording with background frames")->required();
    pre->add_option("--foreground", fg_path, "recording with foreground frames")->required();
    pre->add_option("--window", window, "FFT window: none | hann");
    pre->add_flag("--no-phase-norm", no_norm, "skip per-cell phase normalization");
    pre->add_option("--seed", pair_seed, "pairing seed");

    std::string train_path, val_path;
    TrainFlags tf;
    auto* tr = app.add_subcommand("train", "train the network");
    add_common(tr);
    tr->add_option("--train", train_path, "training dataset (RDT1)")->required();
    tr->add_option("--val", val_path, "validation dataset (RDT1)");
    tr->add_option("--lr", tf.lr, "learning rate");
    tr->add_option("--momentum", tf.momentum, "momentum");
    tr->add_option("--epochs", tf.epochs, "epochs");
    tr->add_option("--batch", tf.batch, "mini-batch size");
    tr->add_option("--seed", tf.seed, "initialization and shuffling seed");

    std::string dataset, checkpoint;
    std::optional<double> tau;
    auto* ev = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
    add_common(ev);
    ev->add_option("--dataset", dataset, "dataset (RDT1)")->required();
    ev->add_option("--checkpoint", checkpoint, "weights (RDW1)")->required();
    ev->add_option("--tau", tau, "presence threshold");

    FrameRef bgref, fgref;
    auto* inf = app.add_subcommand("infer", "detect the object in one foreground/background pair");
    add_common(inf);
    inf->add_option("--background", bgref.recording, "recording with background frames")->required();
    inf->add_option("--bg-frame", bgref.frame, "background frame index");
    inf->add_option("--foreground", fgref.recording, "recording with foreground frames")->required();
    inf->add_option("--fg-frame", fgref.frame, "foreground frame index");
    inf->add_option("--checkpoint", checkpoint, "weights (RDW1)")->required();
    inf->add_option("--tau", tau, "presence threshold");

    FrameRef rref;
    bool render_bg = false;
    int receiver = 0;
    std::string detection;
    auto* ren = app.add_subcommand("render", "write a spectrum image and a detection overlay");
    add_common(ren);
    ren->add_option("--recording", rref.recording, "recording (RDR1)")->required();
    ren->add_option("--frame", rref.frame, "frame index");
    ren->add_flag("--background", render_bg, "index into background frames");
    ren->add_option("--receiver", receiver, "receiver to render");
    ren->add_option("--detection", detection, "detection JSON from infer");

    auto* pc = app.add_subcommand("print-config", "print the full default configuration");
    pc->add_option("--config", common.config, "merge this config over the defaults");

    std::string command = "radnet";
    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return 0;
        } catch (const CLI::CallForAllHelp&) {
            out << app.help("", CLI::AppFormatMode::All);
            return 0;
        } catch (const CLI::ParseError& e) {
            for (auto* s : app.get_subcommands()) command = s->get_name();
            report(err, command, "usage", e.what());
            return 2;
        }
        command = app.get_subcommands().front()->get_name();
        set_threads(thread_count ? *thread_count : threads_from_env(1));

        if (command == "simulate") return cmd_simulate(common, sim_seed, scenario);
        if (command == "preprocess") return cmd_preprocess(common, bg_path, fg_path, window, no_norm, pair_seed);
        if (command == "train") return cmd_train(common, train_path, val_path, tf, out);
        if (command == "eval") return cmd_eval(common, dataset, checkpoint, tau, out);
        if (command == "infer") return cmd_infer(common, bgref, fgref, checkpoint, tau, out);
        if (command == "render") return cmd_render(common, rref, render_bg, receiver, detection);
        out << config_json(effective_config(common.config)).dump(2) << '\n';
        return 0;
    } catch (const UsageError& e) {
        report(err, command, "usage", e.what());
        return 2;
    } catch (const std::exception& e) {
        report(err, command, error_kind(e), e.what());
        return 1;
    }
}

}  // namespace radnet::cli
