// SPDX-License-Identifier: Apache-2.0
#include "radnet/nn/checkpoint.hpp"

#include <fstream>

#include "radnet/binary_io.hpp"

namespace radnet::nn {

namespace {

void write_blobs(io::LeWriter& w, const NetworkSpec& spec, const NetworkParams<float>& p) {
    if (p.weights.size() != spec.layers().size() || p.biases.size() != spec.layers().size())
        throw std::invalid_argument("checkpoint: parameter set does not match spec");
    for (std::size_t i = 0; i < p.weights.size(); ++i) {
        const auto& t = p.weights[i];
        if (t.shape() != spec.layers()[i].weight_shape())
            throw std::invalid_argument("checkpoint: weight shape mismatch at " +
                                        spec.layers()[i].name);
        for (int d : t.shape()) w.u32(static_cast<std::uint32_t>(d));
        w.f32s(t.v);
        w.u32(static_cast<std::uint32_t>(p.biases[i].size()));
        w.f32s(p.biases[i]);
    }
}

NetworkParams<float> read_blobs(io::LeReader& r, const NetworkSpec& spec) {
    auto p = NetworkParams<float>::zeros(spec);
    for (std::size_t i = 0; i < spec.layers().size(); ++i) {
        std::array<int, 4> shape{};
        for (auto& d : shape) d = static_cast<int>(r.u32());
        if (shape != spec.layers()[i].weight_shape())
            throw io::FormatError("checkpoint: weight shape mismatch at " + spec.layers()[i].name);
        r.f32s(p.weights[i].v);
        if (r.u32() != p.biases[i].size()) throw io::FormatError("checkpoint: bias length mismatch");
        r.f32s(p.biases[i]);
    }
    return p;
}

}  // namespace

void write_checkpoint(std::ostream& os, const Checkpoint& ckpt) {
    io::LeWriter w(os);
    w.magic("RDW1");
    w.u32(kCheckpointVersion);
    w.u32(static_cast<std::uint32_t>(ckpt.spec.input_channels()));
    w.u32(static_cast<std::uint32_t>(ckpt.spec.widths().size()));
    for (int c : ckpt.spec.widths()) w.u32(static_cast<std::uint32_t>(c));
    w.u32(static_cast<std::uint32_t>(ckpt.spec.layers().size()));
    for (const auto& l : ckpt.spec.layers()) {
        w.str(l.name);
        w.u8(static_cast<std::uint8_t>(l.kind));
        w.u32(static_cast<std::uint32_t>(l.in_channels));
        w.u32(static_cast<std::uint32_t>(l.out_channels));
    }
    write_blobs(w, ckpt.spec, ckpt.params);
    w.u8(ckpt.momentum ? 1 : 0);
    if (ckpt.momentum) write_blobs(w, ckpt.spec, *ckpt.momentum);
    w.check();
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path.string());
    write_checkpoint(os, ckpt);
}

Checkpoint read_checkpoint(std::istream& is) {
    io::LeReader r(is);
    r.expect_magic("RDW1");
    if (r.u32() != kCheckpointVersion) throw io::FormatError("unsupported RDW1 version");
    const int in_ch = static_cast<int>(r.u32());
    const auto levels = r.u32();
    if (levels > 16) throw io::FormatError("implausible level count");
    std::vector<int> widths(levels);
    for (auto& c : widths) c = static_cast<int>(r.u32());
    NetworkSpec spec(in_ch, widths);

    const auto n_layers = r.u32();
    if (n_layers != spec.layers().size()) throw io::FormatError("layer table size mismatch");
    for (const auto& l : spec.layers()) {
        const auto name = r.str(256);
        const auto kind = r.u8();
        const auto in = r.u32();
        const auto out = r.u32();
        if (name != l.name || kind != static_cast<std::uint8_t>(l.kind) ||
            in != static_cast<std::uint32_t>(l.in_channels) ||
            out != static_cast<std::uint32_t>(l.out_channels))
            throw io::FormatError("layer table disagrees with spec at " + l.name);
    }
    Checkpoint ckpt{spec, read_blobs(r, spec), std::nullopt};
    if (r.u8() != 0) ckpt.momentum = read_blobs(r, spec);
    if (!r.at_eof()) throw io::FormatError("trailing bytes after RDW1 payload");
    return ckpt;
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    return read_checkpoint(is);
}

}  // namespace radnet::nn
