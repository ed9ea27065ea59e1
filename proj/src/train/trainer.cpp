// SPDX-License-Identifier: Apache-2.0
#include "radnet/train/trainer.hpp"
#include "radnet/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "radnet/scene.hpp"
#include "radnet/train/sgd.hpp"

namespace radnet::train {

using nlohmann::json;

void TrainConfig::validate() const {
    if (!(learning_rate >= 0.0)) throw std::invalid_argument("learning_rate must be >= 0");
    if (!(momentum >= 0.0 && momentum < 1.0)) throw std::invalid_argument("momentum must be in [0,1)");
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    if (!(background_ratio >= 0.0)) throw std::invalid_argument("background_ratio must be >= 0");
}

void to_json(json& j, const TrainConfig& c) {
    j = json{{"learning_rate", c.learning_rate},
             {"momentum", c.momentum},
             {"epochs", c.epochs},
             {"batch_size", c.batch_size},
             {"seed", c.seed},
             {"loss_weights", {{"seg", c.weights.seg}, {"x", c.weights.coord_x}, {"y", c.weights.coord_y}}},
             {"background_ratio", c.background_ratio}};
}

void from_json(const json& j, TrainConfig& c) {
    TrainConfig d;
    c.learning_rate = j.value("learning_rate", d.learning_rate);
    c.momentum = j.value("momentum", d.momentum);
    c.epochs = j.value("epochs", d.epochs);
    c.batch_size = j.value("batch_size", d.batch_size);
    c.seed = j.value("seed", d.seed);
    if (j.contains("loss_weights")) {
        const auto& w = j.at("loss_weights");
        c.weights.seg = w.value("seg", 1.0);
        c.weights.coord_x = w.value("x", 1.0);
        c.weights.coord_y = w.value("y", 1.0);
    }
    c.background_ratio = j.value("background_ratio", d.background_ratio);
}

json epoch_json(const EpochRecord& r) {
    return json{{"epoch", r.epoch},
                {"seg_train", r.train.seg_loss},
                {"seg_val", r.val.seg_loss},
                {"msex_train", r.train.mse_x},
                {"msex_val", r.val.mse_x},
                {"msey_train", r.train.mse_y},
                {"msey_val", r.val.mse_y},
                {"wall_ms", r.wall_ms}};
}

void make_batch(const Dataset& ds, std::span<const std::size_t> indices, nn::Tensor4<float>& input,
                TargetBatch<float>& targets) {
    const int B = static_cast<int>(indices.size());
    const int K = ds.range_bins, M = ds.doppler_bins;
    input = nn::Tensor4<float>(B, ds.channels, K, M);
    targets.presence = nn::Tensor4<float>(B, 1, K, M);
    targets.coord_x = nn::Tensor4<float>(B, 1, K, M);
    targets.coord_y = nn::Tensor4<float>(B, 1, K, M);
    const std::size_t cells = static_cast<std::size_t>(K) * M;
    for (int b = 0; b < B; ++b) {
        const auto& s = ds.samples.at(indices[b]);
        if (s.input.values.size() != ds.channels * cells)
            throw std::invalid_argument("make_batch: sample size differs from dataset header");
        std::copy(s.input.values.begin(), s.input.values.end(), input.channel(b, 0));
        std::copy(s.targets.presence.begin(), s.targets.presence.end(), targets.presence.channel(b, 0));
        std::copy(s.targets.coord_x.begin(), s.targets.coord_x.end(), targets.coord_x.channel(b, 0));
        std::copy(s.targets.coord_y.begin(), s.targets.coord_y.end(), targets.coord_y.channel(b, 0));
    }
}

namespace {

template <class F>
void for_each_batch(std::size_t count, int batch_size, const std::vector<std::size_t>& order, F&& f) {
    for (std::size_t start = 0; start < count; start += batch_size) {
        const std::size_t end = std::min(count, start + batch_size);
        f(std::span<const std::size_t>(order.data() + start, end - start));
    }
}

}  // namespace

std::vector<nn::UNetOutputs<float>> predict(const nn::NetworkParams<float>& params,
                                            const nn::NetworkSpec& spec, const Dataset& ds,
                                            int batch_size) {
    std::vector<std::size_t> order(ds.samples.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<nn::UNetOutputs<float>> out;
    nn::Tensor4<float> input;
    TargetBatch<float> targets;
    for_each_batch(order.size(), batch_size, order, [&](std::span<const std::size_t> idx) {
        make_batch(ds, idx, input, targets);
        out.push_back(nn::unet_forward(params, spec, input));
    });
    return out;
}

LossBreakdown evaluate_loss(const nn::NetworkParams<float>& params, const nn::NetworkSpec& spec,
                            const Dataset& ds, const LossWeights& weights, int batch_size) {
    if (ds.samples.empty()) return {};
    std::vector<std::size_t> order(ds.samples.size());
    std::iota(order.begin(), order.end(), 0);
    LossBreakdown sum;
    nn::Tensor4<float> input;
    TargetBatch<float> targets;
    for_each_batch(order.size(), batch_size, order, [&](std::span<const std::size_t> idx) {
        make_batch(ds, idx, input, targets);
        const auto out = nn::unet_forward(params, spec, input);
        for (const auto& l : per_sample_loss(out, targets, weights)) sum += l;
    });
    return sum.scaled(1.0 / static_cast<double>(ds.samples.size()));
}

TrainResult train(const Dataset& train_set, const Dataset& val_set, const nn::NetworkSpec& spec,
                  const TrainConfig& cfg, const std::function<void(const EpochRecord&)>& on_epoch,
                  std::optional<nn::NetworkParams<float>> initial) {
    cfg.validate();
    const FlushDenormals ftz;
    if (train_set.samples.empty()) throw std::invalid_argument("train: empty training set");
    if (train_set.channels != spec.input_channels())
        throw std::invalid_argument("train: dataset channels differ from network input");

    TrainResult res;
    res.last = initial ? std::move(*initial) : nn::init_params<float>(spec, derive_seed(cfg.seed, 0));
    res.velocity = nn::NetworkParams<float>::zeros(spec);
    res.best = res.last;
    double best_score = std::numeric_limits<double>::infinity();

    std::vector<std::size_t> order(train_set.samples.size());
    std::iota(order.begin(), order.end(), 0);
    nn::Tensor4<float> input;
    TargetBatch<float> targets;
    nn::UNetCache<float> cache;

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        std::mt19937_64 rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(epoch)));
        std::shuffle(order.begin(), order.end(), rng);

        LossBreakdown epoch_sum;
        for_each_batch(order.size(), cfg.batch_size, order, [&](std::span<const std::size_t> idx) {
            make_batch(train_set, idx, input, targets);
            const auto out = nn::unet_forward(res.last, spec, input, &cache);
            nn::HeadGrads<float> head;
            const auto loss = total_loss(out, targets, cfg.weights, &head, GradSpace::Logits);
            if (!std::isfinite(loss.total))
                throw TrainingDiverged("non-finite training loss at epoch " + std::to_string(epoch));
            const auto grads = nn::unet_backward(res.last, spec, cache, head);
            sgd_step(res.last, grads, res.velocity, cfg.learning_rate, cfg.momentum);
            epoch_sum += loss.scaled(static_cast<double>(idx.size()));
        });

        EpochRecord rec;
        rec.epoch = epoch;
        rec.train = epoch_sum.scaled(1.0 / static_cast<double>(order.size()));
        rec.val = evaluate_loss(res.last, spec, val_set, cfg.weights, cfg.batch_size);
        rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        const double score = val_set.samples.empty() ? rec.train.total : rec.val.total;
        if (!std::isfinite(score))
            throw TrainingDiverged("non-finite loss after epoch " + std::to_string(epoch));
        if (score < best_score) {
            best_score = score;
            res.best = res.last;
            res.best_epoch = epoch;
        }
        res.history.push_back(rec);
        if (on_epoch) on_epoch(rec);
    }
    return res;
}

}  // namespace radnet::train
