// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "radnet/dataset.hpp"
#include "radnet/nn/unet.hpp"
#include "radnet/train/loss.hpp"

namespace radnet::train {

struct TrainConfig {
    double learning_rate = 0.03;
    double momentum = 0.9;
    int epochs = 200;
    int batch_size = 8;
    std::uint64_t seed = 1;
    LossWeights weights;
    double background_ratio = 0.25;

    void validate() const;
};

void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);

struct EpochRecord {
    int epoch = 0;
    LossBreakdown train;  // mean over the epoch's mini-batch samples
    LossBreakdown val;    // mean over the validation set after the epoch
    double wall_ms = 0.0;
};

/// One JSON-lines record: epoch, seg/msex/msey for train and val, wall_ms.
nlohmann::json epoch_json(const EpochRecord& r);

struct TrainResult {
    nn::NetworkParams<float> best;   // lowest validation total loss
    nn::NetworkParams<float> last;
    nn::NetworkParams<float> velocity;
    int best_epoch = 0;
    std::vector<EpochRecord> history;
};

struct TrainingDiverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Stacks the selected samples into a (B,C,K,M) input and (B,1,K,M) targets.
void make_batch(const Dataset& ds, std::span<const std::size_t> indices, nn::Tensor4<float>& input,
                TargetBatch<float>& targets);

/// Runs the network over a dataset in batches.
std::vector<nn::UNetOutputs<float>> predict(const nn::NetworkParams<float>& params,
                                            const nn::NetworkSpec& spec, const Dataset& ds,
                                            int batch_size = 8);

/// Mean per-sample loss over a dataset.
LossBreakdown evaluate_loss(const nn::NetworkParams<float>& params, const nn::NetworkSpec& spec,
                            const Dataset& ds, const LossWeights& weights, int batch_size = 8);

/// Mini-batch SGD with momentum over shuffled samples. Deterministic given the
/// seed when running single-threaded. Throws TrainingDiverged on a non-finite loss.
TrainResult train(const Dataset& train_set, const Dataset& val_set, const nn::NetworkSpec& spec,
                  const TrainConfig& cfg,
                  const std::function<void(const EpochRecord&)>& on_epoch = {},
                  std::optional<nn::NetworkParams<float>> initial = std::nullopt);

}  // namespace radnet::train
