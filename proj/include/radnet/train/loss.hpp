// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "radnet/nn/unet.hpp"

namespace radnet::train {

inline constexpr double kBceClamp = 1e-7;
inline constexpr double kDiceEps = 1e-7;

struct LossWeights {
    double seg = 1.0;
    double coord_x = 1.0;
    double coord_y = 1.0;
};

struct LossBreakdown {
    double bce = 0.0;
    double dice = 0.0;
    double seg_loss = 0.0;  // bce - dice
    double mse_x = 0.0;
    double mse_y = 0.0;
    double total = 0.0;

    LossBreakdown& operator+=(const LossBreakdown& o);
    LossBreakdown scaled(double s) const;
};

/// Mean BCE (p clamped to [1e-7, 1 - 1e-7]) minus the Dice coefficient
/// 2 sum(pg) / (sum(p^2) + sum(g^2) + 1e-7) over one map. When `grad` is
/// non-empty it receives d(loss)/dp, scaled by `grad_scale`.
template <class T>
double seg_loss(std::span<const T> p, std::span<const T> g, std::span<T> grad = {},
                double grad_scale = 1.0, double* bce_out = nullptr, double* dice_out = nullptr);

/// sum_mask (c - cg)^2 / max(1, sum mask); 0 for an empty mask.
template <class T>
double masked_mse(std::span<const T> c, std::span<const T> cg, std::span<const T> mask,
                  std::span<T> grad = {}, double grad_scale = 1.0);

/// Ground truth for a batch, each (B,1,K,M); `presence` doubles as the mask.
template <class T>
struct TargetBatch {
    nn::Tensor4<T> presence;
    nn::Tensor4<T> coord_x;
    nn::Tensor4<T> coord_y;
};

enum class GradSpace {
    Probabilities,  // d(loss)/d(head output), exact derivative including the BCE clamp
    Logits          // d(loss)/d(head logit), BCE folded through the sigmoid as (p - g)/n
};

/// Per-sample losses averaged over the batch. When `grads` is non-null it is
/// filled with gradients of the batch mean in the requested space.
template <class T>
LossBreakdown total_loss(const nn::UNetOutputs<T>& out, const TargetBatch<T>& targets,
                         const LossWeights& weights, nn::HeadGrads<T>* grads = nullptr,
                         GradSpace space = GradSpace::Probabilities);

/// Per-sample breakdowns, in batch order.
template <class T>
std::vector<LossBreakdown> per_sample_loss(const nn::UNetOutputs<T>& out,
                                           const TargetBatch<T>& targets,
                                           const LossWeights& weights);

}  // namespace radnet::train
