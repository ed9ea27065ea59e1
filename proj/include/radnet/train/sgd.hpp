// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "radnet/nn/unet.hpp"

namespace radnet::train {

/// Classic momentum: velocity <- momentum * velocity - lr * grad; param <- param + velocity.
template <class T>
void sgd_step(nn::NetworkParams<T>& params, const nn::NetworkParams<T>& grads,
              nn::NetworkParams<T>& velocity, double learning_rate, double momentum);

}  // namespace radnet::train
