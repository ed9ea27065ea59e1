// SPDX-License-Identifier: Apache-2.0
#include "radnet/train/sgd.hpp"

#include <stdexcept>

namespace radnet::train {

namespace {

template <class T>
void update(std::vector<T>& p, const std::vector<T>& g, std::vector<T>& v, T lr, T mu) {
    if (p.size() != g.size() || p.size() != v.size())
        throw std::invalid_argument("sgd_step: parameter/gradient size mismatch");
    for (std::size_t i = 0; i < p.size(); ++i) {
        v[i] = mu * v[i] - lr * g[i];
        p[i] += v[i];
    }
}

}  // namespace

template <class T>
void sgd_step(nn::NetworkParams<T>& params, const nn::NetworkParams<T>& grads,
              nn::NetworkParams<T>& velocity, double learning_rate, double momentum) {
    if (params.weights.size() != grads.weights.size() ||
        params.weights.size() != velocity.weights.size())
        throw std::invalid_argument("sgd_step: layer count mismatch");
    const T lr = static_cast<T>(learning_rate);
    const T mu = static_cast<T>(momentum);
    for (std::size_t i = 0; i < params.weights.size(); ++i) {
        update(params.weights[i].v, grads.weights[i].v, velocity.weights[i].v, lr, mu);
        update(params.biases[i], grads.biases[i], velocity.biases[i], lr, mu);
    }
}

template void sgd_step(nn::NetworkParams<float>&, const nn::NetworkParams<float>&,
                       nn::NetworkParams<float>&, double, double);
template void sgd_step(nn::NetworkParams<double>&, const nn::NetworkParams<double>&,
                       nn::NetworkParams<double>&, double, double);

}  // namespace radnet::train
