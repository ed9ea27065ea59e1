// SPDX-License-Identifier: Apache-2.0
#include "radnet/train/pairing.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace radnet::train {

std::vector<SamplePair> pair_samples(int fg_count, int bg_count, std::uint64_t seed,
                                     double background_ratio) {
    if (fg_count < 0 || bg_count < 0) throw std::invalid_argument("pair_samples: negative count");
    if (!(background_ratio >= 0.0)) throw std::invalid_argument("pair_samples: negative ratio");
    if (bg_count == 0) {
        if (fg_count > 0) throw std::invalid_argument("pair_samples: no background frames to pair");
        return {};
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, bg_count - 1);

    std::vector<SamplePair> pairs;
    for (int i = 0; i < fg_count; ++i) pairs.push_back({i, pick(rng), false});

    const int basis = fg_count > 0 ? fg_count : bg_count;
    const int n_bg = static_cast<int>(std::lround(background_ratio * basis));
    for (int i = 0; i < n_bg; ++i) {
        const int a = pick(rng);
        int b = pick(rng);
        if (bg_count > 1)
            while (b == a) b = pick(rng);
        pairs.push_back({b, a, true});
    }
    return pairs;
}

}  // namespace radnet::train
