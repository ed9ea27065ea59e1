// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace radnet::train {

/// One training sample. For background-only samples `fg_index` points into the
/// background list (a second background frame stands in for the foreground).
struct SamplePair {
    int fg_index = 0;
    int bg_index = 0;
    bool background_only = false;

    bool operator==(const SamplePair&) const = default;
};

/// One pair per foreground frame with a background drawn uniformly with
/// replacement, followed by round(ratio * fg_count) background-only pairs
/// (round(ratio * bg_count) when there are no foreground frames).
std::vector<SamplePair> pair_samples(int fg_count, int bg_count, std::uint64_t seed,
                                     double background_ratio = 0.25);

}  // namespace radnet::train
