// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace radnet {

/// Threads used by the dense kernels. 1 is the strictly deterministic mode.
void set_threads(int n);
int threads();

/// Reads RADNET_THREADS; falls back to `fallback` when unset or invalid.
int threads_from_env(int fallback = 1);

/// Flushes subnormal floats to zero on the calling thread while alive. Deep
/// activations and gradients drift into the subnormal range late in training,
/// where x86 arithmetic slows down by two orders of magnitude.
class FlushDenormals {
public:
    FlushDenormals();
    ~FlushDenormals();
    FlushDenormals(const FlushDenormals&) = delete;
    FlushDenormals& operator=(const FlushDenormals&) = delete;

private:
    unsigned saved_ = 0;
};

}  // namespace radnet
