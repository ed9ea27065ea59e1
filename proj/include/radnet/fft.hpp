// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <span>

namespace radnet {

/// In-place forward 2D DFT of a row-major `rows x cols` array (no scaling).
/// Reentrant: plans are created once per shape under a lock and executed on
/// caller-owned buffers.
void fft2d_forward(std::span<std::complex<double>> data, int rows, int cols);

}  // namespace radnet
