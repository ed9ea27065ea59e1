// SPDX-License-Identifier: Apache-2.0
#include "radnet/parallel.hpp"

#include <Eigen/Core>

#if defined(__SSE__) || defined(_M_X64)
#include <xmmintrin.h>
#define RADNET_HAVE_MXCSR 1
#endif

#include <cstdlib>
#include <string>

namespace radnet {

void set_threads(int n) { Eigen::setNbThreads(n < 1 ? 1 : n); }

int threads() { return Eigen::nbThreads(); }

int threads_from_env(int fallback) {
    const char* v = std::getenv("RADNET_THREADS");
    if (!v || !*v) return fallback;
    try {
        const int n = std::stoi(v);
        return n >= 1 ? n : fallback;
    } catch (const std::exception&) {
        return fallback;
    }
}

#ifdef RADNET_HAVE_MXCSR
// FTZ (bit 15) and DAZ (bit 6).
FlushDenormals::FlushDenormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040u); }
FlushDenormals::~FlushDenormals() { _mm_setcsr(saved_); }
#else
FlushDenormals::FlushDenormals() = default;
FlushDenormals::~FlushDenormals() = default;
#endif

}  // namespace radnet
