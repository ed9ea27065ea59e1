// SPDX-License-Identifier: Apache-2.0
#include "radnet/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace radnet {

namespace {

struct PlanCache {
    std::mutex mu;
    std::map<std::pair<int, int>, fftw_plan> plans;

    ~PlanCache() {
        for (auto& [_, p] : plans) fftw_destroy_plan(p);
    }

    // Planned against a scratch buffer with the alignment fftw_malloc gives;
    // fftw_execute_dft is then used on equally aligned buffers.
    fftw_plan get(int rows, int cols) {
        std::lock_guard lock(mu);
        auto it = plans.find({rows, cols});
        if (it != plans.end()) return it->second;
        auto* scratch = fftw_alloc_complex(static_cast<std::size_t>(rows) * cols);
        fftw_plan p = fftw_plan_dft_2d(rows, cols, scratch, scratch, FFTW_FORWARD, FFTW_ESTIMATE);
        fftw_free(scratch);
        if (!p) throw std::runtime_error("fftw planning failed");
        plans.emplace(std::make_pair(rows, cols), p);
        return p;
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

}  // namespace

void fft2d_forward(std::span<std::complex<double>> data, int rows, int cols) {
    if (rows <= 0 || cols <= 0 || data.size() != static_cast<std::size_t>(rows) * cols)
        throw std::invalid_argument("fft2d_forward: size mismatch");
    const fftw_plan plan = cache().get(rows, cols);
    auto* buf = fftw_alloc_complex(data.size());
    std::memcpy(buf, data.data(), data.size_bytes());
    fftw_execute_dft(plan, buf, buf);
    std::memcpy(static_cast<void*>(data.data()), buf, data.size_bytes());
    fftw_free(buf);
}

}  // namespace radnet
