#include "torus/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace torus::fft {

namespace {
// FFTW planning is not thread safe; execution is.
std::mutex planner_mutex;
}  // namespace

void dft(std::vector<cplx>& data, const std::vector<int>& dims, int sign) {
    std::size_t total = 1;
    for (int d : dims) total *= static_cast<std::size_t>(d);
    if (total != data.size()) throw config_error("dft: dims do not match data size");
    if (total == 0) return;

    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan = nullptr;
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        plan = fftw_plan_dft(static_cast<int>(dims.size()),
                             const_cast<int*>(dims.data()), buf, buf,
                             sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    if (!plan) throw error("fftw plan creation failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        fftw_destroy_plan(plan);
    }
}

void dft_1d(cplx* row, int n, int sign) {
    auto* buf = reinterpret_cast<fftw_complex*>(row);
    fftw_plan plan = nullptr;
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        plan = fftw_plan_dft_1d(n, buf, buf, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                FFTW_ESTIMATE);
    }
    if (!plan) throw error("fftw plan creation failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        fftw_destroy_plan(plan);
    }
}

}  // namespace torus::fft
