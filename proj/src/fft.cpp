#include "metastab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "metastab/errors.hpp"

namespace metastab::detail {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

FftPlan::FftPlan(int d, int grid_points, Direction dir) {
    total_ = d == 1 ? grid_points : grid_points * grid_points;
    std::vector<fftw_complex> scratch_in(static_cast<std::size_t>(total_));
    std::vector<fftw_complex> scratch_out(static_cast<std::size_t>(total_));
    const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p = d == 1
        ? fftw_plan_dft_1d(grid_points, scratch_in.data(), scratch_out.data(), sign, flags)
        : fftw_plan_dft_2d(grid_points, grid_points, scratch_in.data(), scratch_out.data(), sign, flags);
    if (p == nullptr) throw InvalidArgument("FFTW failed to create a plan");
    plan_ = p;
}

FftPlan::~FftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

std::shared_ptr<const FftPlan> FftPlan::get(int d, int grid_points, Direction dir) {
    if ((d != 1 && d != 2) || grid_points < 1) throw InvalidArgument("unsupported FFT shape");
    using Key = std::tuple<int, int, int>;
    // The mutex must outlive the cache, whose plans lock it on destruction.
    std::lock_guard lock(planner_mutex());
    static std::map<Key, std::shared_ptr<const FftPlan>> cache;
    const Key key{d, grid_points, dir == Direction::forward ? 0 : 1};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::shared_ptr<const FftPlan> plan(new FftPlan(d, grid_points, dir));
    cache.emplace(key, plan);
    return plan;
}

void FftPlan::execute(std::span<std::complex<double>> in, std::span<std::complex<double>> out) const {
    if (static_cast<int>(in.size()) != total_ || static_cast<int>(out.size()) != total_) {
        throw ShapeMismatch("FFT buffer size does not match plan");
    }
    fftw_execute_dft(static_cast<fftw_plan>(plan_), reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace metastab::detail
