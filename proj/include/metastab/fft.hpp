#pragma once

#include <complex>
#include <memory>
#include <span>

namespace metastab::detail {

/// Thin RAII handle over an FFTW complex-to-complex plan of size M^d.
///
/// Plans are created once per (d, M, direction) under a global lock and
/// shared; execution goes through the new-array interface with
/// FFTW_UNALIGNED, which is safe to call concurrently on distinct buffers.
/// Plans are built with FFTW_ESTIMATE so the algorithm choice, and hence the
/// rounding, does not depend on timing.
class FftPlan {
public:
    enum class Direction { forward, backward };

    static std::shared_ptr<const FftPlan> get(int d, int grid_points, Direction dir);

    /// Unnormalized transform: sum_j in_j exp(-+ 2 pi i j.k / M).
    void execute(std::span<std::complex<double>> in, std::span<std::complex<double>> out) const;

    ~FftPlan();
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    int size() const { return total_; }

private:
    FftPlan(int d, int grid_points, Direction dir);
    void* plan_ = nullptr;
    int total_ = 0;
};

}  // namespace metastab::detail
