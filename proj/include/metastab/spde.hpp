#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "metastab/sde.hpp"
#include "metastab/spectral_field.hpp"

namespace metastab {

/// Stochastic Allen-Cahn equation
///   d phi = (Laplacian phi + phi + 3 eps C_N phi [renormalize] - P_N phi^3) dt + sqrt(2 eps) P_N dW
/// on T^d_L, truncated to the square cutoff of `field0`.
struct SpdeRun {
    SpectralField field0{1, 2.0, 16};
    double epsilon = 0.1;
    double dt = 1e-3;
    double t_max = 0.0;  ///< <= 0 selects 1e6 * dt
    std::uint64_t seed = 0;
    bool renormalize = false;
    int grid_factor = 1;
    /// Drops the cubic term; each mode is then an exact linear OU process.
    bool include_cubic = true;

    double horizon() const { return t_max > 0.0 ? t_max : 1e6 * dt; }
    void validate() const;
};

/// Maps one standard normal per mode to conjugate-symmetric complex noise:
/// for the pair (k, -k), eta_k = (g_k - i g_{-k}) / sqrt 2, eta_{-k} =
/// conj(eta_k); eta_0 = g_0. Each real Fourier coordinate thereby receives an
/// independent standard normal.
void conjugate_symmetric_noise(std::span<const double> gaussians, std::span<Complex> out);

/// Semi-implicit Euler stepper, implicit in (Laplacian + 1) and explicit in
/// the cubic and counterterm. Holds reusable FFT workspace; not thread-safe,
/// use one per replica.
class SpdeStepper {
public:
    explicit SpdeStepper(const SpdeRun& run);
    ~SpdeStepper();
    SpdeStepper(SpdeStepper&&) noexcept;
    SpdeStepper& operator=(SpdeStepper&&) noexcept;

    /// Advances phi in place by one step with the given per-mode normals.
    /// Throws NonFinite when the field blows up.
    void step(SpectralField& phi, std::span<const double> gaussians);

    /// Grid values of the field after the last step (or after `load`), on the
    /// dealiased collocation grid.
    std::span<const double> grid_values() const;
    void load(const SpectralField& phi);

    double counterterm() const;
    int grid_points() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One step from phi; convenience wrapper building a temporary stepper.
SpectralField spde_step(const SpdeRun& run, const SpectralField& phi, std::span<const double> gaussians);

struct SpdeTrajectory {
    std::vector<double> times;
    std::vector<SpectralField> fields;
};

/// Integrates n_steps steps from field0 using stream `stream`, recording every
/// `stride` steps including t = 0.
SpdeTrajectory simulate_spde(const SpdeRun& run, std::size_t n_steps, std::size_t stride = 1,
                             std::uint64_t stream = 0);

enum class HittingNorm { linf, sobolev };

struct HittingTarget {
    double value = 1.0;  ///< constant target state, +1 or -1
    double delta = 0.3;
    HittingNorm norm = HittingNorm::linf;
    double sobolev_s = -0.5;
};

/// Distance from phi to the constant target in the chosen norm.
double target_distance(const SpectralField& phi, const HittingTarget& target, std::span<const double> grid_values);

HittingTimeBatch sample_spde_hitting_times(const SpdeRun& run, const HittingTarget& target, std::size_t n,
                                           unsigned threads = 1);

/// Axis-aligned box A in T^d_L given by per-axis [lo, hi].
struct TorusBox {
    double lo[2] = {0.0, 0.0};
    double hi[2] = {0.0, 0.0};

    double volume(int d) const;
};

/// Pairing <e_k, 1_A> for every retained mode of a field of shape (d, L, N).
std::vector<Complex> box_pairing(int d, double length, int cutoff, const TorusBox& box);

struct NoiseCheckReport {
    double horizon = 0.0;
    std::vector<double> empirical_variance;   ///< per box
    std::vector<double> variance_stderr;      ///< per box
    std::vector<double> projected_variance;   ///< T sum_k |<e_k, 1_A>|^2, the law of P_N xi
    std::vector<double> continuum_variance;   ///< T |A|
    double correlation_01 = 0.0;              ///< empirical correlation of boxes 0 and 1 (if two)
    double projected_covariance_01 = 0.0;
    std::size_t samples = 0;
};

/// Accumulates <xi_N, 1_{[0,T] x A}> from the same per-step noise increments
/// the stepper uses and compares its variance with T |A|.
NoiseCheckReport noise_coefficient_check(int d, double length, int cutoff, double dt, double horizon,
                                         const std::vector<TorusBox>& boxes, std::size_t samples,
                                         std::uint64_t seed, unsigned threads = 1);

}  // namespace metastab
