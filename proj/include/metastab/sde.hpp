#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "metastab/errors.hpp"
#include "metastab/potentials.hpp"

namespace metastab {

/// Overdamped Langevin dynamics dx = -grad V(x) dt + sqrt(2 eps) dW,
/// discretized by Euler-Maruyama.
struct SdeRun {
    Potential potential;
    double epsilon = 0.1;
    double dt = 1e-3;
    Vector x0;
    std::uint64_t seed = 0;
    /// Censoring horizon; <= 0 selects the default 1e6 * dt.
    double t_max = 0.0;

    double horizon() const { return t_max > 0.0 ? t_max : 1e6 * dt; }
    void validate() const;
};

/// x - grad V(x) dt + sqrt(2 eps dt) gaussian. Throws NonFinite on overflow.
Vector em_step(const SdeRun& run, const Vector& x, const Vector& gaussian);

/// Exact transition density of the Ornstein-Uhlenbeck process (V = x^2/2).
double ou_density(double x, double y, double t, double epsilon);

/// Invariant density of the Ornstein-Uhlenbeck process, N(0, eps).
double ou_invariant_density(double y, double epsilon);

/// max over grid pairs of |pi(x) p_t(x,y) - pi(y) p_t(y,x)|.
double detailed_balance_residual(double t, double epsilon, std::span<const double> grid);

struct HittingTimeBatch {
    std::vector<double> samples;   ///< uncensored hitting times, replica order
    std::vector<double> all_times; ///< every replica; censored ones hold t_max
    std::vector<bool> censored;
    std::size_t n_attempted = 0;
    std::size_t n_censored = 0;
    double mean = 0.0;
    double stderr_mean = 0.0;
    std::uint64_t seed_base = 0;

    /// Recomputes mean and stderr from `samples`.
    void recompute();
};

/// Runs n replicas; replica i draws from Philox stream (seed, i) and records
/// the first step at which |x - center| < delta (Euclidean), or t_max.
/// Throws AllCensored when no replica hits before t_max.
HittingTimeBatch sample_hitting_times(const SdeRun& run, const Vector& target_center, double delta,
                                      std::size_t n, unsigned threads = 1);

/// Endpoint x_T of n independent replicas (streams (seed, i)).
std::vector<Vector> sample_endpoints(const SdeRun& run, double t_end, std::size_t n, unsigned threads = 1);

/// One trajectory from x0 recorded every `stride` steps (including t = 0).
struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> points;
};
Trajectory simulate_trajectory(const SdeRun& run, std::size_t n_steps, std::size_t stride = 1,
                               std::uint64_t stream = 0);

}  // namespace metastab
