#include "metastab/sde.hpp"

#include <cmath>
#include <numbers>

#include "metastab/parallel.hpp"
#include "metastab/rng.hpp"
#include "metastab/stats.hpp"

namespace metastab {

void SdeRun::validate() const {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("epsilon must be >= 0");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
    if (x0.size() != potential.dim()) throw ShapeMismatch("x0 dimension differs from potential dimension");
}

Vector em_step(const SdeRun& run, const Vector& x, const Vector& gaussian) {
    if (gaussian.size() != x.size()) throw ShapeMismatch("noise dimension differs from state dimension");
    Vector next = x - run.potential.gradient(x) * run.dt;
    if (run.epsilon > 0.0) next += std::sqrt(2.0 * run.epsilon * run.dt) * gaussian;
    if (!next.allFinite()) throw NonFinite("Euler-Maruyama step overflowed; dt is too large");
    return next;
}

double ou_density(double x, double y, double t, double epsilon) {
    if (!(t > 0.0) || !(epsilon > 0.0)) throw InvalidArgument("ou_density needs t > 0 and eps > 0");
    const double var = epsilon * -std::expm1(-2.0 * t);
    const double mean = x * std::exp(-t);
    const double d = y - mean;
    return std::exp(-d * d / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
}

double ou_invariant_density(double y, double epsilon) {
    return std::exp(-y * y / (2.0 * epsilon)) / std::sqrt(2.0 * std::numbers::pi * epsilon);
}

double detailed_balance_residual(double t, double epsilon, std::span<const double> grid) {
    double worst = 0.0;
    for (double x : grid) {
        for (double y : grid) {
            const double forward = ou_invariant_density(x, epsilon) * ou_density(x, y, t, epsilon);
            const double backward = ou_invariant_density(y, epsilon) * ou_density(y, x, t, epsilon);
            worst = std::max(worst, std::abs(forward - backward));
        }
    }
    return worst;
}

void HittingTimeBatch::recompute() {
    const auto s = stats::summarize(samples);
    mean = s.mean;
    stderr_mean = s.stderr_mean;
}

namespace {

/// Hitting time of one replica, or a negative value when censored.
double hitting_time_one(const SdeRun& run, const Vector& center, double delta, std::uint64_t stream) {
    GaussianStream rng(run.seed, stream);
    const double t_max = run.horizon();
    const auto max_steps = static_cast<std::uint64_t>(std::floor(t_max / run.dt + 1e-9));
    Vector x = run.x0;
    Vector noise(x.size());
    if ((x - center).norm() < delta) return 0.0;
    for (std::uint64_t step = 1; step <= max_steps; ++step) {
        rng.fill(noise);
        x = em_step(run, x, noise);
        if ((x - center).norm() < delta) return static_cast<double>(step) * run.dt;
    }
    return -1.0;
}

}  // namespace

HittingTimeBatch sample_hitting_times(const SdeRun& run, const Vector& target_center, double delta,
                                      std::size_t n, unsigned threads) {
    run.validate();
    if (!(delta > 0.0)) throw InvalidArgument("target radius must be positive");
    if (n == 0) throw InvalidArgument("need at least one replica");
    if (target_center.size() != run.potential.dim()) throw ShapeMismatch("target dimension mismatch");

    std::vector<double> raw(n);
    parallel_for(n, threads, [&](std::size_t i) { raw[i] = hitting_time_one(run, target_center, delta, i); });

    HittingTimeBatch batch;
    batch.n_attempted = n;
    batch.seed_base = run.seed;
    batch.all_times.resize(n);
    batch.censored.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool cens = raw[i] < 0.0;
        batch.censored[i] = cens;
        batch.all_times[i] = cens ? run.horizon() : raw[i];
        if (cens) {
            ++batch.n_censored;
        } else {
            batch.samples.push_back(raw[i]);
        }
    }
    if (batch.samples.empty()) throw AllCensored("every replica was censored at t_max");
    batch.recompute();
    return batch;
}

std::vector<Vector> sample_endpoints(const SdeRun& run, double t_end, std::size_t n, unsigned threads) {
    run.validate();
    const auto steps = static_cast<std::uint64_t>(std::llround(t_end / run.dt));
    std::vector<Vector> out(n);
    parallel_for(n, threads, [&](std::size_t i) {
        GaussianStream rng(run.seed, i);
        Vector x = run.x0;
        Vector noise(x.size());
        for (std::uint64_t s = 0; s < steps; ++s) {
            rng.fill(noise);
            x = em_step(run, x, noise);
        }
        out[i] = x;
    });
    return out;
}

Trajectory simulate_trajectory(const SdeRun& run, std::size_t n_steps, std::size_t stride, std::uint64_t stream) {
    run.validate();
    if (stride == 0) throw InvalidArgument("stride must be positive");
    GaussianStream rng(run.seed, stream);
    Trajectory tr;
    Vector x = run.x0;
    Vector noise = Vector::Zero(x.size());
    tr.times.push_back(0.0);
    tr.points.push_back(x);
    for (std::size_t s = 1; s <= n_steps; ++s) {
        if (run.epsilon > 0.0) rng.fill(noise);
        x = em_step(run, x, noise);
        if (s % stride == 0) {
            tr.times.push_back(static_cast<double>(s) * run.dt);
            tr.points.push_back(x);
        }
    }
    return tr;
}

}  // namespace metastab
