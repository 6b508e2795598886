#include "metastab/spde.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <numbers>

#include "metastab/determinants.hpp"
#include "metastab/errors.hpp"
#include "metastab/fft.hpp"
#include "metastab/parallel.hpp"
#include "metastab/rng.hpp"
#include "metastab/stats.hpp"

namespace metastab {

using detail::FftPlan;

void SpdeRun::validate() const {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("epsilon must be >= 0");
    if (!(dt > 0.0) || !(dt < 1.0)) throw InvalidArgument("dt must lie in (0, 1)");
    if (grid_factor < 1) throw InvalidArgument("grid factor must be >= 1");
}

namespace {

void warn_if_unrenormalized(const SpdeRun& run) {
    static std::atomic<bool> warned{false};
    if (run.field0.dim() == 2 && !run.renormalize && run.include_cubic && run.epsilon > 0.0 &&
        !warned.exchange(true)) {
        std::clog << "warning: 2D Allen-Cahn without the Wick counterterm has no cutoff-independent limit\n";
    }
}

int wrap(int k, int m) { return k >= 0 ? k : k + m; }

}  // namespace

void conjugate_symmetric_noise(std::span<const double> gaussians, std::span<Complex> out) {
    if (gaussians.size() != out.size() || out.size() % 2 == 0) {
        throw ShapeMismatch("noise buffers must match the (odd) mode count");
    }
    const std::size_t n = out.size();
    const double r = 1.0 / std::numbers::sqrt2;
    for (std::size_t i = 0; i < n / 2; ++i) {
        const Complex eta{gaussians[i] * r, -gaussians[n - 1 - i] * r};
        out[i] = eta;
        out[n - 1 - i] = std::conj(eta);
    }
    out[n / 2] = Complex{gaussians[n / 2], 0.0};
}

struct SpdeStepper::Impl {
    int d = 1;
    double length = 1.0;
    int cutoff = 0;
    int m = 0;
    double epsilon = 0.0;
    double dt = 0.0;
    double noise_scale = 0.0;
    double counterterm = 0.0;
    double counterterm_rate = 0.0;
    bool cubic = true;
    std::shared_ptr<const FftPlan> forward, backward;
    std::vector<double> denom;         // 1 - dt mu_k per mode
    std::vector<std::size_t> slot;     // grid-buffer index of each mode
    std::vector<Complex> buf, out;
    std::vector<double> grid;
    std::vector<Complex> noise;
    double to_grid_scale = 1.0, from_grid_scale = 1.0;

    void fill_grid(const SpectralField& phi) {
        std::fill(buf.begin(), buf.end(), Complex{0.0, 0.0});
        const auto c = phi.coeffs();
        for (std::size_t i = 0; i < c.size(); ++i) buf[slot[i]] = c[i];
        backward->execute(buf, out);
        for (std::size_t j = 0; j < grid.size(); ++j) grid[j] = out[j].real() * to_grid_scale;
    }
};

SpdeStepper::SpdeStepper(const SpdeRun& run) : impl_(std::make_unique<Impl>()) {
    run.validate();
    auto& s = *impl_;
    const auto& f = run.field0;
    s.d = f.dim();
    s.length = f.length();
    s.cutoff = f.cutoff();
    s.m = f.dealiased_grid(run.grid_factor);
    s.epsilon = run.epsilon;
    s.dt = run.dt;
    s.noise_scale = std::sqrt(2.0 * run.epsilon * run.dt);
    s.cubic = run.include_cubic;
    if (run.renormalize) {
        s.counterterm = counterterm_trace(s.length, s.cutoff, s.d);
        s.counterterm_rate = 3.0 * run.epsilon * s.counterterm;
    }
    s.forward = FftPlan::get(s.d, s.m, FftPlan::Direction::forward);
    s.backward = FftPlan::get(s.d, s.m, FftPlan::Direction::backward);
    const std::size_t modes = f.mode_count();
    const std::size_t total = static_cast<std::size_t>(s.forward->size());
    s.denom.resize(modes);
    s.slot.resize(modes);
    for (std::size_t i = 0; i < modes; ++i) {
        const double mu = 1.0 - f.laplacian_eigenvalue(i);
        s.denom[i] = 1.0 - s.dt * mu;
        int k1 = 0, k2 = 0;
        f.wavevector(i, k1, k2);
        s.slot[i] = s.d == 1 ? static_cast<std::size_t>(wrap(k1, s.m))
                             : static_cast<std::size_t>(wrap(k1, s.m)) * s.m + static_cast<std::size_t>(wrap(k2, s.m));
    }
    s.buf.resize(total);
    s.out.resize(total);
    s.grid.resize(total);
    s.noise.resize(modes);
    s.to_grid_scale = std::pow(s.length, -0.5 * s.d);
    s.from_grid_scale = std::pow(s.length, 0.5 * s.d) / static_cast<double>(total);
    s.fill_grid(run.field0);
}

SpdeStepper::~SpdeStepper() = default;
SpdeStepper::SpdeStepper(SpdeStepper&&) noexcept = default;
SpdeStepper& SpdeStepper::operator=(SpdeStepper&&) noexcept = default;

void SpdeStepper::load(const SpectralField& phi) {
    auto& s = *impl_;
    if (phi.dim() != s.d || phi.length() != s.length || phi.cutoff() != s.cutoff) {
        throw ShapeMismatch("field shape does not match the stepper");
    }
    s.fill_grid(phi);
}

std::span<const double> SpdeStepper::grid_values() const { return impl_->grid; }
double SpdeStepper::counterterm() const { return impl_->counterterm; }
int SpdeStepper::grid_points() const { return impl_->m; }

void SpdeStepper::step(SpectralField& phi, std::span<const double> gaussians) {
    auto& s = *impl_;
    auto c = phi.coeffs();
    if (c.size() != s.denom.size()) throw ShapeMismatch("field shape does not match the stepper");
    if (gaussians.size() != c.size()) throw ShapeMismatch("need one normal per mode");

    // P_N(phi^3) from the cached grid values of the current field.
    if (s.cubic) {
        for (std::size_t j = 0; j < s.grid.size(); ++j) {
            const double v = s.grid[j];
            s.buf[j] = Complex{v * v * v, 0.0};
        }
        s.forward->execute(s.buf, s.out);
    }
    conjugate_symmetric_noise(gaussians, s.noise);
    const std::size_t n = c.size();
    for (std::size_t i = 0; i < n; ++i) {
        Complex drift = s.counterterm_rate * c[i];
        if (s.cubic) drift -= s.out[s.slot[i]] * s.from_grid_scale;
        c[i] = (c[i] + s.dt * drift + s.noise_scale * s.noise[i]) / s.denom[i];
    }
    // Restore exact conjugate symmetry lost to rounding in the forward FFT.
    for (std::size_t i = 0; i < n / 2; ++i) {
        const Complex avg = 0.5 * (c[i] + std::conj(c[n - 1 - i]));
        c[i] = avg;
        c[n - 1 - i] = std::conj(avg);
    }
    c[n / 2] = Complex{c[n / 2].real(), 0.0};
    s.fill_grid(phi);
    for (double v : s.grid) {
        if (!std::isfinite(v)) throw NonFinite("Allen-Cahn field blew up; dt is too large");
    }
}

SpectralField spde_step(const SpdeRun& run, const SpectralField& phi, std::span<const double> gaussians) {
    SpdeRun local = run;
    local.field0 = phi;
    SpdeStepper stepper(local);
    SpectralField next = phi;
    stepper.step(next, gaussians);
    return next;
}

SpdeTrajectory simulate_spde(const SpdeRun& run, std::size_t n_steps, std::size_t stride, std::uint64_t stream) {
    if (stride == 0) throw InvalidArgument("stride must be positive");
    warn_if_unrenormalized(run);
    SpdeStepper stepper(run);
    GaussianStream rng(run.seed, stream);
    SpectralField phi = run.field0;
    std::vector<double> g(phi.mode_count(), 0.0);
    SpdeTrajectory tr;
    tr.times.push_back(0.0);
    tr.fields.push_back(phi);
    for (std::size_t s = 1; s <= n_steps; ++s) {
        if (run.epsilon > 0.0) rng.fill(g);
        stepper.step(phi, g);
        if (s % stride == 0) {
            tr.times.push_back(static_cast<double>(s) * run.dt);
            tr.fields.push_back(phi);
        }
    }
    return tr;
}

double target_distance(const SpectralField& phi, const HittingTarget& target, std::span<const double> grid_values) {
    if (target.norm == HittingNorm::linf) {
        double worst = 0.0;
        for (double v : grid_values) worst = std::max(worst, std::abs(v - target.value));
        return worst;
    }
    SpectralField diff = phi;
    diff.at(0, 0) -= target.value * std::pow(phi.length(), 0.5 * phi.dim());
    return hs_norm(diff, target.sobolev_s);
}

namespace {

double spde_hitting_one(const SpdeRun& run, const HittingTarget& target, std::uint64_t stream) {
    SpdeStepper stepper(run);
    GaussianStream rng(run.seed, stream);
    SpectralField phi = run.field0;
    std::vector<double> g(phi.mode_count());
    if (target_distance(phi, target, stepper.grid_values()) < target.delta) return 0.0;
    const auto max_steps = static_cast<std::uint64_t>(std::floor(run.horizon() / run.dt + 1e-9));
    for (std::uint64_t s = 1; s <= max_steps; ++s) {
        rng.fill(g);
        stepper.step(phi, g);
        if (target_distance(phi, target, stepper.grid_values()) < target.delta) {
            return static_cast<double>(s) * run.dt;
        }
    }
    return -1.0;
}

}  // namespace

HittingTimeBatch sample_spde_hitting_times(const SpdeRun& run, const HittingTarget& target, std::size_t n,
                                           unsigned threads) {
    run.validate();
    if (!(target.delta > 0.0)) throw InvalidArgument("target radius must be positive");
    if (target.norm == HittingNorm::sobolev && !(target.sobolev_s < 0.0)) {
        throw InvalidArgument("Sobolev hitting norm requires s < 0");
    }
    if (n == 0) throw InvalidArgument("need at least one replica");
    warn_if_unrenormalized(run);

    std::vector<double> raw(n);
    parallel_for(n, threads, [&](std::size_t i) { raw[i] = spde_hitting_one(run, target, i); });

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
    if (batch.samples.empty()) throw AllCensored("every SPDE replica was censored at t_max");
    batch.recompute();
    return batch;
}

double TorusBox::volume(int d) const {
    double v = 1.0;
    for (int a = 0; a < d; ++a) v *= hi[a] - lo[a];
    return v;
}

std::vector<Complex> box_pairing(int d, double length, int cutoff, const TorusBox& box) {
    const SpectralField shape(d, length, cutoff);
    auto axis = [&](int k, double lo, double hi) -> Complex {
        if (k == 0) return {hi - lo, 0.0};
        const double w = 2.0 * std::numbers::pi * k / length;
        const Complex i{0.0, 1.0};
        return (std::exp(i * w * hi) - std::exp(i * w * lo)) / (i * w);
    };
    std::vector<Complex> p(shape.mode_count());
    const double norm = std::pow(length, -0.5 * d);
    for (std::size_t idx = 0; idx < p.size(); ++idx) {
        int k1 = 0, k2 = 0;
        shape.wavevector(idx, k1, k2);
        Complex v = axis(k1, box.lo[0], box.hi[0]);
        if (d == 2) v *= axis(k2, box.lo[1], box.hi[1]);
        p[idx] = norm * v;
    }
    return p;
}

NoiseCheckReport noise_coefficient_check(int d, double length, int cutoff, double dt, double horizon,
                                         const std::vector<TorusBox>& boxes, std::size_t samples,
                                         std::uint64_t seed, unsigned threads) {
    if (boxes.empty()) throw InvalidArgument("need at least one box");
    if (!(dt > 0.0) || !(horizon > 0.0) || samples < 2) throw InvalidArgument("invalid noise check parameters");
    const SpectralField shape(d, length, cutoff);
    const std::size_t modes = shape.mode_count();
    std::vector<std::vector<Complex>> pairing;
    for (const auto& b : boxes) pairing.push_back(box_pairing(d, length, cutoff, b));
    const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));

    std::vector<std::vector<double>> values(boxes.size(), std::vector<double>(samples));
    parallel_for(samples, threads, [&](std::size_t s) {
        GaussianStream rng(seed, s);
        std::vector<double> g(modes);
        std::vector<Complex> eta(modes);
        std::vector<Complex> brownian(modes, Complex{0.0, 0.0});
        const double sq = std::sqrt(dt);
        for (std::size_t step = 0; step < steps; ++step) {
            rng.fill(g);
            conjugate_symmetric_noise(g, eta);
            for (std::size_t k = 0; k < modes; ++k) brownian[k] += sq * eta[k];
        }
        for (std::size_t b = 0; b < boxes.size(); ++b) {
            Complex x{0.0, 0.0};
            for (std::size_t k = 0; k < modes; ++k) x += brownian[k] * pairing[b][k];
            values[b][s] = x.real();
        }
    });

    NoiseCheckReport r;
    r.horizon = static_cast<double>(steps) * dt;
    r.samples = samples;
    for (std::size_t b = 0; b < boxes.size(); ++b) {
        const auto sum = stats::summarize(values[b]);
        r.empirical_variance.push_back(sum.variance);
        r.variance_stderr.push_back(sum.stderr_variance);
        double proj = 0.0;
        for (const auto& p : pairing[b]) proj += std::norm(p);
        r.projected_variance.push_back(r.horizon * proj);
        r.continuum_variance.push_back(r.horizon * boxes[b].volume(d));
    }
    if (boxes.size() >= 2) {
        r.correlation_01 = stats::correlation(values[0], values[1]);
        Complex cov{0.0, 0.0};
        for (std::size_t k = 0; k < modes; ++k) cov += pairing[0][k] * std::conj(pairing[1][k]);
        r.projected_covariance_01 = r.horizon * cov.real();
    }
    return r;
}

}  // namespace metastab
