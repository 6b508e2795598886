#include <doctest.h>

#include <cmath>

#include "metastab/determinants.hpp"
#include "metastab/errors.hpp"
#include "metastab/potentials.hpp"
#include "metastab/rng.hpp"
#include "metastab/spde.hpp"
#include "metastab/stats.hpp"

using namespace metastab;

namespace {

SpdeRun base_run(int d, double L, int N, double eps, double dt) {
    SpdeRun run;
    run.field0 = SpectralField::constant(d, L, N, -1.0);
    run.epsilon = eps;
    run.dt = dt;
    return run;
}

SpectralField field_from_function(double L, int N, const std::function<double(double)>& f) {
    const int m = 4 * (2 * N + 1);
    std::vector<double> v(m);
    for (int j = 0; j < m; ++j) v[j] = f(j * L / m);
    return SpectralField::from_grid(1, L, N, m, v);
}

}  // namespace

TEST_CASE("spectral field transforms") {
    const double L = 2.0;
    const auto f = field_from_function(L, 6, [&](double x) { return 0.1 + 0.3 * std::cos(2 * M_PI * x / L); });
    CHECK(f.mean() == doctest::Approx(0.1));
    CHECK(std::abs(f.at(1)) == doctest::Approx(0.15 * std::sqrt(L)));
    CHECK(f.symmetry_defect() < 1e-15);
    double imag = 1.0;
    const auto g = f.to_grid(32, &imag);
    CHECK(imag < 1e-14);
    CHECK(g[0] == doctest::Approx(0.4));
    // Cube projection is exact: cos^3 = (3 cos + cos 3x) / 4.
    const auto c = field_from_function(L, 4, [&](double x) { return std::cos(2 * M_PI * x / L); });
    const auto cube = projected_cube(c);
    CHECK(std::abs(cube.at(1)) == doctest::Approx(0.375 * std::sqrt(L)).epsilon(1e-12));
    CHECK(std::abs(cube.at(3)) == doctest::Approx(0.125 * std::sqrt(L)).epsilon(1e-12));
    CHECK(std::abs(cube.at(2)) < 1e-14);
    CHECK(quartic_integral(c) == doctest::Approx(0.375 * L).epsilon(1e-12));
}

TEST_CASE("hs norm") {
    const double L = 2.0;
    for (int d : {1, 2}) {
        const auto c = SpectralField::constant(d, L, 3, -0.7);
        CHECK(hs_norm(c, -0.5) == doctest::Approx(0.7 * std::pow(L, d / 2.0)));
    }
    const auto f = field_from_function(L, 4, [&](double x) { return 1 + std::sin(2 * M_PI * x / L); });
    CHECK(hs_norm(f, 0.0) == doctest::Approx(std::sqrt(f.l2_norm_squared())));
    CHECK(hs_norm(f, -1.0) < hs_norm(f, -0.5));
    CHECK(hs_norm(f, -0.5) < hs_norm(f, 0.0));
}

TEST_CASE("minimum is a fixed point of the noiseless stepper") {
    for (int d : {1, 2}) {
        auto run = base_run(d, 2.0, 8, 0.0, 1e-2);
        SpdeStepper stepper(run);
        auto phi = run.field0;
        std::vector<double> g(phi.mode_count(), 0.0);
        for (int i = 0; i < 100; ++i) stepper.step(phi, g);
        CHECK((phi - run.field0).l2_norm_squared() < 1e-28);
    }
}

TEST_CASE("noiseless dynamics descends the energy") {
    const double L = 2.0;
    auto run = base_run(1, L, 8, 0.0, 1e-2);
    run.field0 = field_from_function(L, 8, [&](double x) { return 0.3 * std::cos(2 * M_PI * x / L) + 0.1; });
    AllenCahnEnergy e{1, L, 8, std::nullopt, 1};
    const auto tr = simulate_spde(run, 1500);
    for (std::size_t i = 1; i < tr.fields.size(); ++i) {
        CHECK(ac_energy(e, tr.fields[i]) <= ac_energy(e, tr.fields[i - 1]) + 1e-14);
    }
    CHECK(tr.fields.back().mean() == doctest::Approx(1.0).epsilon(1e-6));

    // Random initial fields in 1D and 2D.
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 1 + trial % 2;
        auto r = base_run(d, L, 6, 0.0, 1e-2);
        GaussianStream g(100 + trial, 0);
        for (auto& c : r.field0.coeffs()) c = {0.1 * g(), 0.1 * g()};
        r.field0.symmetrize();
        AllenCahnEnergy ed{d, L, 6, std::nullopt, 1};
        const auto t = simulate_spde(r, 200);
        bool monotone = true;
        for (std::size_t i = 1; i < t.fields.size(); ++i) {
            monotone = monotone && ac_energy(ed, t.fields[i]) <= ac_energy(ed, t.fields[i - 1]) + 1e-12;
        }
        CHECK(monotone);
    }
}

TEST_CASE("noiseless stepper converges at first order in dt") {
    const double L = 2.0;
    auto make = [&](double dt) {
        auto run = base_run(1, L, 8, 0.0, dt);
        run.field0 = field_from_function(L, 8, [&](double x) { return 0.3 * std::cos(2 * M_PI * x / L) + 0.1; });
        return simulate_spde(run, static_cast<std::size_t>(std::lround(1.0 / dt))).fields.back();
    };
    const auto ref = make(1e-5);
    const double e1 = std::sqrt((make(2e-3) - ref).l2_norm_squared());
    const double e2 = std::sqrt((make(1e-3) - ref).l2_norm_squared());
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("linear modes have the OU stationary variance") {
    const double L = 2.0, eps = 0.3, dt = 1e-3;
    auto run = base_run(1, L, 4, eps, dt);
    run.include_cubic = false;
    run.field0 = SpectralField(1, L, 4);
    // Time average of |c_k|^2 along one long path after burn-in.
    const auto tr = simulate_spde(run, 200000, 10, 1);
    for (int k : {1, 2}) {
        const double nu = std::pow(2 * M_PI * k / L, 2) - 1;
        const double discrete = eps / nu / (1 + dt * nu / 2);
        std::vector<double> xs;
        for (std::size_t i = 1000; i < tr.fields.size(); ++i) xs.push_back(std::norm(tr.fields[i].at(k)));
        // Block means remove most of the autocorrelation (relaxation time 1/nu).
        std::vector<double> blocks;
        const std::size_t b = 200;
        for (std::size_t i = 0; i + b <= xs.size(); i += b) {
            double s = 0;
            for (std::size_t j = 0; j < b; ++j) s += xs[i + j];
            blocks.push_back(s / b);
        }
        const auto s = stats::summarize(blocks);
        CHECK(std::abs(s.mean - discrete) < 3 * s.stderr_mean);
        CHECK(s.mean == doctest::Approx(eps / nu).epsilon(0.1));
    }
}

TEST_CASE("stepper keeps the field real") {
    for (int d : {1, 2}) {
        auto run = base_run(d, 2.0, d == 1 ? 16 : 6, 0.3, 1e-3);
        run.renormalize = d == 2;
        const auto tr = simulate_spde(run, 10000, 10000, 3);
        double imag = 1.0;
        tr.fields.back().to_grid(tr.fields.back().dealiased_grid(), &imag);
        CHECK(imag < 1e-10);
        CHECK(tr.fields.back().symmetry_defect() == 0.0);
    }
}

TEST_CASE("conjugate symmetric noise") {
    std::vector<double> g{1.0, 2.0, 3.0, 4.0, 5.0};
    std::vector<Complex> eta(5);
    conjugate_symmetric_noise(g, eta);
    CHECK(eta[2] == Complex{3.0, 0.0});
    CHECK(eta[4] == std::conj(eta[0]));
    CHECK(eta[3] == std::conj(eta[1]));
    CHECK(std::norm(eta[0]) == doctest::Approx((1.0 + 25.0) / 2));
}

TEST_CASE("noise coefficients have the white-noise covariance") {
    const double L = 2.0;
    SUBCASE("full torus in 1d") {
        TorusBox full;
        full.hi[0] = L;
        const auto r = noise_coefficient_check(1, L, 8, 1e-2, 1.0, {full}, 4000, 7, 2);
        CHECK(r.continuum_variance[0] == doctest::Approx(2.0));
        CHECK(r.projected_variance[0] == doctest::Approx(2.0));
        CHECK(std::abs(r.empirical_variance[0] - 2.0) < 3 * r.variance_stderr[0]);
    }
    SUBCASE("disjoint boxes are uncorrelated in the continuum limit") {
        TorusBox a, b;
        a.lo[0] = 0.0;
        a.hi[0] = 0.5;
        b.lo[0] = 1.0;
        b.hi[0] = 1.5;
        const auto r = noise_coefficient_check(1, L, 64, 1e-2, 1.0, {a, b}, 4000, 8, 2);
        for (int i = 0; i < 2; ++i) {
            CHECK(std::abs(r.empirical_variance[i] - r.projected_variance[i]) < 3 * r.variance_stderr[i]);
            CHECK(r.projected_variance[i] == doctest::Approx(0.5).epsilon(0.02));
        }
        CHECK(std::abs(r.correlation_01 - r.projected_covariance_01 / 0.5) < 3 / std::sqrt(4000.0));
        CHECK(std::abs(r.correlation_01) < 3 / std::sqrt(4000.0));
    }
    SUBCASE("variance is linear in time") {
        TorusBox full;
        full.hi[0] = L;
        full.hi[1] = L;
        std::vector<double> ts, vs;
        for (double t : {0.5, 1.0, 2.0}) {
            const auto r = noise_coefficient_check(2, L, 4, 1e-2, t, {full}, 3000, 9, 2);
            ts.push_back(t);
            vs.push_back(r.empirical_variance[0] / (L * L));
        }
        CHECK(stats::linear_fit(ts, vs).slope == doctest::Approx(1.0).epsilon(0.05));
    }
}

TEST_CASE("hitting times of the spde") {
    auto run = base_run(1, 2.0, 8, 0.4, 1e-3);
    HittingTarget target;
    target.value = -1.0;
    const auto zero = sample_spde_hitting_times(run, target, 3);
    CHECK(zero.mean == 0.0);
    target.value = 1.0;
    const auto a = sample_spde_hitting_times(run, target, 6, 1);
    const auto b = sample_spde_hitting_times(run, target, 6, 3);
    CHECK(a.all_times == b.all_times);
    CHECK(a.mean > 0.0);
    run.t_max = 0.01;
    CHECK_THROWS_AS(sample_spde_hitting_times(run, target, 2), AllCensored);
    target.norm = HittingNorm::sobolev;
    target.sobolev_s = 0.5;
    CHECK_THROWS(sample_spde_hitting_times(run, target, 2));
}

TEST_CASE("validation of spde runs") {
    auto run = base_run(1, 2.0, 8, 0.4, 1.5);
    CHECK_THROWS(run.validate());
    run.dt = 1e-3;
    run.epsilon = -1.0;
    CHECK_THROWS(run.validate());
    auto blow = base_run(1, 2.0, 4, 0.0, 0.9);
    blow.field0 = SpectralField::constant(1, 2.0, 4, 1e3);
    CHECK_THROWS_AS(simulate_spde(blow, 50), NonFinite);
}

TEST_CASE("counterterm keeps the 2d minimum in place") {
    const double L = 2.0, eps = 0.1, dt = 1e-3, t_burn = 2.0;
    auto time_average = [&](int N, bool renormalize) {
        double total = 0.0;
        const int replicas = 4;
        for (int r = 0; r < replicas; ++r) {
            auto run = base_run(2, L, N, eps, dt);
            run.renormalize = renormalize;
            const auto tr = simulate_spde(run, static_cast<std::size_t>(t_burn / dt), 10, r);
            double s = 0.0;
            for (const auto& f : tr.fields) s += f.mean();
            total += s / tr.fields.size();
        }
        return total / replicas;
    };
    std::vector<double> with, without;
    for (int N : {8, 16, 32}) {
        with.push_back(time_average(N, true));
        without.push_back(time_average(N, false));
        CHECK(with.back() >= -1.2);
        CHECK(with.back() <= -0.8);
    }
    CHECK(std::abs(with[2] - with[0]) < std::abs(without[2] - without[0]));
    CHECK(std::abs(with[1] - with[0]) < std::abs(without[1] - without[0]));
}

TEST_CASE("halving dt moves spde hitting means by less than their stderr") {
    auto run = base_run(1, 2.0, 8, 0.5, 2e-3);
    run.seed = 21;
    HittingTarget target;
    const auto coarse = sample_spde_hitting_times(run, target, 100);
    run.dt = 1e-3;
    const auto fine = sample_spde_hitting_times(run, target, 100);
    const double se = std::hypot(coarse.stderr_mean, fine.stderr_mean);
    CHECK(std::abs(coarse.mean - fine.mean) < se);
}
