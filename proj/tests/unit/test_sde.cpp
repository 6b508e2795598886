#include <doctest.h>

#include <cmath>

#include "metastab/errors.hpp"
#include "metastab/sde.hpp"
#include "metastab/stats.hpp"

using namespace metastab;

namespace {

SdeRun ou_run(double eps, double dt, double x0, std::uint64_t seed = 0) {
    return SdeRun{quadratic(Vector::Ones(1)), eps, dt, Vector::Constant(1, x0), seed, 0.0};
}

// Fokker-Planck residual d_t p - d_y(y p) - eps d_yy p of the exact OU density,
// all derivatives by second-order central differences with step h.
double fp_residual(double x, double y, double t, double eps, double h) {
    auto p = [&](double yy, double tt) { return ou_density(x, yy, tt, eps); };
    const double dt = (p(y, t + h) - p(y, t - h)) / (2 * h);
    const double dflux = ((y + h) * p(y + h, t) - (y - h) * p(y - h, t)) / (2 * h);
    const double lap = (p(y + h, t) - 2 * p(y, t) + p(y - h, t)) / (h * h);
    return dt - dflux - eps * lap;
}

}  // namespace

TEST_CASE("ou density normalizes and matches its moments") {
    const double eps = 0.3, t = 0.8, x = 0.5;
    double mass = 0, mean = 0;
    const double h = 1e-3;
    for (double y = -6; y <= 6; y += h) {
        mass += ou_density(x, y, t, eps) * h;
        mean += y * ou_density(x, y, t, eps) * h;
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(mean == doctest::Approx(x * std::exp(-t)).epsilon(1e-8));
    CHECK(ou_density(x, 0.1, 50.0, eps) == doctest::Approx(ou_invariant_density(0.1, eps)).epsilon(1e-12));
    CHECK(std::isfinite(ou_density(x, 0.1, 1e-9, eps)));
}

TEST_CASE("detailed balance holds to rounding") {
    std::vector<double> grid;
    for (int i = 0; i < 41; ++i) grid.push_back(-2.0 + 0.1 * i);
    CHECK(detailed_balance_residual(1.0, 0.1, grid) < 1e-12);
}

TEST_CASE("fokker-planck residual converges at second order") {
    const double r1 = std::abs(fp_residual(0.3, 0.2, 0.5, 0.2, 1e-2));
    const double r2 = std::abs(fp_residual(0.3, 0.2, 0.5, 0.2, 5e-3));
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("euler-maruyama OU moments and histogram") {
    const double eps = 0.1, t = 1.0;
    const auto run = ou_run(eps, 1e-3, 1.0, 3);
    const auto ends = sample_endpoints(run, t, 20000, 2);
    std::vector<double> xs;
    for (const auto& v : ends) xs.push_back(v(0));
    const auto s = stats::summarize(xs);
    const double m = std::exp(-t), var = eps * (1 - std::exp(-2 * t));
    CHECK(std::abs(s.mean - m) < 3 * s.stderr_mean);
    CHECK(std::abs(s.variance - var) < 3 * s.stderr_variance);

    // Histogram over 20 equiprobable bins of the exact law.
    const int bins = 20;
    std::vector<double> counts(bins, 0.0), probs(bins, 1.0);
    for (double x : xs) {
        const double u = stats::normal_cdf((x - m) / std::sqrt(var));
        counts[std::min(bins - 1, static_cast<int>(u * bins))] += 1;
    }
    CHECK(stats::chi_square_test(counts, probs, 0.001).passes);
}

TEST_CASE("weak error shrinks when dt is halved") {
    // E[x_T^2] under EM has an O(dt) bias; compare exact discrete recursions.
    const double eps = 0.5, t = 1.0;
    auto em_second_moment = [&](double dt) {
        double m2 = 1.0;
        const int n = static_cast<int>(std::lround(t / dt));
        for (int i = 0; i < n; ++i) m2 = (1 - dt) * (1 - dt) * m2 + 2 * eps * dt;
        return m2;
    };
    const double exact = std::exp(-2 * t) + eps * (1 - std::exp(-2 * t));
    const double e1 = std::abs(em_second_moment(0.02) - exact), e2 = std::abs(em_second_moment(0.01) - exact);
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.05));
    // Monte Carlo at the finer step agrees with the discrete recursion.
    const auto ends = sample_endpoints(ou_run(eps, 0.01, 1.0, 9), t, 20000);
    std::vector<double> sq;
    for (const auto& v : ends) sq.push_back(v(0) * v(0));
    const auto s = stats::summarize(sq);
    CHECK(std::abs(s.mean - em_second_moment(0.01)) < 4 * s.stderr_mean);
}

TEST_CASE("hitting times are reproducible across thread counts") {
    const auto run = SdeRun{quartic_double_well(), 0.3, 1e-3, Vector::Constant(1, -1.0), 5, 0.0};
    const auto a = sample_hitting_times(run, Vector::Constant(1, 1.0), 0.2, 40, 1);
    const auto b = sample_hitting_times(run, Vector::Constant(1, 1.0), 0.2, 40, 4);
    CHECK(a.all_times == b.all_times);
    CHECK(a.mean == b.mean);
    CHECK(a.n_censored == 0);
}

TEST_CASE("censoring and validation") {
    auto run = SdeRun{quartic_double_well(), 0.05, 1e-3, Vector::Constant(1, -1.0), 1, 0.5};
    CHECK_THROWS_AS(sample_hitting_times(run, Vector::Constant(1, 1.0), 0.2, 4), AllCensored);
    run.epsilon = -1;
    CHECK_THROWS(run.validate());
    // Started inside the target: zero hitting time.
    run.epsilon = 0.1;
    run.x0 = Vector::Constant(1, 1.0);
    const auto b = sample_hitting_times(run, Vector::Constant(1, 1.0), 0.2, 3);
    CHECK(b.mean == 0.0);
}

TEST_CASE("em step blows up to NonFinite") {
    Potential steep(
        1, [](const Vector& x) { return std::pow(x(0), 8); },
        [](const Vector& x) { return Vector::Constant(1, 8 * std::pow(x(0), 7)); });
    SdeRun run{steep, 0.1, 0.5, Vector::Constant(1, 10.0), 0, 0.0};
    Vector x = run.x0;
    CHECK_THROWS_AS(
        [&] {
            for (int i = 0; i < 10; ++i) x = em_step(run, x, Vector::Zero(1));
        }(),
        NonFinite);
}
