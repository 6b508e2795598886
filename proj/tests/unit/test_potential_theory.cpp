#include <doctest.h>

#include <cmath>

#include "metastab/errors.hpp"
#include "metastab/potential_theory.hpp"

using namespace metastab;

namespace {

Potential flat() { return quadratic(Vector::Zero(1)); }

// Reference mean hitting time of {b} from x for a reflecting left end a:
// w(x) = (1/eps) int_x^b e^{V(y)/eps} int_a^y e^{-V(z)/eps} dz dy, by composite
// Simpson quadrature on a fine grid.
double quadrature_w(const Potential& v, double eps, double a, double x, double b) {
    const int n = 20000;
    const double h = (b - a) / n;
    std::vector<double> inner(n + 1, 0.0);
    for (int i = 1; i <= n; ++i) {
        const double y0 = a + (i - 1) * h, y1 = a + i * h, ym = 0.5 * (y0 + y1);
        inner[i] = inner[i - 1] + h / 6 *
                                      (std::exp(-v.value(y0) / eps) + 4 * std::exp(-v.value(ym) / eps) +
                                       std::exp(-v.value(y1) / eps));
    }
    double outer = 0.0;
    for (int i = 0; i < n; ++i) {
        const double y0 = a + i * h;
        if (y0 + 0.5 * h < x) continue;
        const double ym = y0 + 0.5 * h;
        const double inner_m = 0.5 * (inner[i] + inner[i + 1]);
        outer += h * std::exp(v.value(ym) / eps) * inner_m;
    }
    return outer / eps;
}

}  // namespace

TEST_CASE("brownian poisson problem is exact") {
    // eps w'' = -1 on [0, 1], w'(0) = 0, w(1) = 0: w = (1 - x^2) / (2 eps).
    const Grid1D g(0.0, 1.0, 99);
    const double eps = 0.5;
    const auto w = solve_poisson(g, flat(), eps, Interval{1.0, 1.0});
    double err = 0.0;
    for (int i = 0; i < g.node_count(); ++i) {
        const double x = g.node(i);
        err = std::max(err, std::abs(w[i] - (1 - x * x) / (2 * eps)));
    }
    CHECK(err < 1e-2);
}

TEST_CASE("brownian committor is linear") {
    const Grid1D g(0.0, 1.0, 49);
    const auto c = solve_committor(g, flat(), 0.3, Interval{0.0, 0.0}, Interval{1.0, 1.0});
    for (int i = 0; i < g.node_count(); ++i) CHECK(c.values[i] == doctest::Approx(1.0 - g.node(i)).epsilon(1e-10));
    CHECK(capacity_dirichlet(g, flat(), 0.3, c) == doctest::Approx(0.3).epsilon(1e-10));
}

TEST_CASE("magic identity for brownian motion between the endpoints") {
    // Both sides equal 1/(2 eps) when A = {0}, B = {1}, V = 0.
    const Grid1D g(0.0, 1.0, 199);
    const double eps = 0.4;
    const auto m = magic_identity(g, flat(), eps, Interval{0.0, 0.0}, Interval{1.0, 1.0}, 0.0);
    CHECK(m.lhs == doctest::Approx(1 / (2 * eps)).epsilon(1e-4));
    CHECK(m.rhs == doctest::Approx(1 / (2 * eps)).epsilon(1e-4));
    CHECK(m.residual < 1e-4);
}

TEST_CASE("poisson solver matches quadrature for the quartic well") {
    const auto v = quartic_double_well();
    const double eps = 0.25;
    const Grid1D g(-2.0, 0.8, 2799);
    const auto w = solve_poisson(g, v, eps, Interval{0.8, 2.0});
    const double ref = quadrature_w(v, eps, -2.0, -1.0, 0.8);
    CHECK(interpolate(g, w, -1.0) == doctest::Approx(ref).epsilon(1e-4));
}

TEST_CASE("poisson solver converges at second order") {
    const auto v = quartic_double_well();
    const double eps = 0.3;
    auto value = [&](int m) {
        const Grid1D g(-2.0, 0.8, m);
        return interpolate(g, solve_poisson(g, v, eps, Interval{0.8, 2.0}), -1.0);
    };
    // m + 1 cells: 140, 280, 560; x = -1 is a node on each grid.
    const double a = value(139), b = value(279), c = value(559);
    CHECK((a - b) / (b - c) == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("committor obeys the maximum principle") {
    const auto v = quartic_double_well();
    const Grid1D g(-2.0, 2.0, 399);
    const auto c = solve_committor(g, v, 0.2, Interval{-1.05, -0.95}, Interval{0.8, 1.2});
    for (double h : c.values) {
        CHECK(h >= -1e-12);
        CHECK(h <= 1 + 1e-12);
    }
    // Monotone between the sets.
    for (int i = 1; i < g.node_count(); ++i) {
        const double x = g.node(i);
        if (x > -0.95 && x < 0.8) CHECK(c.values[i] <= c.values[i - 1] + 1e-14);
    }
}

TEST_CASE("capacity scales with the reference shift") {
    const auto v = quartic_double_well();
    const Grid1D g(-2.0, 2.0, 799);
    const double eps = 0.1;
    const auto c = solve_committor(g, v, eps, Interval{-1.05, -0.95}, Interval{0.8, 1.2});
    const double base = capacity_dirichlet(g, v, eps, c);
    const double shifted = capacity_dirichlet(g, v, eps, c, -0.25);
    CHECK(shifted == doctest::Approx(base * std::exp(-0.25 / eps)).epsilon(1e-12));
    // Saddle asymptotics eps/(2 pi) sqrt(2 pi eps / |V''(0)|) within 10% at eps = 0.1.
    CHECK(base == doctest::Approx(eps / (2 * M_PI) * std::sqrt(2 * M_PI * eps) / eps).epsilon(0.1));
    // Same asymptotics within 15% at eps = 0.25.
    const auto c25 = solve_committor(g, v, 0.25, Interval{-1.05, -0.95}, Interval{0.8, 1.2});
    CHECK(capacity_dirichlet(g, v, 0.25, c25) == doctest::Approx(std::sqrt(0.25 / (2 * M_PI))).epsilon(0.15));
    // The residual does not depend on v_ref.
    const auto m0 = magic_identity(g, v, eps, Interval{-1.05, -0.95}, Interval{0.8, 1.2}, -1.0);
    const auto m1 = magic_identity(g, v, eps, Interval{-1.05, -0.95}, Interval{0.8, 1.2}, -1.0, -0.25);
    CHECK(m1.residual == doctest::Approx(m0.residual).epsilon(1e-9));
}

TEST_CASE("potential theory errors") {
    const auto v = quartic_double_well();
    const Grid1D g(-2.0, 2.0, 99);
    CHECK_THROWS_AS(solve_committor(g, v, 0.2, Interval{-1.0, 0.5}, Interval{0.0, 1.0}), OverlappingSets);
    CHECK_THROWS(Grid1D(0.0, 1.0, 1));
    CHECK_THROWS(solve_poisson(g, v, -0.1, Interval{0.8, 1.2}));
}
