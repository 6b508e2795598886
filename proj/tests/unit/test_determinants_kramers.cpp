#include <doctest.h>

#include <cmath>

#include "metastab/determinants.hpp"
#include "metastab/errors.hpp"
#include "metastab/kramers.hpp"
#include "metastab/potentials.hpp"

using namespace metastab;

namespace {

// Independent evaluation of the 1D product with k = 0 and the +-k pairs.
double product_1d(double L, int N) {
    double p = 1 + 3 / -1.0;
    for (int k = 1; k <= N; ++k) {
        const double nu = std::pow(2 * M_PI * k / L, 2) - 1;
        p *= std::pow(1 + 3 / nu, 2);
    }
    return p;
}

}  // namespace

TEST_CASE("torus spectrum") {
    const auto s = torus_spectrum(1, 2.0, 3);
    CHECK(s.eigenvalues.size() == 7);
    CHECK(s.negative_count() == 1);
    CHECK(s.eigenvalues[3] == -1.0);
    CHECK(torus_spectrum(2, 2.0, 2).eigenvalues.size() == 25);
    CHECK_THROWS_AS(torus_spectrum(1, 2 * M_PI, 3), DomainError);
}

TEST_CASE("fredholm 1d against an independent product and the closed form") {
    for (double L : {1.0, 2.0, M_PI, 5.0}) {
        CHECK(fredholm_det_1d(L, 50).value == doctest::Approx(product_1d(L, 50)).epsilon(1e-12));
        const double closed = -std::pow(std::sinh(L / std::sqrt(2.0)), 2) / std::pow(std::sin(L / 2), 2);
        CHECK(fredholm_closed_form(L) == doctest::Approx(closed).epsilon(1e-14));
        const auto r = fredholm_det_1d(L, 4096);
        CHECK(std::abs(r.value - closed) / std::abs(closed) < 1e-3);
        CHECK(r.value < 0);
    }
    CHECK(fredholm_det_1d(2.0, 0).value == -2.0);
    CHECK_THROWS_AS(fredholm_det_1d(7.0, 4), DomainError);
}

TEST_CASE("fredholm 1d converges at first order with an honest tail") {
    const double L = 2.0, closed = fredholm_closed_form(L);
    const double e1 = std::abs(fredholm_det_1d(L, 256).value - closed);
    const double e2 = std::abs(fredholm_det_1d(L, 512).value - closed);
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.02));
    const auto r = fredholm_det_1d(L, 256);
    CHECK(std::abs(std::log(closed / r.value)) <= r.tail_estimate * 1.0001);
}

TEST_CASE("carleman determinant in 2d") {
    const double L = 2.0;
    CHECK(carleman_det_2d(L, 0).value == doctest::Approx(-2 * std::exp(3.0)).epsilon(1e-12));
    std::vector<double> v;
    for (int N : {8, 16, 32, 64, 128}) v.push_back(carleman_det_2d(L, N).value);
    for (std::size_t i = 0; i + 2 < v.size(); ++i) {
        const double ratio = std::abs(v[i + 1] - v[i]) / std::abs(v[i + 2] - v[i + 1]);
        CHECK(ratio == doctest::Approx(4.0).epsilon(0.25));
    }
    const auto r = carleman_det_2d(L, 64);
    CHECK(std::abs(std::log(v.back() / r.value)) <= r.tail_estimate);
}

TEST_CASE("plain fredholm product diverges in 2d") {
    const double a = fredholm_det(2, 2.0, 32).log.log_abs;
    const double b = fredholm_det(2, 2.0, 64).log.log_abs;
    const double c = fredholm_det(2, 2.0, 128).log.log_abs;
    // Grows like 3 L^2/(2 pi) ln N.
    CHECK(b - a == doctest::Approx(3 * 4 / (2 * M_PI) * std::log(2.0)).epsilon(0.05));
    CHECK(c - b == doctest::Approx(3 * 4 / (2 * M_PI) * std::log(2.0)).epsilon(0.05));
    CHECK(std::isinf(fredholm_det(2, 2.0, 8).tail_estimate));
}

TEST_CASE("counterterm grows like ln N / (2 pi)") {
    const double L = 2.0;
    const double diff = counterterm_trace(L, 1024) - counterterm_trace(L, 512);
    CHECK(diff == doctest::Approx(std::log(2.0) / (2 * M_PI)).epsilon(0.05));
    CHECK(counterterm_trace(L, 0) == doctest::Approx(-1 / (L * L)));
    CHECK(resolvent_trace(2, L, 0) == -1.0);
}

TEST_CASE("compensation of counterterm and determinant regularization") {
    const double L = 2.0;
    for (int N : {4, 16, 128}) {
        for (double eps : {0.05, 0.2}) {
            const double a = ek_allen_cahn_2d_renormalized(L, N, eps).log_predict(eps);
            const double b = ek_allen_cahn_2d(L, N).log_predict(eps);
            CHECK(std::abs(a - b) / std::abs(b) < 1e-10);
        }
    }
}

TEST_CASE("eyring-kramers for the quartic well") {
    const auto v = quartic_double_well();
    const auto p = ek_finite(find_critical_point(v, Vector::Constant(1, -0.8)),
                             find_critical_point(v, Vector::Constant(1, 0.1)), v);
    CHECK(p.barrier == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p.prefactor == doctest::Approx(M_PI * std::sqrt(2.0)).epsilon(1e-9));
    CHECK(p.predict(0.25) == doctest::Approx(M_PI * std::sqrt(2.0) * std::exp(1.0)).epsilon(1e-9));
    CHECK_THROWS(ek_finite(find_critical_point(v, Vector::Constant(1, 0.1)),
                           find_critical_point(v, Vector::Constant(1, -0.8)), v));
}

TEST_CASE("eyring-kramers for anisotropic quadratic saddles") {
    // V = x^4/4 - x^2/2 + (c/2) y^2: the transverse curvature cancels.
    const double c = 3.0;
    Potential v(
        2, [&](const Vector& x) { return std::pow(x(0), 4) / 4 - x(0) * x(0) / 2 + c / 2 * x(1) * x(1); },
        [&](const Vector& x) {
            Vector g(2);
            g << x(0) * x(0) * x(0) - x(0), c * x(1);
            return g;
        });
    Vector g0(2), g1(2);
    g0 << -0.9, 0.1;
    g1 << 0.05, -0.05;
    const auto p = ek_finite(find_critical_point(v, g0), find_critical_point(v, g1), v);
    CHECK(p.prefactor == doctest::Approx(M_PI * std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("allen-cahn 1d prediction") {
    const double L = 2.0;
    const auto p = ek_allen_cahn_1d(L);
    CHECK(p.barrier == doctest::Approx(L / 4));
    CHECK(p.lambda_minus == -1.0);
    CHECK(p.prefactor == doctest::Approx(2 * M_PI / std::sqrt(std::abs(fredholm_closed_form(L)))));
    const auto q = ek_allen_cahn_1d(L, 4096);
    CHECK(q.prefactor == doctest::Approx(p.prefactor).epsilon(1e-3));
}

TEST_CASE("galerkin consistency of the 1d prediction") {
    const double L = 2.0;
    for (int N : {8, 4096}) {
        const auto g = galerkin_allen_cahn_1d(L, N);
        const auto m = find_critical_point(g, real_coords_from_field(SpectralField::constant(1, L, N, -1.0)));
        const auto s = find_critical_point(g, real_coords_from_field(SpectralField::constant(1, L, N, 0.0)));
        const auto p = ek_finite(m, s, g);
        const auto ref = ek_allen_cahn_1d(L, N);
        CHECK(p.prefactor == doctest::Approx(ref.prefactor).epsilon(1e-9));
        if (N == 4096) {
            CHECK(std::abs(p.prefactor - ek_allen_cahn_1d(L).prefactor) / ek_allen_cahn_1d(L).prefactor < 1e-3);
        }
    }
}
