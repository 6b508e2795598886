#include <doctest.h>

#include <cmath>
#include <set>

#include "metastab/errors.hpp"
#include "metastab/parallel.hpp"
#include "metastab/rng.hpp"
#include "metastab/stats.hpp"

using namespace metastab;

TEST_CASE("philox known answers") {
    // Reference vectors distributed with Random123 (kat_vectors, philox4x32_10).
    using B = std::array<std::uint32_t, 4>;
    CHECK(Philox4x32::generate_block({0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::generate_block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::generate_block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("philox streams are reproducible and distinct") {
    Philox4x32 a(7, 3), b(7, 3), c(7, 4), d(8, 3);
    std::set<std::uint32_t> first;
    for (int i = 0; i < 100; ++i) {
        const auto x = a();
        CHECK(x == b());
        first.insert(x);
    }
    int same_c = 0, same_d = 0;
    Philox4x32 a2(7, 3);
    for (int i = 0; i < 100; ++i) {
        const auto x = a2();
        same_c += c() == x;
        same_d += d() == x;
    }
    CHECK(same_c == 0);
    CHECK(same_d == 0);
    CHECK(first.size() > 95);
}

TEST_CASE("gaussian stream moments") {
    GaussianStream g(1, 0);
    std::vector<double> xs(200000);
    g.fill(xs);
    const auto s = stats::summarize(xs);
    CHECK(std::abs(s.mean) < 4 * s.stderr_mean);
    CHECK(std::abs(s.variance - 1.0) < 4 * s.stderr_variance);
    CHECK(stats::ks_statistic_normal(xs) < stats::ks_critical_value(xs.size(), 0.001));
}

TEST_CASE("parallel_for covers every index and rethrows") {
    for (unsigned t : {1u, 3u, 8u}) {
        std::vector<int> hit(1000, 0);
        parallel_for(hit.size(), t, [&](std::size_t i) { hit[i] += 1; });
        CHECK(std::count(hit.begin(), hit.end(), 1) == 1000);
    }
    CHECK_THROWS_AS(parallel_for(10, 2,
                                 [](std::size_t i) {
                                     if (i == 5) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}

TEST_CASE("summary and linear fit") {
    const std::vector<double> xs{1, 2, 3, 4};
    const auto s = stats::summarize(xs);
    CHECK(s.mean == doctest::Approx(2.5));
    CHECK(s.variance == doctest::Approx(5.0 / 3.0));
    CHECK(s.stderr_mean == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    const std::vector<double> ys{3, 5, 7, 9};
    const auto f = stats::linear_fit(xs, ys);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK(stats::correlation(xs, ys) == doctest::Approx(1.0));
}

TEST_CASE("ks and chi-square helpers") {
    CHECK(stats::normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(stats::normal_cdf(1.959963984540054) == doctest::Approx(0.975));
    CHECK(stats::ks_critical_value(10000) == doctest::Approx(0.01358).epsilon(1e-3));
    // Shifted sample must be rejected.
    GaussianStream g(2, 0);
    std::vector<double> xs(5000);
    for (auto& x : xs) x = g() + 0.2;
    const double d = stats::ks_statistic_normal(xs);
    CHECK(d > stats::ks_critical_value(xs.size()));
    CHECK(stats::ks_p_value(d, xs.size()) < 0.01);
    CHECK(stats::ks_p_value(0.5 / std::sqrt(1000.0), 1000) > 0.9);

    const std::vector<double> obs{25, 25, 25, 25}, p{1, 1, 1, 1};
    const auto r = stats::chi_square_test(obs, p);
    CHECK(r.statistic == doctest::Approx(0.0));
    CHECK(r.degrees_of_freedom == 3);
    CHECK(r.critical_value == doctest::Approx(7.814727903));
    CHECK(r.passes);
    const std::vector<double> bad{70, 10, 10, 10};
    CHECK_FALSE(stats::chi_square_test(bad, p).passes);
}

TEST_CASE("lattice ks statistic removes the atom bias") {
    // Exact binomial quantiles: S_n / sqrt(n) for n = 400 sampled on a grid of
    // probabilities, so sampling noise is absent.
    const int n = 400;
    std::vector<double> cdf(n + 1);
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) {
        acc += std::exp(std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1) - n * std::log(2.0));
        cdf[k] = acc;
    }
    std::vector<double> xs;
    const int m = 20000;
    for (int i = 0; i < m; ++i) {
        const double u = (i + 0.5) / m;
        const int k = static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        xs.push_back((2.0 * k - n) / std::sqrt(static_cast<double>(n)));
    }
    const double plain = stats::ks_statistic_normal(xs);
    const double lattice = stats::ks_statistic_normal_lattice(xs, 2.0 / std::sqrt(static_cast<double>(n)));
    CHECK(plain > 0.015);
    CHECK(lattice < 0.002);
    CHECK_THROWS(stats::ks_statistic_normal_lattice(xs, 0.0));
}
