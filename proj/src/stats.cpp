#include "metastab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>

#include "metastab/errors.hpp"

namespace metastab::stats {

Summary summarize(std::span<const double> xs) {
    Summary s;
    s.count = xs.size();
    if (xs.empty()) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    if (xs.size() < 2) return s;
    double m2 = 0.0;
    double m4 = 0.0;
    for (double x : xs) {
        const double d = x - s.mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    const double n = static_cast<double>(xs.size());
    s.variance = m2 / (n - 1.0);
    s.stderr_mean = std::sqrt(s.variance / n);
    const double mu2 = m2 / n;
    const double mu4 = m4 / n;
    s.stderr_variance = std::sqrt(std::max(0.0, (mu4 - mu2 * mu2 * (n - 3.0) / (n - 1.0)) / n));
    return s;
}

double correlation(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw InvalidArgument("correlation needs two equally sized samples of length >= 2");
    }
    const auto sx = summarize(xs);
    const auto sy = summarize(ys);
    double cov = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) cov += (xs[i] - sx.mean) * (ys[i] - sy.mean);
    cov /= static_cast<double>(xs.size() - 1);
    return cov / std::sqrt(sx.variance * sy.variance);
}

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw InsufficientData("linear fit needs at least two points");
    }
    const auto sx = summarize(xs);
    const auto sy = summarize(ys);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - sx.mean;
        const double dy = ys[i] - sy.mean;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw InsufficientData("linear fit needs at least two distinct abscissae");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = sy.mean - fit.slope * sx.mean;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return fit;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double ks_statistic_normal(std::vector<double> xs, double mean, double sd) {
    if (xs.empty()) throw InsufficientData("KS statistic of an empty sample");
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = normal_cdf((xs[i] - mean) / sd);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return d;
}

double ks_statistic_normal_lattice(std::vector<double> xs, double spacing, double mean, double sd) {
    if (xs.empty()) throw InsufficientData("KS statistic of an empty sample");
    if (!(spacing > 0.0)) throw InvalidArgument("lattice spacing must be positive");
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < xs.size()) {
        std::size_t j = i;
        while (j < xs.size() && xs[j] - xs[i] < 0.5 * spacing) ++j;
        // The empirical CDF is flat between atoms; compare at the cell edges.
        const double below = normal_cdf((xs[i] - 0.5 * spacing - mean) / sd);
        const double above = normal_cdf((xs[i] + 0.5 * spacing - mean) / sd);
        d = std::max({d, std::abs(static_cast<double>(i) / n - below), std::abs(static_cast<double>(j) / n - above)});
        i = j;
    }
    return d;
}

double ks_p_value(double statistic, std::size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * statistic;
    if (lambda < 1e-3) return 1.0;
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += (j % 2 == 1 ? 2.0 : -2.0) * term;
        if (term < 1e-16) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

double ks_critical_value(std::size_t n, double alpha) {
    // c(alpha) = sqrt(-ln(alpha/2)/2); 1.3581 at alpha = 0.05.
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

ChiSquareResult chi_square_test(std::span<const double> observed_counts,
                                std::span<const double> expected_probabilities, double alpha) {
    if (observed_counts.size() != expected_probabilities.size() || observed_counts.size() < 2) {
        throw InvalidArgument("chi-square test needs matching bins (>= 2)");
    }
    double total = 0.0, psum = 0.0;
    for (double c : observed_counts) total += c;
    for (double p : expected_probabilities) psum += p;
    ChiSquareResult r;
    for (std::size_t i = 0; i < observed_counts.size(); ++i) {
        const double e = total * expected_probabilities[i] / psum;
        if (e <= 0.0) throw InvalidArgument("chi-square bin with zero expectation");
        const double d = observed_counts[i] - e;
        r.statistic += d * d / e;
    }
    r.degrees_of_freedom = static_cast<int>(observed_counts.size()) - 1;
    boost::math::chi_squared dist(r.degrees_of_freedom);
    r.critical_value = boost::math::quantile(boost::math::complement(dist, alpha));
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
    r.passes = r.statistic <= r.critical_value;
    return r;
}

}  // namespace metastab::stats
