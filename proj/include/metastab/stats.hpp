#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace metastab::stats {

struct Summary {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  ///< unbiased sample variance
    double stderr_mean = 0.0;
    /// Standard error of the sample variance, from the fourth central moment.
    double stderr_variance = 0.0;
};

/// Two-pass summary; deterministic for a fixed input order.
Summary summarize(std::span<const double> xs);

double correlation(std::span<const double> xs, std::span<const double> ys);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares y = slope*x + intercept. Requires >= 2 distinct x.
LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

double normal_cdf(double x);

/// One-sample Kolmogorov-Smirnov statistic against N(mean, sd^2).
double ks_statistic_normal(std::vector<double> xs, double mean = 0.0, double sd = 1.0);

/// KS statistic for a sample supported on a lattice of the given spacing
/// against N(mean, sd^2), with the empirical CDF compared at the midpoints
/// between atoms (continuity correction). Without it the jump at each atom
/// alone contributes about half an atom's mass to the plain statistic.
double ks_statistic_normal_lattice(std::vector<double> xs, double spacing, double mean = 0.0, double sd = 1.0);
/// Asymptotic Kolmogorov survival function P(sqrt(n) D > lambda) evaluated at
/// the effective lambda of Stephens' small-sample correction.
double ks_p_value(double statistic, std::size_t n);

/// Asymptotic critical value for level alpha (two-sided), c(alpha)/sqrt(n).
double ks_critical_value(std::size_t n, double alpha = 0.05);

struct ChiSquareResult {
    double statistic = 0.0;
    int degrees_of_freedom = 0;
    double critical_value = 0.0;
    double p_value = 0.0;
    bool passes = false;
};

/// Pearson chi-square goodness of fit for observed counts vs expected
/// probabilities (normalized internally).
ChiSquareResult chi_square_test(std::span<const double> observed_counts,
                                std::span<const double> expected_probabilities,
                                double alpha = 0.05);

}  // namespace metastab::stats
