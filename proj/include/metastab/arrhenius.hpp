#pragma once

#include <utility>
#include <vector>

#include "metastab/sde.hpp"

namespace metastab {

struct ArrheniusPoint {
    double epsilon = 0.0;
    double mean_time = 0.0;
    double stderr_mean = 0.0;
    std::size_t n_censored = 0;
};

/// Least squares of ln(mean tau) against 1/eps; the slope estimates the barrier.
struct ArrheniusFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<ArrheniusPoint> points;
};

/// Needs at least three distinct noise levels, none of them fully censored.
ArrheniusFit arrhenius_fit(const std::vector<std::pair<double, HittingTimeBatch>>& batches);
ArrheniusFit arrhenius_fit(const std::vector<ArrheniusPoint>& points);

}  // namespace metastab
