#include "metastab/arrhenius.hpp"

#include <cmath>
#include <set>

#include "metastab/errors.hpp"
#include "metastab/stats.hpp"

namespace metastab {

ArrheniusFit arrhenius_fit(const std::vector<std::pair<double, HittingTimeBatch>>& batches) {
    std::vector<ArrheniusPoint> points;
    for (const auto& [eps, batch] : batches) {
        if (batch.samples.empty()) throw InsufficientData("a batch has no uncensored samples");
        points.push_back({eps, batch.mean, batch.stderr_mean, batch.n_censored});
    }
    return arrhenius_fit(points);
}

ArrheniusFit arrhenius_fit(const std::vector<ArrheniusPoint>& points) {
    std::set<double> distinct;
    std::vector<double> xs, ys;
    for (const auto& p : points) {
        if (!(p.epsilon > 0.0)) throw InvalidArgument("noise levels must be positive");
        if (!(p.mean_time > 0.0)) throw InsufficientData("mean hitting time must be positive");
        distinct.insert(p.epsilon);
        xs.push_back(1.0 / p.epsilon);
        ys.push_back(std::log(p.mean_time));
    }
    if (distinct.size() < 3) throw InsufficientData("Arrhenius fit needs at least three distinct noise levels");
    const auto lf = stats::linear_fit(xs, ys);
    ArrheniusFit fit;
    fit.slope = lf.slope;
    fit.intercept = lf.intercept;
    fit.r_squared = lf.r_squared;
    fit.points = points;
    return fit;
}

}  // namespace metastab
