#pragma once

#include <vector>

#include "metastab/potentials.hpp"
#include "metastab/spectral_field.hpp"

namespace metastab {

/// Piecewise-linear path sampled at strictly increasing times.
template <typename State>
struct DiscretePath {
    std::vector<double> times;
    std::vector<State> points;
};

using EuclideanPath = DiscretePath<Vector>;
using FieldPath = DiscretePath<SpectralField>;

/// Freidlin-Wentzell functional 1/2 int |gamma' + grad V(gamma)|^2 dt.
/// On each segment the velocity is the difference quotient and the drift is
/// evaluated at the segment midpoint (second order; nonuniform steps allowed).
double rate_functional_sde(const EuclideanPath& path, const Potential& p);

/// 1/2 int int [d_t gamma - d_xx gamma - gamma + gamma^3]^2 dx dt for d = 1
/// Allen-Cahn fields, with the spatial integral evaluated exactly by
/// collocation on a grid fine enough for the cubic's full spectrum.
double rate_functional_ac_1d(const FieldPath& path, double length);

/// Time reversal: t -> T - t.
template <typename State>
DiscretePath<State> reversed(const DiscretePath<State>& path) {
    DiscretePath<State> r;
    const double t_end = path.times.back();
    const double t_start = path.times.front();
    for (std::size_t i = path.times.size(); i-- > 0;) {
        r.times.push_back(t_start + (t_end - path.times[i]));
        r.points.push_back(path.points[i]);
    }
    return r;
}

}  // namespace metastab
