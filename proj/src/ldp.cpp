#include "metastab/ldp.hpp"

#include <cmath>

#include "metastab/errors.hpp"

namespace metastab {

namespace {

template <typename State>
void check_path(const DiscretePath<State>& path) {
    if (path.times.size() < 2 || path.points.size() != path.times.size()) {
        throw DegeneratePath("a path needs at least two nodes and one state per time");
    }
    for (std::size_t i = 1; i < path.times.size(); ++i) {
        if (!(path.times[i] > path.times[i - 1])) throw DegeneratePath("path times must increase strictly");
    }
}

}  // namespace

double rate_functional_sde(const EuclideanPath& path, const Potential& p) {
    check_path(path);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.times.size(); ++i) {
        const auto& x0 = path.points[i];
        const auto& x1 = path.points[i + 1];
        if (x0.size() != p.dim() || x1.size() != p.dim()) throw ShapeMismatch("path state dimension mismatch");
        const double dt = path.times[i + 1] - path.times[i];
        const Vector mid = 0.5 * (x0 + x1);
        const Vector r = (x1 - x0) / dt + p.gradient(mid);
        total += 0.5 * r.squaredNorm() * dt;
    }
    return total;
}

double rate_functional_ac_1d(const FieldPath& path, double length) {
    check_path(path);
    const auto& first = path.points.front();
    if (first.dim() != 1 || first.length() != length) throw ShapeMismatch("rate functional needs d = 1 fields on T_L");
    // The residual has degree 3N and its square 6N; 6N + 2 points integrate it exactly.
    const int m = 6 * first.cutoff() + 2;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.times.size(); ++i) {
        const auto& a = path.points[i];
        const auto& b = path.points[i + 1];
        require_same_shape(first, a);
        require_same_shape(first, b);
        const double dt = path.times[i + 1] - path.times[i];
        SpectralField mid = 0.5 * (a + b);
        // Linear part in Fourier space: velocity - Laplacian mid - mid.
        SpectralField linear = (b - a) * (1.0 / dt);
        auto lc = linear.coeffs();
        const auto mc = mid.coeffs();
        for (std::size_t k = 0; k < lc.size(); ++k) lc[k] += (mid.laplacian_eigenvalue(k) - 1.0) * mc[k];
        const auto lin = linear.to_grid(m);
        const auto phi = mid.to_grid(m);
        double integral = 0.0;
        for (std::size_t j = 0; j < lin.size(); ++j) {
            const double r = lin[j] + phi[j] * phi[j] * phi[j];
            integral += r * r;
        }
        integral *= length / static_cast<double>(m);
        total += 0.5 * integral * dt;
    }
    return total;
}

}  // namespace metastab
