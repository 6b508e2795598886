#include "metastab/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "metastab/determinants.hpp"
#include "metastab/errors.hpp"

namespace metastab {

Potential::Potential(int dim, ValueFn value, GradientFn gradient, HessianFn hessian, SpectrumFn spectrum)
    : dim_(dim),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)),
      spectrum_(std::move(spectrum)) {
    if (dim_ < 1) throw InvalidArgument("potential dimension must be positive");
    if (!value_ || !gradient_) throw InvalidArgument("potential needs value and gradient callbacks");
}

double Potential::value(const Vector& x) const { return value_(x); }

Vector Potential::gradient(const Vector& x) const { return gradient_(x); }

Matrix Potential::hessian(const Vector& x) const {
    if (hessian_) return hessian_(x);
    // Centered differences of the gradient, symmetrized.
    Matrix h(dim_, dim_);
    for (int j = 0; j < dim_; ++j) {
        const double step = 1e-5 * std::max(1.0, std::abs(x(j)));
        Vector xp = x, xm = x;
        xp(j) += step;
        xm(j) -= step;
        h.col(j) = (gradient_(xp) - gradient_(xm)) / (2.0 * step);
    }
    return 0.5 * (h + h.transpose());
}

Vector Potential::hessian_eigenvalues(const Vector& x) const {
    if (spectrum_) {
        if (auto s = spectrum_(x)) return *s;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hessian(x), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NoConvergence("Hessian eigendecomposition failed");
    return solver.eigenvalues();
}

Potential quartic_double_well() {
    return Potential(
        1, [](const Vector& x) { return 0.25 * std::pow(x(0), 4) - 0.5 * x(0) * x(0); },
        [](const Vector& x) { return Vector::Constant(1, x(0) * x(0) * x(0) - x(0)); },
        [](const Vector& x) { return Matrix::Constant(1, 1, 3.0 * x(0) * x(0) - 1.0); });
}

Potential quadratic(const Vector& curvatures) {
    const int n = static_cast<int>(curvatures.size());
    return Potential(
        n, [c = curvatures](const Vector& x) { return 0.5 * (c.array() * x.array().square()).sum(); },
        [c = curvatures](const Vector& x) -> Vector { return c.cwiseProduct(x); },
        [c = curvatures](const Vector&) -> Matrix { return c.asDiagonal(); });
}

CriticalPoint find_critical_point(const Potential& p, const Vector& guess, const CriticalPointOptions& opts) {
    if (guess.size() != p.dim()) throw ShapeMismatch("guess dimension differs from potential dimension");
    Vector x = guess;
    Vector g = p.gradient(x);
    bool numeric_jacobian = false;
    int iter = 0;
    while (g.norm() >= opts.tol_crit) {
        if (++iter > opts.max_iterations) throw NoConvergence("Newton iteration limit reached");
        Matrix h = numeric_jacobian ? Potential(p.dim(), [&p](const Vector& y) { return p.value(y); },
                                                [&p](const Vector& y) { return p.gradient(y); })
                                          .hessian(x)
                                    : p.hessian(x);
        if (!h.allFinite()) {
            if (numeric_jacobian) throw NoConvergence("non-finite Jacobian");
            numeric_jacobian = true;
            --iter;
            continue;
        }
        Eigen::FullPivLU<Matrix> lu(h);
        if (!lu.isInvertible()) throw DegenerateHessian("singular Hessian during Newton refinement");
        const Vector step = lu.solve(-g);
        double alpha = 1.0;
        const double g0 = g.norm();
        for (;;) {
            const Vector trial = x + alpha * step;
            const Vector gt = p.gradient(trial);
            if (gt.allFinite() && gt.norm() < g0) {
                x = trial;
                g = gt;
                break;
            }
            alpha *= 0.5;
            if (alpha < 1e-8) {
                if (!numeric_jacobian && p.has_analytic_hessian()) {
                    numeric_jacobian = true;
                    break;
                }
                throw NoConvergence("Newton step stalled");
            }
        }
    }
    CriticalPoint cp;
    cp.location = x;
    cp.gradient_norm = g.norm();
    cp.hessian_eigenvalues = p.hessian_eigenvalues(x);
    const auto& ev = cp.hessian_eigenvalues;
    // Newton only converges linearly onto a degenerate point and stops where
    // the smallest curvature is still of order sqrt(|grad V|).
    const double floor = std::max(opts.degeneracy_tol, 10.0 * std::sqrt(cp.gradient_norm));
    if (ev.cwiseAbs().minCoeff() < floor) {
        throw DegenerateHessian("Hessian is singular at the critical point");
    }
    const auto negatives = (ev.array() < 0.0).count();
    if (negatives == 0) {
        cp.kind = CriticalKind::minimum;
    } else if (negatives == 1) {
        cp.kind = CriticalKind::saddle;
        cp.lambda_minus = ev(0);
    } else {
        throw WrongKind("critical point has Morse index " + std::to_string(negatives));
    }
    return cp;
}

// ---------------------------------------------------------------------------
// Allen-Cahn functional

void AllenCahnEnergy::validate() const {
    if (d != 1 && d != 2) throw InvalidArgument("Allen-Cahn energy supports d = 1 or 2");
    if (!(length > 0.0)) throw InvalidArgument("torus length must be positive");
    if (cutoff < 0) throw InvalidArgument("cutoff must be nonnegative");
    if (grid_factor < 1) throw InvalidArgument("grid factor must be >= 1");
    if (wick_epsilon && *wick_epsilon < 0.0) throw InvalidArgument("noise intensity must be nonnegative");
}

void AllenCahnEnergy::require_compatible(const SpectralField& phi) const {
    if (phi.dim() != d || phi.length() != length || phi.cutoff() != cutoff) {
        throw ShapeMismatch("field shape does not match the Allen-Cahn energy");
    }
}

double ac_energy(const AllenCahnEnergy& e, const SpectralField& phi) {
    e.validate();
    e.require_compatible(phi);
    const auto c = phi.coeffs();
    double quadratic = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        quadratic += 0.5 * (phi.laplacian_eigenvalue(i) - 1.0) * std::norm(c[i]);
    }
    return quadratic + 0.25 * quartic_integral(phi, e.grid_factor);
}

SpectralField ac_gradient(const AllenCahnEnergy& e, const SpectralField& phi) {
    e.validate();
    e.require_compatible(phi);
    SpectralField g = projected_cube(phi, e.grid_factor);
    auto gc = g.coeffs();
    const auto c = phi.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) gc[i] += (phi.laplacian_eigenvalue(i) - 1.0) * c[i];
    return g;
}

double ac_gateaux_derivative(const AllenCahnEnergy& e, const SpectralField& phi, const SpectralField& psi) {
    require_same_shape(phi, psi);
    const SpectralField g = ac_gradient(e, phi);
    const auto gc = g.coeffs();
    const auto pc = psi.coeffs();
    double s = 0.0;
    for (std::size_t i = 0; i < gc.size(); ++i) s += (std::conj(gc[i]) * pc[i]).real();
    return s;
}

double ac_renormalized_energy_gap(const AllenCahnEnergy& e, int cutoff) {
    e.validate();
    if (e.d != 2) throw InvalidArgument("renormalized energy gap is defined for d = 2");
    const double eps = e.wick_epsilon.value_or(0.0);
    const double l2 = e.length * e.length;
    const double base = 0.25 * l2;
    if (eps == 0.0) return base;
    return base + 1.5 * l2 * eps * counterterm_trace(e.length, cutoff, 2);
}

// ---------------------------------------------------------------------------
// Galerkin 1D potential in real coordinates

SpectralField field_from_real_coords(double length, int cutoff, const Vector& q) {
    if (q.size() != 2 * cutoff + 1) throw ShapeMismatch("coordinate vector must have 2N+1 entries");
    SpectralField f(1, length, cutoff);
    f.at(0) = q(0);
    for (int k = 1; k <= cutoff; ++k) {
        const Complex ck = Complex{q(2 * k - 1), -q(2 * k)} / std::numbers::sqrt2;
        f.at(k) = ck;
        f.at(-k) = std::conj(ck);
    }
    return f;
}

Vector real_coords_from_field(const SpectralField& phi) {
    if (phi.dim() != 1) throw ShapeMismatch("real coordinates are defined for d = 1 fields");
    const int n = phi.cutoff();
    Vector q(2 * n + 1);
    q(0) = phi.at(0).real();
    for (int k = 1; k <= n; ++k) {
        q(2 * k - 1) = std::numbers::sqrt2 * phi.at(k).real();
        q(2 * k) = -std::numbers::sqrt2 * phi.at(k).imag();
    }
    return q;
}

Potential galerkin_allen_cahn_1d(double length, int cutoff) {
    AllenCahnEnergy e;
    e.d = 1;
    e.length = length;
    e.cutoff = cutoff;
    e.validate();
    const int dim = 2 * cutoff + 1;

    auto value = [e](const Vector& q) { return ac_energy(e, field_from_real_coords(e.length, e.cutoff, q)); };
    auto gradient = [e](const Vector& q) {
        return real_coords_from_field(ac_gradient(e, field_from_real_coords(e.length, e.cutoff, q)));
    };
    // Column j is the real-coordinate image of (-Laplacian - 1 + 3 phi^2) applied to basis vector j.
    auto hessian = [e, dim](const Vector& q) {
        const SpectralField phi = field_from_real_coords(e.length, e.cutoff, q);
        const int m = phi.dealiased_grid(e.grid_factor);
        auto phi2 = phi.to_grid(m);
        for (auto& v : phi2) v = 3.0 * v * v;
        Matrix h(dim, dim);
        for (int j = 0; j < dim; ++j) {
            const SpectralField basis = field_from_real_coords(e.length, e.cutoff, Vector::Unit(dim, j));
            auto values = basis.to_grid(m);
            for (std::size_t i = 0; i < values.size(); ++i) values[i] *= phi2[i];
            SpectralField image = SpectralField::from_grid(1, e.length, e.cutoff, m, values);
            const auto bc = basis.coeffs();
            auto ic = image.coeffs();
            for (std::size_t i = 0; i < bc.size(); ++i) ic[i] += (basis.laplacian_eigenvalue(i) - 1.0) * bc[i];
            h.col(j) = real_coords_from_field(image);
        }
        return Matrix(0.5 * (h + h.transpose()));
    };
    // Constant fields: the Hessian is diagonal, (2 pi k / L)^2 - 1 + 3 c^2.
    auto spectrum = [e, dim](const Vector& q) -> std::optional<Vector> {
        if (dim > 1 && q.tail(dim - 1).cwiseAbs().maxCoeff() != 0.0) return std::nullopt;
        const double c = q(0) / std::sqrt(e.length);
        const double shift = 3.0 * c * c - 1.0;
        const double q2 = std::pow(2.0 * std::numbers::pi / e.length, 2);
        Vector ev(dim);
        ev(0) = shift;
        for (int k = 1; k <= e.cutoff; ++k) {
            ev(2 * k - 1) = q2 * k * k + shift;
            ev(2 * k) = q2 * k * k + shift;
        }
        std::sort(ev.data(), ev.data() + dim);
        return ev;
    };
    return Potential(dim, value, gradient, hessian, spectrum);
}

}  // namespace metastab
