#pragma once

#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "metastab/spectral_field.hpp"

namespace metastab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Smooth confining potential on R^dim with gradient and Hessian access.
///
/// The Hessian callback is optional; without it the Hessian is formed by
/// centered differences of the gradient. A spectrum callback may be supplied
/// when the Hessian's eigenvalues are available from structure (e.g. Galerkin
/// potentials at constant fields, which are diagonal in the Fourier basis);
/// it must return the same eigenvalues as `hessian`, ascending, or
/// std::nullopt to fall back to a dense eigendecomposition.
class Potential {
public:
    using ValueFn = std::function<double(const Vector&)>;
    using GradientFn = std::function<Vector(const Vector&)>;
    using HessianFn = std::function<Matrix(const Vector&)>;
    using SpectrumFn = std::function<std::optional<Vector>(const Vector&)>;

    Potential(int dim, ValueFn value, GradientFn gradient, HessianFn hessian = {},
              SpectrumFn spectrum = {});

    int dim() const { return dim_; }
    double value(const Vector& x) const;
    Vector gradient(const Vector& x) const;
    Matrix hessian(const Vector& x) const;
    /// Ascending eigenvalues of the Hessian at x.
    Vector hessian_eigenvalues(const Vector& x) const;
    bool has_analytic_hessian() const { return static_cast<bool>(hessian_); }

    // 1D conveniences.
    double value(double x) const { return value(Vector::Constant(1, x)); }
    double derivative(double x) const { return gradient(Vector::Constant(1, x))(0); }
    double second_derivative(double x) const { return hessian(Vector::Constant(1, x))(0, 0); }

private:
    int dim_;
    ValueFn value_;
    GradientFn gradient_;
    HessianFn hessian_;
    SpectrumFn spectrum_;
};

/// V(x) = x^4/4 - x^2/2 with minima at -1, +1 and a saddle at 0.
Potential quartic_double_well();

/// V(x) = 1/2 sum_i c_i x_i^2.
Potential quadratic(const Vector& curvatures);

enum class CriticalKind { minimum, saddle };

struct CriticalPoint {
    Vector location;
    CriticalKind kind = CriticalKind::minimum;
    Vector hessian_eigenvalues;           ///< ascending
    std::optional<double> lambda_minus;   ///< the negative eigenvalue, saddles only
    double gradient_norm = 0.0;
};

struct CriticalPointOptions {
    double tol_crit = 1e-10;
    int max_iterations = 100;
    /// Smallest admissible |eigenvalue| of the Hessian at the limit point.
    double degeneracy_tol = 1e-8;
};

/// Damped Newton refinement towards a nondegenerate critical point, then
/// classification by Hessian signature. Index >= 2 points raise WrongKind.
CriticalPoint find_critical_point(const Potential& p, const Vector& guess,
                                  const CriticalPointOptions& opts = {});

/// The Allen-Cahn functional
///   V(phi) = int_{T^d_L} ( |grad phi|^2 / 2 - phi^2 / 2 + phi^4 / 4 ) dx
/// restricted to the Galerkin space of square cutoff N.
struct AllenCahnEnergy {
    int d = 1;
    double length = 2.0;
    int cutoff = 16;
    std::optional<double> wick_epsilon;
    int grid_factor = 1;

    void validate() const;
    void require_compatible(const SpectralField& phi) const;
};

double ac_energy(const AllenCahnEnergy& e, const SpectralField& phi);

/// Gradient of the truncated functional in coefficient space:
/// (|k|^2 - 1) c_k + P_N(phi^3)_k.
SpectralField ac_gradient(const AllenCahnEnergy& e, const SpectralField& phi);

/// <-Laplacian phi - phi + phi^3, psi>_{L^2}.
double ac_gateaux_derivative(const AllenCahnEnergy& e, const SpectralField& phi,
                             const SpectralField& psi);

/// Energy gap between the transition state 0 and the minimum -1 of the
/// renormalized 2D functional at cutoff N: L^2/4 + (3/2) L^2 eps C_N.
double ac_renormalized_energy_gap(const AllenCahnEnergy& e, int cutoff);

/// The truncated 1D Allen-Cahn functional as a Potential on R^{2N+1}, using
/// the real orthonormal basis (1/sqrt(L), sqrt(2/L) cos(2 pi k x/L),
/// sqrt(2/L) sin(2 pi k x/L)), k = 1..N. Coordinate layout: [a_0, a_1, b_1,
/// a_2, b_2, ...].
Potential galerkin_allen_cahn_1d(double length, int cutoff);

/// Conversions between real coordinates of `galerkin_allen_cahn_1d` and fields.
SpectralField field_from_real_coords(double length, int cutoff, const Vector& q);
Vector real_coords_from_field(const SpectralField& phi);

}  // namespace metastab
