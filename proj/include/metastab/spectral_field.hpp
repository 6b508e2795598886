#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace metastab {

using Complex = std::complex<double>;

/// Real scalar field on the torus T^d_L (d = 1, 2) stored as coefficients in
/// the orthonormal Fourier basis e_k(x) = L^{-d/2} exp(2 pi i k.x / L), over
/// the square cutoff max_i |k_i| <= N. Real-valuedness is the conjugate
/// symmetry c(-k) = conj(c(k)).
///
/// Coefficients are laid out row-major over k_1, ..., k_d in [-N, N].
class SpectralField {
public:
    SpectralField(int d, double length, int cutoff);

    static SpectralField constant(int d, double length, int cutoff, double value);

    /// Projects grid samples (M^d points, row-major, x_j = j L / M) onto the
    /// retained modes. Exact when the sampled function is a trigonometric
    /// polynomial of degree < M/2.
    static SpectralField from_grid(int d, double length, int cutoff, int grid_points,
                                   std::span<const double> values);

    int dim() const { return d_; }
    double length() const { return length_; }
    int cutoff() const { return cutoff_; }
    /// Modes per axis, 2N + 1.
    int width() const { return 2 * cutoff_ + 1; }
    std::size_t mode_count() const { return coeffs_.size(); }

    std::span<Complex> coeffs() { return coeffs_; }
    std::span<const Complex> coeffs() const { return coeffs_; }

    std::size_t index(int k1, int k2 = 0) const;
    Complex& at(int k1, int k2 = 0) { return coeffs_[index(k1, k2)]; }
    const Complex& at(int k1, int k2 = 0) const { return coeffs_[index(k1, k2)]; }
    /// Wave-vector components of flat index `i`.
    void wavevector(std::size_t i, int& k1, int& k2) const;
    /// (2 pi |k| / L)^2 for flat index `i`, the eigenvalue of -Laplacian.
    double laplacian_eigenvalue(std::size_t i) const;

    /// Grid values on M^d points; the imaginary residue of the inverse
    /// transform is written to `max_imag` when requested.
    std::vector<double> to_grid(int grid_points, double* max_imag = nullptr) const;

    /// Smallest collocation grid that integrates quartic products exactly and
    /// projects cubic products without aliasing: 2 (2N + 1) points per axis.
    int dealiased_grid(int grid_factor = 1) const { return 2 * width() * grid_factor; }

    /// Spatial mean (1/L^d) int phi.
    double mean() const;
    double l2_norm_squared() const;

    /// Sets every c(-k) to conj(c(k)) using the lexicographically positive half.
    void symmetrize();
    /// Largest |c(-k) - conj(c(k))|.
    double symmetry_defect() const;

    bool same_shape(const SpectralField& other) const;

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double s);
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

private:
    int d_;
    double length_;
    int cutoff_;
    std::vector<Complex> coeffs_;
};

/// Throws ShapeMismatch unless both fields share (d, L, N).
void require_same_shape(const SpectralField& a, const SpectralField& b);

/// sqrt( sum_k (1 + (2 pi |k| / L)^2)^s |c_k|^2 ).
double hs_norm(const SpectralField& phi, double s);

/// Projection P_N of the pointwise cube of `phi`, computed on the dealiased
/// collocation grid; exact for the truncated field.
SpectralField projected_cube(const SpectralField& phi, int grid_factor = 1);

/// int_{T^d_L} phi^4 dx, exact on the dealiased grid.
double quartic_integral(const SpectralField& phi, int grid_factor = 1);

}  // namespace metastab
