#include "metastab/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "metastab/errors.hpp"
#include "metastab/fft.hpp"

namespace metastab {

namespace {

using detail::FftPlan;

int wrap(int k, int m) { return k >= 0 ? k : k + m; }

std::size_t grid_total(int d, int m) {
    return d == 1 ? static_cast<std::size_t>(m) : static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
}

}  // namespace

SpectralField::SpectralField(int d, double length, int cutoff) : d_(d), length_(length), cutoff_(cutoff) {
    if (d != 1 && d != 2) throw InvalidArgument("SpectralField supports d = 1 or 2");
    if (!(length > 0.0) || !std::isfinite(length)) throw InvalidArgument("torus length must be positive");
    if (cutoff < 0) throw InvalidArgument("cutoff must be nonnegative");
    const auto w = static_cast<std::size_t>(width());
    coeffs_.assign(d == 1 ? w : w * w, Complex{0.0, 0.0});
}

SpectralField SpectralField::constant(int d, double length, int cutoff, double value) {
    SpectralField f(d, length, cutoff);
    f.at(0, 0) = value * std::pow(length, 0.5 * d);
    return f;
}

std::size_t SpectralField::index(int k1, int k2) const {
    if (std::abs(k1) > cutoff_ || std::abs(k2) > cutoff_ || (d_ == 1 && k2 != 0)) {
        throw OutOfRange("wave vector outside the retained modes");
    }
    const auto w = static_cast<std::size_t>(width());
    const auto i1 = static_cast<std::size_t>(k1 + cutoff_);
    if (d_ == 1) return i1;
    return i1 * w + static_cast<std::size_t>(k2 + cutoff_);
}

void SpectralField::wavevector(std::size_t i, int& k1, int& k2) const {
    const auto w = static_cast<std::size_t>(width());
    if (d_ == 1) {
        k1 = static_cast<int>(i) - cutoff_;
        k2 = 0;
    } else {
        k1 = static_cast<int>(i / w) - cutoff_;
        k2 = static_cast<int>(i % w) - cutoff_;
    }
}

double SpectralField::laplacian_eigenvalue(std::size_t i) const {
    int k1 = 0, k2 = 0;
    wavevector(i, k1, k2);
    const double q = 2.0 * std::numbers::pi / length_;
    return q * q * static_cast<double>(k1 * k1 + k2 * k2);
}

std::vector<double> SpectralField::to_grid(int grid_points, double* max_imag) const {
    if (grid_points < width()) throw InvalidArgument("collocation grid too coarse for the retained modes");
    const std::size_t total = grid_total(d_, grid_points);
    std::vector<Complex> buf(total, Complex{0.0, 0.0});
    std::vector<Complex> out(total);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        int k1 = 0, k2 = 0;
        wavevector(i, k1, k2);
        const std::size_t j = d_ == 1 ? static_cast<std::size_t>(wrap(k1, grid_points))
                                      : static_cast<std::size_t>(wrap(k1, grid_points)) * grid_points +
                                            static_cast<std::size_t>(wrap(k2, grid_points));
        buf[j] = coeffs_[i];
    }
    FftPlan::get(d_, grid_points, FftPlan::Direction::backward)->execute(buf, out);
    const double norm = std::pow(length_, -0.5 * d_);
    std::vector<double> values(total);
    double imag = 0.0;
    for (std::size_t j = 0; j < total; ++j) {
        values[j] = out[j].real() * norm;
        imag = std::max(imag, std::abs(out[j].imag() * norm));
    }
    if (max_imag != nullptr) *max_imag = imag;
    return values;
}

SpectralField SpectralField::from_grid(int d, double length, int cutoff, int grid_points,
                                       std::span<const double> values) {
    SpectralField f(d, length, cutoff);
    if (grid_points < f.width()) throw InvalidArgument("collocation grid too coarse for the retained modes");
    const std::size_t total = grid_total(d, grid_points);
    if (values.size() != total) throw ShapeMismatch("grid sample count does not match M^d");
    std::vector<Complex> buf(values.begin(), values.end());
    std::vector<Complex> out(total);
    FftPlan::get(d, grid_points, FftPlan::Direction::forward)->execute(buf, out);
    const double scale = std::pow(length, 0.5 * d) / static_cast<double>(total);
    for (std::size_t i = 0; i < f.coeffs_.size(); ++i) {
        int k1 = 0, k2 = 0;
        f.wavevector(i, k1, k2);
        const std::size_t j = d == 1 ? static_cast<std::size_t>(wrap(k1, grid_points))
                                     : static_cast<std::size_t>(wrap(k1, grid_points)) * grid_points +
                                           static_cast<std::size_t>(wrap(k2, grid_points));
        f.coeffs_[i] = out[j] * scale;
    }
    f.symmetrize();
    return f;
}

double SpectralField::mean() const {
    return coeffs_[index(0, 0)].real() * std::pow(length_, -0.5 * d_);
}

double SpectralField::l2_norm_squared() const {
    double s = 0.0;
    for (const auto& c : coeffs_) s += std::norm(c);
    return s;
}

void SpectralField::symmetrize() {
    // Flat index i and its mirror n-1-i hold k and -k under the row-major layout.
    const std::size_t n = coeffs_.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
        const Complex avg = 0.5 * (coeffs_[i] + std::conj(coeffs_[n - 1 - i]));
        coeffs_[i] = avg;
        coeffs_[n - 1 - i] = std::conj(avg);
    }
    auto& zero = coeffs_[n / 2];
    zero = Complex{zero.real(), 0.0};
}

double SpectralField::symmetry_defect() const {
    const std::size_t n = coeffs_.size();
    double defect = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        defect = std::max(defect, std::abs(coeffs_[i] - std::conj(coeffs_[n - 1 - i])));
    }
    return defect;
}

bool SpectralField::same_shape(const SpectralField& other) const {
    return d_ == other.d_ && length_ == other.length_ && cutoff_ == other.cutoff_;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    require_same_shape(*this, other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    require_same_shape(*this, other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

void require_same_shape(const SpectralField& a, const SpectralField& b) {
    if (!a.same_shape(b)) throw ShapeMismatch("fields differ in dimension, length or cutoff");
}

double hs_norm(const SpectralField& phi, double s) {
    const auto c = phi.coeffs();
    double sum = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        sum += std::pow(1.0 + phi.laplacian_eigenvalue(i), s) * std::norm(c[i]);
    }
    return std::sqrt(sum);
}

SpectralField projected_cube(const SpectralField& phi, int grid_factor) {
    const int m = phi.dealiased_grid(grid_factor);
    auto values = phi.to_grid(m);
    for (auto& v : values) v = v * v * v;
    return SpectralField::from_grid(phi.dim(), phi.length(), phi.cutoff(), m, values);
}

double quartic_integral(const SpectralField& phi, int grid_factor) {
    const int m = phi.dealiased_grid(grid_factor);
    const auto values = phi.to_grid(m);
    double sum = 0.0;
    for (double v : values) sum += v * v * v * v;
    return sum * std::pow(phi.length(), phi.dim()) / static_cast<double>(values.size());
}

}  // namespace metastab
