#include "metastab/kramers.hpp"

#include <cmath>
#include <numbers>

#include "metastab/determinants.hpp"
#include "metastab/errors.hpp"

namespace metastab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double RatePrediction::predict(double epsilon) const { return std::exp(log_predict(epsilon)); }

double RatePrediction::log_predict(double epsilon) const {
    if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
    return std::log(prefactor) + barrier / epsilon;
}

RatePrediction ek_finite(const CriticalPoint& minimum, const CriticalPoint& saddle, const Potential& p) {
    if (minimum.kind != CriticalKind::minimum) throw WrongKind("first argument is not a minimum");
    if (saddle.kind != CriticalKind::saddle || !saddle.lambda_minus) throw WrongKind("second argument is not a saddle");
    const auto& em = minimum.hessian_eigenvalues;
    const auto& es = saddle.hessian_eigenvalues;
    if (em.size() != es.size() || em.size() != p.dim()) throw ShapeMismatch("Hessian dimensions differ");
    if (em.cwiseAbs().minCoeff() == 0.0 || es.cwiseAbs().minCoeff() == 0.0) {
        throw DegenerateHessian("zero Hessian eigenvalue");
    }
    // Pair the ascending spectra so each log-ratio stays O(1) in high dimension.
    double log_ratio = 0.0;
    for (Eigen::Index i = 0; i < em.size(); ++i) log_ratio += std::log(std::abs(es(i)) / em(i));

    RatePrediction r;
    r.barrier = p.value(saddle.location) - p.value(minimum.location);
    r.lambda_minus = *saddle.lambda_minus;
    r.determinant_factor = std::exp(0.5 * log_ratio);
    r.prefactor = kTwoPi / std::abs(r.lambda_minus) * r.determinant_factor;
    r.barrier_source = "V(saddle) - V(minimum)";
    r.determinant_source = "Hessian eigenvalues at saddle and minimum";
    return r;
}

RatePrediction ek_allen_cahn_1d(double length, std::optional<int> cutoff) {
    if (!(length > 0.0) || !(length < kTwoPi)) throw DomainError("Allen-Cahn law requires 0 < L < 2 pi");
    RatePrediction r;
    r.barrier = 0.25 * length;
    r.lambda_minus = -1.0;
    r.barrier_source = "V(0) - V(-1) = L/4";
    if (cutoff) {
        const auto det = fredholm_det_1d(length, *cutoff);
        r.determinant_factor = std::exp(-0.5 * det.log.log_abs);
        r.log_tail = 0.5 * det.tail_estimate;
        r.cutoff = *cutoff;
        r.determinant_source = "truncated Fredholm product";
    } else {
        r.determinant_factor = 1.0 / std::sqrt(std::abs(fredholm_closed_form(length)));
        r.determinant_source = "closed-form Fredholm determinant";
    }
    r.prefactor = kTwoPi / std::abs(r.lambda_minus) * r.determinant_factor;
    return r;
}

RatePrediction ek_allen_cahn_2d(double length, int cutoff) {
    const auto det = carleman_det_2d(length, cutoff);
    RatePrediction r;
    r.barrier = 0.25 * length * length;
    r.lambda_minus = -1.0;
    r.determinant_factor = std::exp(-0.5 * det.log.log_abs);
    r.prefactor = kTwoPi / std::abs(r.lambda_minus) * r.determinant_factor;
    r.log_tail = 0.5 * det.tail_estimate;
    r.cutoff = cutoff;
    r.barrier_source = "V(0) - V(-1) = L^2/4, no renormalization";
    r.determinant_source = "Carleman-Fredholm determinant";
    return r;
}

RatePrediction ek_allen_cahn_2d_renormalized(double length, int cutoff, double epsilon) {
    if (!(length > 0.0) || !(length < kTwoPi)) throw DomainError("Allen-Cahn law requires 0 < L < 2 pi");
    if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
    const auto det = fredholm_det(2, length, cutoff);
    const double l2 = length * length;
    RatePrediction r;
    r.barrier = 0.25 * l2 + 1.5 * l2 * epsilon * counterterm_trace(length, cutoff, 2);
    r.lambda_minus = -1.0;
    r.determinant_factor = std::exp(-0.5 * det.log.log_abs);
    r.prefactor = kTwoPi / std::abs(r.lambda_minus) * r.determinant_factor;
    r.cutoff = cutoff;
    r.barrier_source = "renormalized V_N(0) - V_N(-1) = L^2/4 + (3/2) L^2 eps C_N";
    r.determinant_source = "truncated Fredholm product";
    return r;
}

}  // namespace metastab
