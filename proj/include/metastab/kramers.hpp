#pragma once

#include <optional>
#include <string>

#include "metastab/potentials.hpp"

namespace metastab {

/// Arrhenius exponent and Eyring-Kramers prefactor for a mean transition time
///   E[tau] ~ prefactor * exp(barrier / eps).
struct RatePrediction {
    double barrier = 0.0;
    double prefactor = 0.0;
    double lambda_minus = -1.0;
    /// sqrt(|det Hess V(saddle)| / det Hess V(min)), or the inverse square
    /// root of the relevant spectral determinant for Allen-Cahn.
    double determinant_factor = 1.0;
    /// Where each factor came from, e.g. "closed-form Fredholm determinant".
    std::string barrier_source;
    std::string determinant_source;
    /// Bound on |log determinant_factor - its cutoff limit| when the factor
    /// comes from a truncated product.
    std::optional<double> log_tail;
    std::optional<int> cutoff;

    double predict(double epsilon) const;
    double log_predict(double epsilon) const;
};

/// Eyring-Kramers law for a finite-dimensional gradient diffusion from a
/// local minimum over a Morse index 1 saddle.
RatePrediction ek_finite(const CriticalPoint& minimum, const CriticalPoint& saddle, const Potential& p);

/// 1D Allen-Cahn on T_L between the constant states -1 and 0. With no cutoff
/// the closed-form Fredholm determinant is used, otherwise the truncated product.
RatePrediction ek_allen_cahn_1d(double length, std::optional<int> cutoff = std::nullopt);

/// 2D Allen-Cahn with the Carleman-Fredholm determinant at cutoff N and the
/// renormalization-free barrier L^2/4.
RatePrediction ek_allen_cahn_2d(double length, int cutoff);

/// The cutoff-N Galerkin prediction in 2D written with the renormalized
/// barrier L^2/4 + (3/2) L^2 eps C_N and the truncated Fredholm product.
/// Algebraically equal to ek_allen_cahn_2d(L, N).predict(eps) for every N.
RatePrediction ek_allen_cahn_2d_renormalized(double length, int cutoff, double epsilon);

}  // namespace metastab
