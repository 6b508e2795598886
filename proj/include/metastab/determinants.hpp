#pragma once

#include <vector>

namespace metastab {

/// Spectrum of -Laplacian - 1 on T^d_L over the square cutoff max_i |k_i| <= N:
/// nu_k = (2 pi |k| / L)^2 - 1. Ordered like SpectralField coefficients.
struct TorusSpectrum {
    int d = 1;
    double length = 1.0;
    int cutoff = 0;
    std::vector<double> eigenvalues;

    int negative_count() const;
};

TorusSpectrum torus_spectrum(int d, double length, int cutoff);

/// Signed logarithm representation of a product: value = sign * exp(log_abs).
struct SignedLog {
    int sign = 1;
    double log_abs = 0.0;

    double value() const;
    SignedLog& operator*=(const SignedLog& other);
};

enum class DeterminantKind { fredholm, carleman_fredholm };

struct DeterminantResult {
    double value = 0.0;
    double abs_value = 0.0;
    SignedLog log;
    int cutoff = 0;
    /// Bound on |log det - log det_N| from the discarded modes (integral
    /// comparison); for the plain Fredholm product in d = 2 this is +inf.
    double tail_estimate = 0.0;
    DeterminantKind kind = DeterminantKind::fredholm;
};

/// prod_{|k| <= N} (1 + 3 / nu_k) in d = 1.
DeterminantResult fredholm_det_1d(double length, int cutoff);

/// -sinh^2(L / sqrt 2) / sin^2(L / 2), valid for 0 < L < 2 pi.
double fredholm_closed_form(double length);

/// prod_{max|k_i| <= N} (1 + 3 / nu_k) exp(-3 / nu_k) in d = 2.
DeterminantResult carleman_det_2d(double length, int cutoff);

/// Dimension-generic variants. The Fredholm product in d = 2 is the divergent
/// one; it is exposed so the divergence can be observed.
DeterminantResult fredholm_det(int d, double length, int cutoff);
DeterminantResult carleman_det(int d, double length, int cutoff);

/// Trace of P_N (-Laplacian - 1)^{-1}, i.e. sum_k 1 / nu_k.
double resolvent_trace(int d, double length, int cutoff);

/// Wick counterterm constant C_N = L^{-d} Tr P_N (-Laplacian - 1)^{-1}.
double counterterm_trace(double length, int cutoff, int d = 2);

}  // namespace metastab
