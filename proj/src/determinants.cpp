#include "metastab/determinants.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "metastab/errors.hpp"

namespace metastab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_subcritical_length(double length) {
    if (!(length > 0.0) || !(length < kTwoPi)) {
        throw DomainError("torus length must satisfy 0 < L < 2 pi");
    }
}

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

DeterminantResult finish(SignedLog log, int cutoff, double tail, DeterminantKind kind) {
    DeterminantResult r;
    r.log = log;
    r.value = log.value();
    r.abs_value = std::abs(r.value);
    r.cutoff = cutoff;
    r.tail_estimate = tail;
    r.kind = kind;
    return r;
}

/// Upper bound on sum over discarded modes of 3 / nu_k (d = 1).
double fredholm_tail_1d(double length, int cutoff) {
    const double a = std::pow(kTwoPi / length, 2);
    const double x = cutoff + 1.0;
    const double sa = std::sqrt(a);
    const double first = 3.0 / (a * x * x - 1.0);
    const double integral = 3.0 / (2.0 * sa) * std::log((sa * x + 1.0) / (sa * x - 1.0));
    return 2.0 * (first + integral);
}

/// Upper bound on sum over discarded modes of 9 / (2 nu_k^2).
double carleman_tail(int d, double length, int cutoff) {
    const double a = std::pow(kTwoPi / length, 2);
    const double x = cutoff + 1.0;
    const double b = a - 1.0 / (x * x);
    if (d == 1) {
        const double first = 9.0 / (2.0 * std::pow(a * x * x - 1.0, 2));
        return 2.0 * (first + 3.0 / (2.0 * b * b * x * x * x));
    }
    return 36.0 / (b * b) * (1.0 / (x * x * x) + 1.0 / (2.0 * x * x));
}

}  // namespace

int TorusSpectrum::negative_count() const {
    int n = 0;
    for (double v : eigenvalues) n += v < 0.0 ? 1 : 0;
    return n;
}

TorusSpectrum torus_spectrum(int d, double length, int cutoff) {
    if (d != 1 && d != 2) throw InvalidArgument("torus spectrum supports d = 1 or 2");
    if (!(length > 0.0)) throw DomainError("torus length must be positive");
    if (cutoff < 0) throw InvalidArgument("cutoff must be nonnegative");
    TorusSpectrum s;
    s.d = d;
    s.length = length;
    s.cutoff = cutoff;
    const double q2 = std::pow(kTwoPi / length, 2);
    if (d == 1) {
        s.eigenvalues.reserve(static_cast<std::size_t>(2 * cutoff + 1));
        for (int k = -cutoff; k <= cutoff; ++k) s.eigenvalues.push_back(q2 * k * k - 1.0);
    } else {
        s.eigenvalues.reserve(static_cast<std::size_t>((2 * cutoff + 1) * (2 * cutoff + 1)));
        for (int k1 = -cutoff; k1 <= cutoff; ++k1) {
            for (int k2 = -cutoff; k2 <= cutoff; ++k2) {
                s.eigenvalues.push_back(q2 * (k1 * k1 + k2 * k2) - 1.0);
            }
        }
    }
    for (double v : s.eigenvalues) {
        if (v == 0.0) throw DomainError("-Laplacian - 1 has a zero eigenvalue at this length");
    }
    return s;
}

double SignedLog::value() const { return sign * std::exp(log_abs); }

SignedLog& SignedLog::operator*=(const SignedLog& other) {
    sign *= other.sign;
    log_abs += other.log_abs;
    return *this;
}

DeterminantResult fredholm_det(int d, double length, int cutoff) {
    const auto spec = torus_spectrum(d, length, cutoff);
    SignedLog log;
    CompensatedSum acc;
    for (double nu : spec.eigenvalues) {
        const double factor = 1.0 + 3.0 / nu;
        if (factor == 0.0) throw DomainError("vanishing Fredholm factor");
        if (factor < 0.0) log.sign = -log.sign;
        acc.add(std::log(std::abs(factor)));
    }
    log.log_abs = acc.value();
    double tail = std::numeric_limits<double>::infinity();
    if (d == 1 && length < kTwoPi) tail = fredholm_tail_1d(length, cutoff);
    return finish(log, cutoff, tail, DeterminantKind::fredholm);
}

DeterminantResult carleman_det(int d, double length, int cutoff) {
    const auto spec = torus_spectrum(d, length, cutoff);
    SignedLog log;
    CompensatedSum acc;
    for (double nu : spec.eigenvalues) {
        const double y = 3.0 / nu;
        const double factor = 1.0 + y;
        if (factor == 0.0) throw DomainError("vanishing Carleman-Fredholm factor");
        if (factor < 0.0) log.sign = -log.sign;
        acc.add(std::log(std::abs(factor)) - y);
    }
    log.log_abs = acc.value();
    const double tail = length < kTwoPi ? carleman_tail(d, length, cutoff)
                                        : std::numeric_limits<double>::infinity();
    return finish(log, cutoff, tail, DeterminantKind::carleman_fredholm);
}

DeterminantResult fredholm_det_1d(double length, int cutoff) {
    require_subcritical_length(length);
    return fredholm_det(1, length, cutoff);
}

DeterminantResult carleman_det_2d(double length, int cutoff) {
    require_subcritical_length(length);
    return carleman_det(2, length, cutoff);
}

double fredholm_closed_form(double length) {
    require_subcritical_length(length);
    const double num = std::sinh(length / std::numbers::sqrt2);
    const double den = std::sin(length / 2.0);
    return -(num * num) / (den * den);
}

double resolvent_trace(int d, double length, int cutoff) {
    const auto spec = torus_spectrum(d, length, cutoff);
    CompensatedSum acc;
    for (double nu : spec.eigenvalues) acc.add(1.0 / nu);
    return acc.value();
}

double counterterm_trace(double length, int cutoff, int d) {
    return resolvent_trace(d, length, cutoff) / std::pow(length, d);
}

}  // namespace metastab
