// amplitude.hpp - complex amplitudes stored as (log|z|, arg z).
//
// Determinants of large action matrices overflow a double long before the
// amplitude itself becomes meaningless, so amplitudes are carried in log
// form and only exponentiated on request.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace pathamp {

using cplx = std::complex<double>;

// Reduce an angle to (-pi, pi].
inline double wrap_phase(double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::remainder(phi, two_pi);  // [-pi, pi]
    if (r <= -std::numbers::pi) r += two_pi;
    return r;
}

struct Amplitude {
    double log_magnitude = 0.0;
    double phase = 0.0;  // (-pi, pi]

    static Amplitude from_complex(cplx z) {
        return {std::log(std::abs(z)), wrap_phase(std::arg(z))};
    }

    static Amplitude from_log_phase(double log_magnitude, double phase) {
        return {log_magnitude, wrap_phase(phase)};
    }

    double magnitude() const { return std::exp(log_magnitude); }
    cplx to_complex() const { return std::polar(magnitude(), phase); }

    friend Amplitude operator*(const Amplitude& a, const Amplitude& b) {
        return from_log_phase(a.log_magnitude + b.log_magnitude, a.phase + b.phase);
    }
};

// Phase difference a - b reduced to (-pi, pi]; the right way to compare phases.
inline double phase_distance(double a, double b) { return std::abs(wrap_phase(a - b)); }

}  // namespace pathamp
