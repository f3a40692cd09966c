// gaussian.hpp - closed-form value of the oscillatory Gaussian integral
//
//     Z = integral dQ exp[(i/2) Q.A.Q + i J.Q]
//       = ((2 pi i)^n / det A)^(1/2) exp[-(i/2) J.A^-1.J]
//
// for an n-dimensional lattice action A.
//
// Branch of the square root: the integral factorizes into n one-dimensional
// Fresnel integrals, sqrt(2 pi i / d_j) each, where d_j are the pivots of an
// unpivoted symmetric elimination (Im d_j >= 0 whenever Im A >= 0). The
// overall phase is therefore n*pi/4 - (sum_j arg d_j)/2 with every arg d_j
// taken in [0, pi]. This is the analytic continuation from A + i0 and makes
// the amplitude multiplicative over decoupled blocks. Phases are reported
// in (-pi, pi].
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <numbers>
#include <vector>

#include "pathamp/action_matrix.hpp"
#include "pathamp/amplitude.hpp"
#include "pathamp/band_lu.hpp"

namespace pathamp {

struct AmplitudeReport {
    Amplitude amplitude;
    Amplitude det;               // det A (log|det|, arg det)
    double det_winding = 0.0;    // sum_j arg d_j, unwrapped, in [0, n*pi]
    cplx source_term{};          // J.A^-1.J
    Amplitude exp_factor;        // exp[-(i/2) J.A^-1.J]
};

namespace detail {

inline double upper_half_arg(cplx d) {
    double a = std::arg(d);
    if (a < 0.0) a = d.real() < 0.0 ? std::numbers::pi : 0.0;  // rounding below the real axis
    return a;
}

// Sum of pivot arguments in [0, n*pi], consistent with arg det to rounding.
inline double det_winding(const ActionMatrix& sym, double arg_det) {
    auto pivots = symmetric_pivots(sym);
    if (pivots.empty()) {
        // A leading minor vanished. The winding is continuous in A + i delta I
        // as delta -> 0+, so count it slightly off the real axis.
        double scale = 0.0;
        for (std::size_t i = 0; i < sym.dim(); ++i) scale = std::max(scale, std::abs(sym(i, i)));
        pivots = symmetric_pivots(with_damping(sym, 1e-8 * std::max(scale, 1.0)));
        if (pivots.empty()) throw SingularAction("unable to factor symmetric action matrix");
    }
    double rough = 0.0;
    for (cplx d : pivots) rough += upper_half_arg(d);
    // Take the precise value from the pivoted LU and the branch from the pivots.
    double turns = std::round((rough - arg_det) / (2.0 * std::numbers::pi));
    return arg_det + 2.0 * std::numbers::pi * turns;
}

// A x = b with two rounds of iterative refinement; residuals are formed in
// long double so the result does not depend on the elimination order
// (relabeled oscillators give the same J.A^-1.J to rounding).
inline std::vector<cplx> refined_solve(const ActionMatrix& a, const BandLU& lu, std::span<const double> b) {
    std::vector<cplx> x = lu.solve(std::vector<cplx>(b.begin(), b.end()));
    const std::size_t n = a.dim();
    const std::size_t lo_bw = a.lower_bandwidth(), hi_bw = a.upper_bandwidth();
    std::vector<cplx> res(n);
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < n; ++i) {
            std::complex<long double> acc(b[i]);
            const std::size_t first = i >= lo_bw ? i - lo_bw : 0, last = std::min(n - 1, i + hi_bw);
            for (std::size_t k = first; k <= last; ++k)
                acc -= std::complex<long double>(a(i, k)) * std::complex<long double>(x[k]);
            res[i] = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
        }
        const auto dx = lu.solve(res);
        for (std::size_t i = 0; i < n; ++i) x[i] += dx[i];
    }
    return x;
}

}  // namespace detail

// Full evaluation with intermediate quantities. A is symmetrized first if needed.
inline AmplitudeReport transition_amplitude_report(const ActionMatrix& a, const SourceVector& j) {
    if (j.size() != a.dim()) throw ValidationError("source", "length must equal action matrix dimension");
    const ActionMatrix sym = a.symmetrized() ? a : symmetrize(a);
    const BandLU lu(sym);
    if (lu.singular()) throw SingularAction("det(A) vanishes within tolerance");

    AmplitudeReport r;
    r.det = lu.det();
    r.det_winding = detail::det_winding(sym, r.det.phase);

    if (!j.is_zero()) {
        const auto x = detail::refined_solve(sym, lu, j.values());
        std::complex<long double> s{};
        for (std::size_t i = 0; i < x.size(); ++i) s += static_cast<long double>(j[i]) * std::complex<long double>(x[i]);
        r.source_term = {static_cast<double>(s.real()), static_cast<double>(s.imag())};
    }
    // -(i/2) w = Im(w)/2 - i Re(w)/2
    r.exp_factor = {0.5 * r.source_term.imag(), wrap_phase(-0.5 * r.source_term.real())};

    const double n = static_cast<double>(a.dim());
    const double log_mag = 0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * r.det.log_magnitude +
                           r.exp_factor.log_magnitude;
    // Same value as n pi/4 - winding/2 - Re(w)/2, assembled from reduced
    // terms so that large n does not cost absolute phase accuracy.
    const double turns = std::round((r.det_winding - r.det.phase) / (2.0 * std::numbers::pi));
    const double eighths = static_cast<double>(a.dim() % 8);
    const double phase = 0.25 * eighths * std::numbers::pi - 0.5 * r.det.phase -
                         (std::fmod(turns, 2.0) != 0.0 ? std::numbers::pi : 0.0) - 0.5 * r.source_term.real();
    r.amplitude = Amplitude::from_log_phase(log_mag, phase);
    return r;
}

inline Amplitude transition_amplitude(const ActionMatrix& a, const SourceVector& j) {
    return transition_amplitude_report(a, j).amplitude;
}

}  // namespace pathamp
