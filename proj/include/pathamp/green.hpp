// green.hpp - continuum Green's function of two coupled oscillators.
//
// D solves -(m d^2/dt^2 + K) D(t - t') = delta(t - t') I with
// K = [[k, k12], [k12, k]]. In frequency space
//
//     D_im(tau) = - integral dw/2pi {a(w) or b(w)} e^{i w tau},
//     a(w) = (w^2 m - k) / (k12^2 - (w^2 m - k)^2),
//     b(w) = k12 / (k12^2 - (w^2 m - k)^2).
//
// Poles use the Feynman prescription w^2 -> w^2 + i eps, so each normal
// mode contributes -i e^{-i w0 |tau|} / (2 w0).
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>

#include "pathamp/amplitude.hpp"
#include "pathamp/errors.hpp"
#include "pathamp/network.hpp"

namespace pathamp::green {

namespace detail {
inline void require_pair(const OscillatorNetwork& net) {
    net.validate();
    if (net.num_sources != 2) throw ValidationError("num_sources", "continuum Green's function needs exactly 2 oscillators");
}

// k12^2 - (w^2 m - k)^2, or nullopt at a pole.
inline std::optional<double> kernel_denominator(double k12, double detuning) {
    const double den = k12 * k12 - detuning * detuning;
    const double scale = k12 * k12 + detuning * detuning;
    if (den == 0.0 || std::abs(den) <= 1e-12 * scale) return std::nullopt;
    return den;
}
}  // namespace detail

class GreenKernels {
  public:
    GreenKernels(double mass, double spring, double k12) : m_(mass), k_(spring), k12_(k12) {}

    double mass() const { return m_; }
    double spring() const { return k_; }
    double k12() const { return k12_; }

    // Normal-mode frequencies squared, (k -+ k12)/m.
    double omega_minus_sq() const { return (k_ - k12_) / m_; }
    double omega_plus_sq() const { return (k_ + k12_) / m_; }

    double a_of_omega(double w) const { return (w * w * m_ - k_) / denominator(w); }
    double b_of_omega(double w) const { return k12_ / denominator(w); }

  private:
    double denominator(double w) const {
        auto den = detail::kernel_denominator(k12_, w * w * m_ - k_);
        if (!den) throw PoleAtEvaluation("kernel evaluated at a normal-mode pole, omega = " + std::to_string(w));
        return *den;
    }

    double m_, k_, k12_;
};

inline GreenKernels freq_kernels(const OscillatorNetwork& net) {
    detail::require_pair(net);
    return GreenKernels(net.mass, net.spring, net.k12());
}

struct GreenMatrix {
    std::array<std::array<cplx, 2>, 2> d{};
    bool degenerate = false;  // k12 = 0: off-diagonal identically zero

    cplx operator()(std::size_t i, std::size_t m) const { return d[i][m]; }
};

// -i e^{-i w |tau|} / (2 w) with w = sqrt(w0^2 - i eps), Re w > 0.
inline cplx feynman_mode(double omega_sq, double tau, double eps = 0.0) {
    const cplx w = std::sqrt(cplx{omega_sq, -eps});
    const cplx iu{0.0, 1.0};
    return -iu * std::exp(-iu * w * std::abs(tau)) / (2.0 * w);
}

// D(tau) from the closed-form residues. eps > 0 evaluates the damped
// propagator the quadrature oracle sees; eps = 0 is the limit.
inline GreenMatrix time_domain_green(const OscillatorNetwork& net, double tau, double eps = 0.0) {
    detail::require_pair(net);
    if (!std::isfinite(tau)) throw ValidationError("tau", "must be finite");
    const GreenKernels kern(net.mass, net.spring, net.k12());
    if (!(kern.omega_minus_sq() > 0.0) || !(kern.omega_plus_sq() > 0.0))
        throw UnstableMode("a normal mode has omega^2 <= 0 (|k12| >= k)");

    // a +- b = -1/(m (w^2 - w_pm^2)), which splits D into the two modes.
    const cplx g_plus = feynman_mode(kern.omega_plus_sq(), tau, eps);
    const cplx g_minus = feynman_mode(kern.omega_minus_sq(), tau, eps);
    const double inv2m = 0.5 / net.mass;

    GreenMatrix g;
    g.degenerate = net.k12() == 0.0;
    const cplx diag = inv2m * (g_plus + g_minus);
    const cplx off = g.degenerate ? cplx{} : inv2m * (g_plus - g_minus);
    g.d = {{{diag, off}, {off, diag}}};
    return g;
}

// Smooth source pair f_1(t), f_2(t), zero outside [support_lo, support_hi].
struct SourcePulse {
    std::function<double(double)> f1;
    std::function<double(double)> f2;
    double support_lo = 0.0;
    double support_hi = 0.0;
};

// Unit-height Gaussian exp(-(t - center)^2 / (2 width^2)) on the chosen
// oscillators, truncated at 8 widths.
inline SourcePulse gaussian_pulse(double center, double width, bool on_first, bool on_second) {
    auto g = [center, width](double t) {
        const double z = (t - center) / width;
        return std::exp(-0.5 * z * z);
    };
    auto zero = [](double) { return 0.0; };
    SourcePulse p;
    p.f1 = on_first ? std::function<double(double)>(g) : zero;
    p.f2 = on_second ? std::function<double(double)>(g) : zero;
    p.support_lo = center - 8.0 * width;
    p.support_hi = center + 8.0 * width;
    return p;
}

struct ResidualGrid {
    double quad_step = 2e-3;   // Simpson step for the convolution
    double diff_step = 1e-2;   // five-point second difference
    double sample_lo = -3.0;
    double sample_hi = 3.0;
    std::size_t samples = 121;
};

namespace detail {
template <class F>
cplx simpson(F&& f, double lo, double hi, double step) {
    if (!(hi > lo)) return {};
    std::size_t n = static_cast<std::size_t>(std::ceil((hi - lo) / step));
    if (n % 2) ++n;
    if (n < 2) n = 2;
    const double h = (hi - lo) / static_cast<double>(n);
    cplx s = f(lo) + f(hi);
    for (std::size_t i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + h * static_cast<double>(i));
    return s * (h / 3.0);
}
}  // namespace detail

// q_i(t) = integral D_im(t - t') f_m(t') dt'. The kink of D at t' = t is a
// quadrature breakpoint.
inline std::array<cplx, 2> green_response(const OscillatorNetwork& net, const SourcePulse& src, double t,
                                          double quad_step = 2e-3) {
    detail::require_pair(net);
    auto integrand = [&](std::size_t i) {
        return [&, i](double tp) {
            const GreenMatrix g = time_domain_green(net, t - tp);
            return g(i, 0) * src.f1(tp) + g(i, 1) * src.f2(tp);
        };
    };
    std::array<cplx, 2> q{};
    for (std::size_t i = 0; i < 2; ++i) {
        auto f = integrand(i);
        const double split = std::clamp(t, src.support_lo, src.support_hi);
        q[i] = detail::simpson(f, src.support_lo, split, quad_step) + detail::simpson(f, split, src.support_hi, quad_step);
    }
    return q;
}

// RMS over the sampling grid (both oscillators) of
// -(m q_i'' + k q_i + k12 q_other) - f_i.
inline double green_residual(const OscillatorNetwork& net, const SourcePulse& src, const ResidualGrid& grid = {}) {
    detail::require_pair(net);
    if (grid.samples < 1) throw ValidationError("samples", "must be >= 1");
    const double h = grid.diff_step;
    double sum_sq = 0.0;
    for (std::size_t s = 0; s < grid.samples; ++s) {
        const double t = grid.samples == 1
                             ? grid.sample_lo
                             : grid.sample_lo + (grid.sample_hi - grid.sample_lo) * static_cast<double>(s) /
                                                    static_cast<double>(grid.samples - 1);
        std::array<std::array<cplx, 2>, 5> q{};
        for (int k = -2; k <= 2; ++k) q[static_cast<std::size_t>(k + 2)] = green_response(net, src, t + k * h, grid.quad_step);
        const double f[2] = {src.f1(t), src.f2(t)};
        for (std::size_t i = 0; i < 2; ++i) {
            const cplx qdd = (-q[0][i] + 16.0 * q[1][i] - 30.0 * q[2][i] + 16.0 * q[3][i] - q[4][i]) / (12.0 * h * h);
            const cplx r = -(net.mass * qdd + net.spring * q[2][i] + net.k12() * q[2][1 - i]) - f[i];
            sum_sq += std::norm(r);
        }
    }
    return std::sqrt(sum_sq / static_cast<double>(2 * grid.samples));
}

// A monochromatic line j_1(w)* = gamma delta(w - omega0) linked to a partner
// whose impulse at omega0 is j_value.
struct SpectralSource {
    double gamma = 1.0;
    double omega0 = 1.0;
    double j_value = 0.0;

    void validate() const {
        if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw ValidationError("omega0", "must be positive");
        if (!std::isfinite(gamma)) throw ValidationError("gamma", "must be finite");
        if (!std::isfinite(j_value)) throw ValidationError("j_value", "must be finite");
    }
};

// Extra data needed for the J_1 D_11 J_1 and J_2 D_22 J_2 terms.
struct SelfTerms {
    double source_impulse = 0.0;  // j_1(omega0)
    double partner_gamma = 0.0;   // gamma_2
};

// Exponent coefficient of Z(j) ~ exp[i phase] between two linked sources:
// gamma k12 j_2 / (2 pi hbar (k12^2 - (omega0^2 m - k)^2)).
// With self terms, adds a(omega0)(gamma_1 j_1 + gamma_2 j_2) / (4 pi hbar)
// (each line taken with unit spectral weight).
inline double pairwise_phase(const SpectralSource& s, const OscillatorNetwork& net, double hbar = 1.0,
                             const std::optional<SelfTerms>& self = std::nullopt) {
    detail::require_pair(net);
    s.validate();
    if (!(hbar > 0.0)) throw ValidationError("hbar", "must be positive");
    const double k12 = net.k12();
    const double detuning = s.omega0 * s.omega0 * net.mass - net.spring;
    auto den = detail::kernel_denominator(k12, detuning);
    if (!den) throw ResonantCoupling("k12^2 = (omega0^2 m - k)^2: line sits on a coupled pole");
    double phase = s.gamma * k12 * s.j_value / (2.0 * std::numbers::pi * hbar * *den);
    if (self) {
        const double a = detuning / *den;
        phase += a * (s.gamma * self->source_impulse + self->partner_gamma * s.j_value) / (4.0 * std::numbers::pi * hbar);
    }
    return phase;
}

}  // namespace pathamp::green
