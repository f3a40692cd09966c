// twin_slit.hpp - four-source twin-slit amplitude and its free-particle
// counterpart.
//
// Sources: 1 emitter, 2 and 4 slits, 3 detector. Each leg i -> m carries a
// monochromatic line of strength gamma_i at omega0 and a coupling k_im; the
// leg contributes gamma_i d_im j_m / (2 pi hbar) to the path phase, with
//
//     d_im = k_im / (k_im^2 - (omega0^2 m - k)^2).
//
// Only the chains 1 -> 2 -> 3 and 1 -> 4 -> 3 are kept; all other pairings of
// the four sources are dropped. Matching the detector-leg phases against
// free-particle phases p x / (2 hbar) assigns each coupled pair a separation x.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pathamp/amplitude.hpp"
#include "pathamp/errors.hpp"

namespace pathamp::twin {

// Intrinsic characteristics shared by all sources: oscillator mass,
// stiffness, and line frequency.
struct LineMedium {
    double mass = 1.0;
    double spring = 1.0;
    double omega0 = 1.0;

    double detuning() const { return omega0 * omega0 * mass - spring; }
};

struct TwinSlitScenario {
    LineMedium medium;
    double gamma1 = 1.0, gamma2 = 1.0, gamma4 = 1.0;
    double j2 = 0.0, j3 = 0.0, j4 = 0.0;
    double k12 = 0.0, k14 = 0.0, k23 = 0.0, k43 = 0.0;
    double hbar = 1.0;

    void validate() const {
        auto finite = [](double v, const char* name) {
            if (!std::isfinite(v)) throw ValidationError(name, "must be finite");
        };
        if (!(medium.mass > 0.0) || !std::isfinite(medium.mass)) throw ValidationError("mass", "must be positive");
        finite(medium.spring, "spring");
        finite(medium.omega0, "omega0");
        finite(gamma1, "gamma1");
        finite(gamma2, "gamma2");
        finite(gamma4, "gamma4");
        finite(j2, "j2");
        finite(j3, "j3");
        finite(j4, "j4");
        finite(k12, "k12");
        finite(k14, "k14");
        finite(k23, "k23");
        finite(k43, "k43");
        if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ValidationError("hbar", "must be positive");
    }
};

struct SchrodingerSide {
    double exchange_mass = 1.0;  // mass of the exchanged free particle, not the oscillator mass
    double interaction_time = 1.0;
    double x12 = 1.0;
    double x23 = 1.0;
    double x43 = 1.0;
    cplx alpha{1.0, 0.0};

    // p = m x12 / t
    double momentum() const { return exchange_mass * x12 / interaction_time; }

    void validate() const {
        if (!(exchange_mass > 0.0) || !std::isfinite(exchange_mass))
            throw ValidationError("exchange_mass", "must be positive");
        if (!(interaction_time > 0.0) || !std::isfinite(interaction_time))
            throw ValidationError("interaction_time", "must be positive");
        if (!std::isfinite(x12)) throw ValidationError("x12", "must be finite");
        if (!std::isfinite(x23)) throw ValidationError("x23", "must be finite");
        if (!std::isfinite(x43)) throw ValidationError("x43", "must be finite");
        if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
            throw ValidationError("alpha", "must be finite");
    }
};

// e^{i a} + e^{i b}, kept as its two phases.
struct PhasorPair {
    double first = 0.0;
    double second = 0.0;

    cplx value() const { return std::polar(1.0, first) + std::polar(1.0, second); }
    double phase_difference() const { return first - second; }
};

// |psi|^2
inline double intensity(cplx psi) { return std::norm(psi); }

// |e^{ia} + e^{ib}|^2 = 4 cos^2((a - b)/2), exact to rounding and inside [0, 4].
inline double intensity(const PhasorPair& psi) {
    const double c = std::cos(0.5 * psi.phase_difference());
    return 4.0 * c * c;
}

inline double coupling_coefficient(double k_im, const LineMedium& med) {
    const double u = med.detuning();
    const double den = k_im * k_im - u * u;
    if (den == 0.0 || std::abs(den) <= 1e-12 * (k_im * k_im + u * u))
        throw ResonantCoupling("k_im = " + std::to_string(k_im) + " sits on the pole k_im^2 = (omega0^2 m - k)^2");
    return k_im / den;
}

// Inverse of coupling_coefficient on the weak-coupling branch |k_im| < |u|,
// the branch continuous through d = 0.
inline double coupling_for_coefficient(double d, const LineMedium& med) {
    const double u2 = med.detuning() * med.detuning();
    return -2.0 * d * u2 / (1.0 + std::sqrt(1.0 + 4.0 * d * d * u2));
}

namespace detail {
inline double leg_phase(double gamma, double d, double j, double hbar) {
    return gamma * d * j / (2.0 * std::numbers::pi * hbar);
}
}  // namespace detail

// psi ~ exp[i(G1 d12 j2 + G2 d23 j3)/(2 pi hbar)] + exp[i(G1 d14 j4 + G4 d43 j3)/(2 pi hbar)]
inline PhasorPair four_source_amplitude(const TwinSlitScenario& sc) {
    sc.validate();
    const auto& med = sc.medium;
    const double d12 = coupling_coefficient(sc.k12, med);
    const double d14 = coupling_coefficient(sc.k14, med);
    const double d23 = coupling_coefficient(sc.k23, med);
    const double d43 = coupling_coefficient(sc.k43, med);
    const double two_pi_hbar = 2.0 * std::numbers::pi * sc.hbar;
    return {(sc.gamma1 * d12 * sc.j2 + sc.gamma2 * d23 * sc.j3) / two_pi_hbar,
            (sc.gamma1 * d14 * sc.j4 + sc.gamma4 * d43 * sc.j3) / two_pi_hbar};
}

// True when the emitter legs carry the same phase, G1 d12 j2 = G1 d14 j4.
inline bool is_equidistant(const TwinSlitScenario& sc, double rel_tol = 1e-12) {
    const double a = sc.gamma1 * coupling_coefficient(sc.k12, sc.medium) * sc.j2;
    const double b = sc.gamma1 * coupling_coefficient(sc.k14, sc.medium) * sc.j4;
    return std::abs(a - b) <= rel_tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

// Emitter equidistant from both slits: the common emitter phase is dropped,
// psi ~ exp[i G2 d23 j3/(2 pi hbar)] + exp[i G4 d43 j3/(2 pi hbar)].
inline PhasorPair equidistant_amplitude(const TwinSlitScenario& sc, double rel_tol = 1e-12) {
    sc.validate();
    if (!is_equidistant(sc, rel_tol)) throw EquidistanceViolated("G1 d12 j2 != G1 d14 j4");
    const auto& med = sc.medium;
    return {detail::leg_phase(sc.gamma2, coupling_coefficient(sc.k23, med), sc.j3, sc.hbar),
            detail::leg_phase(sc.gamma4, coupling_coefficient(sc.k43, med), sc.j3, sc.hbar)};
}

// Common emitter-leg phase G1 d12 j2 / (2 pi hbar).
inline double emitter_phase(const TwinSlitScenario& sc) {
    return detail::leg_phase(sc.gamma1, coupling_coefficient(sc.k12, sc.medium), sc.j2, sc.hbar);
}

// Self-interaction phases of the two slit sources, a(omega0) G_s j_s / (4 pi hbar)
// with a taken on the emitter-slit link. The chain amplitude omits these.
inline PhasorPair slit_self_phases(const TwinSlitScenario& sc) {
    sc.validate();
    const double u = sc.medium.detuning();
    auto self = [&](double k, double gamma, double j) {
        const double den = k * k - u * u;
        if (den == 0.0 || std::abs(den) <= 1e-12 * (k * k + u * u)) throw ResonantCoupling("self term at a pole");
        return (u / den) * gamma * j / (4.0 * std::numbers::pi * sc.hbar);
    };
    return {self(sc.k12, sc.gamma2, sc.j2), self(sc.k14, sc.gamma4, sc.j4)};
}

// U(x2, t; x1, 0) = sqrt(m / (2 pi hbar i t)) exp[i m (x2 - x1)^2 / (2 hbar t)]
inline cplx schrodinger_propagator(double x2, double x1, double t, const SchrodingerSide& side, double hbar = 1.0) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("t", "must be positive");
    if (!(hbar > 0.0)) throw ValidationError("hbar", "must be positive");
    const double m = side.exchange_mass;
    const cplx iu{0.0, 1.0};
    const cplx prefactor = std::sqrt(m / (2.0 * std::numbers::pi * hbar * iu * t));
    const double dx = x2 - x1;
    return prefactor * std::exp(iu * (m * dx * dx / (2.0 * hbar * t)));
}

// psi_12 for a point source alpha delta(x' - x1):
// alpha sqrt(m / (2 pi hbar i t)) exp[i p x12 / (2 hbar)].
inline cplx source_wavefunction(const SchrodingerSide& side, double hbar = 1.0) {
    side.validate();
    const double t = side.interaction_time;
    const cplx iu{0.0, 1.0};
    const cplx prefactor = std::sqrt(side.exchange_mass / (2.0 * std::numbers::pi * hbar * iu * t));
    return side.alpha * prefactor * std::exp(iu * (side.momentum() * side.x12 / (2.0 * hbar)));
}

struct SchrodingerTwoPath {
    PhasorPair psi;
    bool far_field = true;  // x12, x23, x43 all >= 10 hbar / |p|
};

inline constexpr double kFarFieldFactor = 10.0;

// psi ~ exp[i p x23 / (2 hbar)] + exp[i p x43 / (2 hbar)], p = m x12 / t.
// A near-field geometry is reported through far_field, not rejected.
inline SchrodingerTwoPath schrodinger_two_path(const SchrodingerSide& side, double hbar = 1.0) {
    side.validate();
    if (!(hbar > 0.0)) throw ValidationError("hbar", "must be positive");
    const double p = side.momentum();
    SchrodingerTwoPath out;
    out.psi = {p * side.x23 / (2.0 * hbar), p * side.x43 / (2.0 * hbar)};
    const double reach = p == 0.0 ? INFINITY : kFarFieldFactor * hbar / std::abs(p);
    out.far_field = std::abs(side.x12) >= reach && std::abs(side.x23) >= reach && std::abs(side.x43) >= reach;
    return out;
}

struct DistanceResult {
    double x = 0.0;      // inferred separation
    double scale = 0.0;  // x = scale * gamma * d
    double d = 0.0;      // coupling coefficient d_im
};

// Solves (p / 2 hbar) x = gamma d j / (2 pi hbar) for x, i.e.
// x = gamma d j / (pi p). hbar cancels.
inline DistanceResult infer_distance(double gamma, double k_im, double j, const LineMedium& med, double momentum) {
    if (momentum == 0.0 || !std::isfinite(momentum)) throw ZeroMomentum("momentum transfer p must be nonzero");
    DistanceResult r;
    r.d = coupling_coefficient(k_im, med);
    r.scale = j / (std::numbers::pi * momentum);
    r.x = gamma * r.d * r.scale;
    return r;
}

// Proportional form with j = c p: x = (c / pi) gamma d.
inline DistanceResult infer_distance_proportional(double gamma, double k_im, const LineMedium& med,
                                                  double impulse_per_momentum = 1.0) {
    DistanceResult r;
    r.d = coupling_coefficient(k_im, med);
    r.scale = impulse_per_momentum / std::numbers::pi;
    r.x = gamma * r.d * r.scale;
    return r;
}

struct ScanRow {
    std::size_t index = 0;  // position in the schedule
    double k23 = 0.0, k43 = 0.0;
    double d23 = 0.0, d43 = 0.0;
    PhasorPair discrete;       // four-source phases
    PhasorPair detector_legs;  // equidistant phases G d j3 / (2 pi hbar)
    double x23 = 0.0, x43 = 0.0;
    PhasorPair schrodinger;    // p x / (2 hbar) from the inferred separations
    double discrete_intensity = 0.0;
    double schrodinger_intensity = 0.0;
    PhasorPair self_phases;    // filled when requested
    double intensity_with_self = 0.0;
};

struct ScanResult {
    std::vector<ScanRow> rows;
    std::vector<std::size_t> skipped;  // schedule indices at a resonance
};

struct ScanOptions {
    bool include_self_terms = false;
};

// Sweeps the slit-detector couplings (k23, k43) over the schedule.
// Requires an equidistant emitter. Resonant pairs are skipped and listed.
inline ScanResult pattern_scan(const TwinSlitScenario& sc, const SchrodingerSide& side,
                               std::span<const std::pair<double, double>> schedule, ScanOptions opts = {}) {
    sc.validate();
    side.validate();
    if (!is_equidistant(sc)) throw EquidistanceViolated("pattern scan needs G1 d12 j2 = G1 d14 j4");
    const double p = side.momentum();
    if (p == 0.0) throw ZeroMomentum("momentum transfer p = m x12 / t is zero");

    ScanResult out;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        TwinSlitScenario point = sc;
        point.k23 = schedule[i].first;
        point.k43 = schedule[i].second;
        try {
            ScanRow row;
            row.index = i;
            row.k23 = point.k23;
            row.k43 = point.k43;
            row.discrete = four_source_amplitude(point);
            row.detector_legs = equidistant_amplitude(point);
            const auto r23 = infer_distance(point.gamma2, point.k23, point.j3, point.medium, p);
            const auto r43 = infer_distance(point.gamma4, point.k43, point.j3, point.medium, p);
            row.d23 = r23.d;
            row.d43 = r43.d;
            row.x23 = r23.x;
            row.x43 = r43.x;
            SchrodingerSide matched = side;
            matched.x23 = r23.x;
            matched.x43 = r43.x;
            row.schrodinger = schrodinger_two_path(matched, sc.hbar).psi;
            row.discrete_intensity = intensity(row.discrete);
            row.schrodinger_intensity = intensity(row.schrodinger);
            if (opts.include_self_terms) {
                row.self_phases = slit_self_phases(point);
                row.intensity_with_self = intensity(PhasorPair{row.discrete.first + row.self_phases.first,
                                                               row.discrete.second + row.self_phases.second});
            }
            out.rows.push_back(row);
        } catch (const ResonantCoupling&) {
            out.skipped.push_back(i);
        }
    }
    return out;
}

}  // namespace pathamp::twin
