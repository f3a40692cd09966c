// oracle.hpp - independent checks on the lattice action.
//
//  * brute_force_amplitude integrates the damped Gaussian directly on a
//    tensor trapezoid grid (dimension <= 3) for comparison with the closed form.
//  * stencil residuals compare the lattice operator against the continuum
//    operator -(m d^2/dt^2 + K) on smooth trajectories; the refinement report
//    measures the observed order of that residual.
//
// The damped integrand is exp[i(1/2 Q.(A + i eps I).Q + J.Q)]. eps is a
// regulator of this oracle only; results are reported at the given eps,
// never extrapolated to eps = 0.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Eigenvalues>

#include "pathamp/action_matrix.hpp"
#include "pathamp/amplitude.hpp"
#include "pathamp/errors.hpp"
#include "pathamp/network.hpp"

namespace pathamp::oracle {

struct QuadratureSpec {
    double epsilon = 0.1;
    std::size_t points_per_axis = 801;
    double half_width = 0.0;   // <= 0 selects 8/sqrt(eps): envelope e^-32 at the box edge
    double tolerance = 1e-2;   // reporting tolerance for the refinement check
    bool check_refinement = true;

    double box() const { return half_width > 0.0 ? half_width : 8.0 / std::sqrt(epsilon); }

    void validate() const {
        if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ValidationError("epsilon", "must be positive");
        if (points_per_axis < 3 || points_per_axis % 2 == 0)
            throw ValidationError("points_per_axis", "must be odd and >= 3");
        if (!(half_width >= 0.0) || !std::isfinite(half_width))
            throw ValidationError("half_width", "must be positive (or 0 for the default box)");
        if (!(tolerance > 0.0)) throw ValidationError("tolerance", "must be positive");
    }
};

// Neumaier-compensated complex sum. Summation order is fixed by the grid loop.
class CompensatedSum {
  public:
    void add(cplx v) {
        add_part(re_, cre_, v.real());
        add_part(im_, cim_, v.imag());
    }
    cplx value() const { return {re_ + cre_, im_ + cim_}; }

  private:
    static void add_part(double& s, double& c, double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double re_ = 0.0, im_ = 0.0, cre_ = 0.0, cim_ = 0.0;
};

struct QuadratureResult {
    cplx value;          // at spec.points_per_axis
    cplx refined;        // at 2*points_per_axis - 1
    double refinement_change = 0.0;  // |refined - value| / |refined|
};

// Trapezoid evaluation at the requested grid and at its nested refinement
// (every other node of the fine grid is a coarse node, so one pass gives both).
inline QuadratureResult damped_gaussian_quadrature(const ActionMatrix& a, const SourceVector& j,
                                                   const QuadratureSpec& spec) {
    spec.validate();
    const std::size_t d = a.dim();
    if (d == 0 || d > 3) throw DimensionTooLarge("brute-force quadrature supports dimension 1..3");
    if (j.size() != d) throw ValidationError("source", "length must equal action matrix dimension");

    const ActionMatrix sym = a.symmetrized() ? a : symmetrize(a);
    std::array<std::array<cplx, 3>, 3> m{};
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) m[r][c] = sym(r, c);
    for (std::size_t r = 0; r < d; ++r) m[r][r] += cplx{0.0, spec.epsilon};

    const double box = spec.box();
    const std::size_t fine_pts = 2 * spec.points_per_axis - 1;
    const double h = 2.0 * box / static_cast<double>(fine_pts - 1);
    std::vector<double> x(fine_pts), w(fine_pts, 1.0);
    for (std::size_t i = 0; i < fine_pts; ++i) x[i] = -box + h * static_cast<double>(i);
    w.front() = w.back() = 0.5;

    // Exponent i(1/2 Q.M.Q + J.Q) accumulated axis by axis: on entering axis
    // r the partial exponent and the linear coefficients of the remaining
    // axes are already known.
    const cplx iu{0.0, 1.0};
    CompensatedSum fine, coarse;
    auto walk = [&](auto&& self, std::size_t r, cplx partial, std::array<cplx, 3> linear, double weight,
                    bool on_coarse) -> void {
        for (std::size_t i = 0; i < fine_pts; ++i) {
            const double q = x[i];
            const cplx e = partial + (0.5 * m[r][r] * q + linear[r] + j[r]) * q;
            const double wgt = weight * w[i];
            const bool coarse_node = on_coarse && (i % 2 == 0);
            if (r + 1 == d) {
                const cplx f = std::exp(iu * e) * wgt;
                fine.add(f);
                if (coarse_node) coarse.add(f);
            } else {
                std::array<cplx, 3> next = linear;
                for (std::size_t c = r + 1; c < d; ++c) next[c] += m[r][c] * q;
                self(self, r + 1, e, next, wgt, coarse_node);
            }
        }
    };
    walk(walk, 0, cplx{}, std::array<cplx, 3>{}, 1.0, true);
    const double vol_fine = std::pow(h, static_cast<double>(d));
    const double vol_coarse = std::pow(2.0 * h, static_cast<double>(d));

    QuadratureResult r;
    r.value = coarse.value() * vol_coarse;
    r.refined = fine.value() * vol_fine;
    r.refinement_change = std::abs(r.refined - r.value) / std::abs(r.refined);
    return r;
}

// Quadrature value of the damped Gaussian integral at spec.points_per_axis.
// Throws NonConvergent if doubling the grid moves the result by more than
// 10x the reporting tolerance.
inline Amplitude brute_force_amplitude(const ActionMatrix& a, const SourceVector& j, const QuadratureSpec& spec) {
    auto r = damped_gaussian_quadrature(a, j, spec);
    if (spec.check_refinement && !(r.refinement_change <= 10.0 * spec.tolerance))
        throw NonConvergent("grid refinement changed the quadrature by a relative " +
                            std::to_string(r.refinement_change));
    return Amplitude::from_complex(r.value);
}

// ---------------------------------------------------------------------------
// Continuum-limit residuals

// A smooth trajectory q_a(t) with its exact second derivative.
struct Trajectory {
    std::function<double(std::size_t, double)> value;
    std::function<double(std::size_t, double)> second_derivative;
};

struct StencilResidual {
    std::size_t oscillator;
    double time;
    double residual;
};

// Lattice point n of every oscillator sits at t = (n + 1) dt; t = 0 and
// t = (N + 1) dt are the fixed endpoints.
inline double lattice_time(const OscillatorNetwork& net, std::size_t n) {
    return static_cast<double>(n + 1) * net.dt;
}

// Residual of every interior row (full +-2 stencil inside the lattice):
// (A_sym q)_row / dt + (m q'' + k q + sum_b k_ab q_b)(t_row).
inline std::vector<StencilResidual> stencil_residuals(const OscillatorNetwork& net, const Trajectory& traj) {
    net.validate();
    const ActionMatrix sym = symmetrize(build_action_matrix(net));
    const std::size_t n = net.steps;
    std::vector<double> q(net.dim());
    for (std::size_t a = 0; a < net.num_sources; ++a)
        for (std::size_t t = 0; t < n; ++t) q[a * n + t] = traj.value(a, lattice_time(net, t));
    const auto aq = sym.multiply(std::span<const double>(q));

    std::vector<StencilResidual> out;
    for (std::size_t a = 0; a < net.num_sources; ++a) {
        for (std::size_t t = 2; t + 2 < n; ++t) {
            const double time = lattice_time(net, t);
            double cont = net.mass * traj.second_derivative(a, time) + net.spring * q[a * n + t];
            for (std::size_t b = 0; b < net.num_sources; ++b)
                if (b != a) cont += net.coupling(a, b) * q[b * n + t];
            out.push_back({a, time, aq[a * n + t].real() / net.dt + cont});
        }
    }
    return out;
}

inline double max_stencil_residual(const OscillatorNetwork& net, const Trajectory& traj) {
    double r = 0.0;
    for (const auto& s : stencil_residuals(net, traj)) r = std::max(r, std::abs(s.residual));
    return r;
}

// Normal mode of m q'' + K q = 0 with K = k I + coupling.
struct NormalMode {
    double omega_sq;            // may be <= 0 for unstable couplings
    std::vector<double> shape;  // max |component| = 1, largest component positive
};

// Distinct normal modes sorted by omega^2. Degenerate frequencies are
// reported once.
inline std::vector<NormalMode> normal_modes(const OscillatorNetwork& net) {
    net.validate();
    const std::size_t m_osc = net.num_sources;
    std::vector<NormalMode> modes;
    if (m_osc == 1) {
        modes.push_back({net.spring / net.mass, {1.0}});
    } else if (m_osc == 2) {
        const double k12 = net.k12();
        const double minus = (net.spring - k12) / net.mass;
        const double plus = (net.spring + k12) / net.mass;
        if (k12 == 0.0)
            modes.push_back({plus, {1.0, 1.0}});
        else if (minus < plus)
            modes = {{minus, {1.0, -1.0}}, {plus, {1.0, 1.0}}};
        else
            modes = {{plus, {1.0, 1.0}}, {minus, {1.0, -1.0}}};
    } else {
        Eigen::MatrixXd k(m_osc, m_osc);
        for (std::size_t i = 0; i < m_osc; ++i)
            for (std::size_t j = 0; j < m_osc; ++j) k(i, j) = (i == j ? net.spring : net.coupling(i, j)) / net.mass;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
        for (std::size_t c = 0; c < m_osc; ++c) {
            const double w2 = es.eigenvalues()(static_cast<Eigen::Index>(c));
            if (!modes.empty() && std::abs(w2 - modes.back().omega_sq) <= 1e-12 * std::max(1.0, std::abs(w2)))
                continue;
            std::vector<double> shape(m_osc);
            double big = 0.0;
            for (std::size_t i = 0; i < m_osc; ++i) {
                shape[i] = es.eigenvectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
                if (std::abs(shape[i]) > std::abs(big)) big = shape[i];
            }
            for (double& s : shape) s /= big;
            modes.push_back({w2, std::move(shape)});
        }
    }
    return modes;
}

// Exact solution shape[a] * c(t) with c'' = -omega^2 c: cos, cosh or constant.
inline Trajectory mode_trajectory(const NormalMode& mode) {
    const double w2 = mode.omega_sq;
    std::function<double(double)> c;
    if (w2 > 0.0)
        c = [w = std::sqrt(w2)](double t) { return std::cos(w * t); };
    else if (w2 < 0.0)
        c = [w = std::sqrt(-w2)](double t) { return std::cosh(w * t); };
    else
        c = [](double) { return 1.0; };
    auto shape = mode.shape;
    return {[c, shape](std::size_t a, double t) { return shape[a] * c(t); },
            [c, shape, w2](std::size_t a, double t) { return -w2 * shape[a] * c(t); }};
}

struct ConvergenceRow {
    double dt;
    std::size_t mode;      // index into normal_modes()
    double omega_sq;
    std::size_t steps;     // lattice points used at this dt
    double max_residual;
    double observed_order;  // NaN on the first row of each mode or at the rounding floor
    bool flagged;           // observed order outside [1.6, 2.4]
};

inline constexpr double kOrderLow = 1.6;
inline constexpr double kOrderHigh = 2.4;

// Applies the interior stencil, at each dt in dt_list, to every normal mode
// over the fixed window (0, horizon). The lattice size is horizon/dt - 1.
inline std::vector<ConvergenceRow> continuum_convergence_report(const OscillatorNetwork& net,
                                                                std::span<const double> dt_list,
                                                                double horizon = 4.0) {
    if (dt_list.empty()) throw ValidationError("dt_list", "must not be empty");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ValidationError("horizon", "must be positive");
    for (std::size_t i = 0; i < dt_list.size(); ++i) {
        if (!(dt_list[i] > 0.0) || !std::isfinite(dt_list[i])) throw ValidationError("dt_list", "entries must be positive");
        if (i > 0 && !(dt_list[i] < dt_list[i - 1])) throw ValidationError("dt_list", "must be strictly descending");
    }

    std::vector<ConvergenceRow> rows;
    const auto modes = normal_modes(net);
    for (std::size_t mi = 0; mi < modes.size(); ++mi) {
        const Trajectory traj = mode_trajectory(modes[mi]);
        double prev_res = 0.0, prev_dt = 0.0;
        for (std::size_t i = 0; i < dt_list.size(); ++i) {
            OscillatorNetwork sub = net;
            sub.dt = dt_list[i];
            const long long pts = std::llround(horizon / sub.dt) - 1;
            if (pts < 5) throw ValidationError("dt_list", "dt too large for the horizon (needs >= 5 lattice points)");
            sub.steps = static_cast<std::size_t>(pts);

            ConvergenceRow row{sub.dt, mi, modes[mi].omega_sq, sub.steps, max_stencil_residual(sub, traj),
                               std::numeric_limits<double>::quiet_NaN(), false};
            double max_k = 0.0;
            for (std::size_t a = 0; a < net.num_sources; ++a)
                for (std::size_t b = 0; b < net.num_sources; ++b) max_k = std::max(max_k, std::abs(net.coupling(a, b)));
            const double floor = 1e-12 * (net.mass / (sub.dt * sub.dt) + net.spring + max_k);
            if (i > 0 && !(row.max_residual <= floor && prev_res <= floor)) {
                row.observed_order = std::log(prev_res / row.max_residual) / std::log(prev_dt / sub.dt);
                row.flagged = !(row.observed_order >= kOrderLow && row.observed_order <= kOrderHigh);
            }
            prev_res = row.max_residual;
            prev_dt = sub.dt;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace pathamp::oracle
