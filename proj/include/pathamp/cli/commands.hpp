// commands.hpp - the four pathamp subcommands. Each writes CSV (header row,
// LF endings, 17 significant digits) to a stream and returns an exit code.
#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pathamp/action_matrix.hpp"
#include "pathamp/cli/config.hpp"
#include "pathamp/gaussian.hpp"
#include "pathamp/oracle.hpp"
#include "pathamp/twin_slit.hpp"

namespace pathamp::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kInvalid = 2,
    kSingular = 3,
    kResonant = 4,
};

struct RunOptions {
    bool oracle = false;
    bool include_self_terms = false;
    bool round_trip = false;
};

// Every schedule point hit a resonance; nothing to write.
class NoUsablePoints : public Error {
    using Error::Error;
};

inline std::string fmt_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);  // + 0.0 folds -0 into 0
    return buf;
}

class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) os_ << (i ? "," : "") << cols[i];
        os_ << '\n';
    }

    CsvWriter& cell(const std::string& s) {
        os_ << (first_ ? "" : ",") << s;
        first_ = false;
        return *this;
    }
    CsvWriter& cell(double v) { return cell(fmt_real(v)); }
    CsvWriter& cell(std::size_t v) { return cell(std::to_string(v)); }
    CsvWriter& cell(bool v) { return cell(std::string(v ? "1" : "0")); }

    void end_row() {
        os_ << '\n';
        first_ = true;
    }

  private:
    std::ostream& os_;
    bool first_ = true;
};

// Columns: log_magnitude, phase, det_log_magnitude, det_phase, jaj_re, jaj_im,
// exp_factor_log_magnitude, exp_factor_phase; with --oracle also epsilon,
// closed_log_magnitude, closed_phase, quadrature_log_magnitude,
// quadrature_phase, relative_difference, refinement_change, agrees.
inline int cmd_amplitude(const ScenarioConfig& cfg, const RunOptions& opt, std::ostream& out, std::ostream& err) {
    const auto& group = require_network(cfg);
    const OscillatorNetwork net = build_network(group, true);
    const SourceVector j = build_source(group, net);
    const ActionMatrix a = build_action_matrix(net);
    const AmplitudeReport rep = transition_amplitude_report(a, j);

    CsvWriter csv(out);
    std::vector<std::string> cols{"log_magnitude", "phase",  "det_log_magnitude",        "det_phase",
                                  "jaj_re",        "jaj_im", "exp_factor_log_magnitude", "exp_factor_phase"};
    if (opt.oracle)
        cols.insert(cols.end(), {"epsilon", "closed_log_magnitude", "closed_phase", "quadrature_log_magnitude",
                                 "quadrature_phase", "relative_difference", "refinement_change", "agrees"});
    csv.header(cols);
    csv.cell(rep.amplitude.log_magnitude)
        .cell(rep.amplitude.phase)
        .cell(rep.det.log_magnitude)
        .cell(rep.det.phase)
        .cell(rep.source_term.real())
        .cell(rep.source_term.imag())
        .cell(rep.exp_factor.log_magnitude)
        .cell(rep.exp_factor.phase);

    if (opt.oracle) {
        const oracle::QuadratureSpec spec = cfg.quadrature.value_or(oracle::QuadratureSpec{});
        const Amplitude closed = transition_amplitude(with_damping(symmetrize(a), spec.epsilon), j);
        const auto quad = oracle::damped_gaussian_quadrature(a, j, spec);
        const Amplitude q = Amplitude::from_complex(quad.value);
        const double rel = std::abs(closed.to_complex() - quad.value) / closed.magnitude();
        const bool agrees = rel <= spec.tolerance;
        csv.cell(spec.epsilon)
            .cell(closed.log_magnitude)
            .cell(closed.phase)
            .cell(q.log_magnitude)
            .cell(q.phase)
            .cell(rel)
            .cell(quad.refinement_change)
            .cell(agrees);
        if (!agrees) err << "warning: closed form and quadrature differ by " << fmt_real(rel) << '\n';
        if (quad.refinement_change > 10.0 * spec.tolerance)
            err << "warning: quadrature not converged under grid refinement\n";
    }
    csv.end_row();
    return kOk;
}

// Columns: dt, mode, omega_sq, steps, max_residual, observed_order, flagged.
inline int cmd_converge(const ScenarioConfig& cfg, const RunOptions&, std::ostream& out, std::ostream& err) {
    const auto& group = require_network(cfg);
    const OscillatorNetwork net = build_network(group, false);
    if (!group.dt_list || group.dt_list->size() < 3)
        throw ValidationError("network.dt_list", "needs at least 3 entries");
    std::vector<oracle::ConvergenceRow> rows;
    try {
        rows = oracle::continuum_convergence_report(net, *group.dt_list, group.horizon);
    } catch (const ValidationError& e) {
        throw detail::in_group(e, "network");
    }

    CsvWriter csv(out);
    csv.header({"dt", "mode", "omega_sq", "steps", "max_residual", "observed_order", "flagged"});
    for (const auto& r : rows) {
        csv.cell(r.dt).cell(r.mode).cell(r.omega_sq).cell(r.steps).cell(r.max_residual).cell(r.observed_order).cell(
            r.flagged);
        csv.end_row();
        if (r.flagged)
            err << "warning: mode " << r.mode << " at dt=" << fmt_real(r.dt) << " has observed order "
                << fmt_real(r.observed_order) << " outside [" << oracle::kOrderLow << ", " << oracle::kOrderHigh
                << "]\n";
    }
    return kOk;
}

// Columns: index, k23, k43, d23, d43, phase_difference, x23, x43,
// discrete_intensity, schrodinger_intensity; with --include-self-terms also
// self_phase_2, self_phase_4, intensity_with_self.
inline int cmd_twinslit(const ScenarioConfig& cfg, const RunOptions& opt, std::ostream& out, std::ostream& err) {
    const twin::TwinSlitScenario sc = build_scenario(cfg);
    const twin::SchrodingerSide& side = require_schrodinger(cfg);
    const auto& schedule = cfg.twinslit->schedule;
    if (schedule.empty()) throw ValidationError("twinslit.schedule", "must not be empty");

    twin::ScanResult scan;
    try {
        scan = twin::pattern_scan(sc, side, schedule, {opt.include_self_terms});
    } catch (const ResonantCoupling& e) {
        throw NoUsablePoints(std::string("emitter leg is resonant: ") + e.what());
    }
    for (std::size_t i : scan.skipped) err << "warning: schedule point " << i << " is resonant, skipped\n";
    if (scan.rows.empty()) throw NoUsablePoints("every schedule point is resonant");

    CsvWriter csv(out);
    std::vector<std::string> cols{"index", "k23", "k43", "d23", "d43", "phase_difference", "x23", "x43",
                                  "discrete_intensity", "schrodinger_intensity"};
    if (opt.include_self_terms) cols.insert(cols.end(), {"self_phase_2", "self_phase_4", "intensity_with_self"});
    csv.header(cols);
    for (const auto& r : scan.rows) {
        csv.cell(r.index)
            .cell(r.k23)
            .cell(r.k43)
            .cell(r.d23)
            .cell(r.d43)
            .cell(r.discrete.phase_difference())
            .cell(r.x23)
            .cell(r.x43)
            .cell(r.discrete_intensity)
            .cell(r.schrodinger_intensity);
        if (opt.include_self_terms)
            csv.cell(r.self_phases.first).cell(r.self_phases.second).cell(r.intensity_with_self);
        csv.end_row();
    }
    return kOk;
}

// Columns: link, gamma, k, j, d, scale, x, status; with --round-trip also
// discrete_phase, schrodinger_phase, phase_mismatch.
inline int cmd_metric(const ScenarioConfig& cfg, const RunOptions& opt, std::ostream& out, std::ostream& err) {
    const twin::TwinSlitScenario sc = build_scenario(cfg);
    const auto& tg = *cfg.twinslit;
    const bool need_p = !tg.proportional || opt.round_trip;
    double p = 0.0;
    if (need_p) {
        p = require_schrodinger(cfg).momentum();
        if (p == 0.0) throw ValidationError("schrodinger.x12", "momentum m x12 / t must be nonzero");
    }

    struct Link {
        const char* name;
        double gamma, k, j;
    };
    std::vector<Link> links{{"12", sc.gamma1, sc.k12, sc.j2},
                            {"14", sc.gamma1, sc.k14, sc.j4},
                            {"23", sc.gamma2, sc.k23, sc.j3},
                            {"43", sc.gamma4, sc.k43, sc.j3}};
    if (tg.zero_coupling_sentinel) links.push_back({"sentinel", sc.gamma1, 0.0, sc.j2});

    CsvWriter csv(out);
    std::vector<std::string> cols{"link", "gamma", "k", "j", "d", "scale", "x", "status"};
    if (opt.round_trip) cols.insert(cols.end(), {"discrete_phase", "schrodinger_phase", "phase_mismatch"});
    csv.header(cols);
    const double nan = std::nan("");
    for (const auto& l : links) {
        const double j = tg.proportional ? tg.impulse_per_momentum * p : l.j;
        csv.cell(std::string(l.name)).cell(l.gamma).cell(l.k).cell(j);
        try {
            const twin::DistanceResult r =
                tg.proportional ? twin::infer_distance_proportional(l.gamma, l.k, sc.medium, tg.impulse_per_momentum)
                                : twin::infer_distance(l.gamma, l.k, l.j, sc.medium, p);
            csv.cell(r.d).cell(r.scale).cell(r.x).cell(std::string("ok"));
            if (opt.round_trip) {
                const double discrete = l.gamma * r.d * j / (2.0 * std::numbers::pi * sc.hbar);
                const double schr = p * r.x / (2.0 * sc.hbar);
                csv.cell(discrete).cell(schr).cell(std::abs(discrete - schr));
            }
        } catch (const ResonantCoupling&) {
            err << "warning: link " << l.name << " is resonant\n";
            csv.cell(nan).cell(nan).cell(nan).cell(std::string("resonant"));
            if (opt.round_trip) csv.cell(nan).cell(nan).cell(nan);
        }
        csv.end_row();
    }
    return kOk;
}

// Runs one command: output is buffered and only written once the command
// succeeded. Exceptions map to the documented exit codes.
template <class Command>
int execute(Command&& cmd, const std::string& config_path, const std::string& out_path, const RunOptions& opt,
            std::ostream& stdout_stream, std::ostream& err) {
    try {
        const ScenarioConfig cfg = load_config(config_path);
        std::ostringstream buffer;
        const int code = cmd(cfg, opt, buffer, err);
        const std::string target = !out_path.empty() ? out_path : cfg.output_path.value_or("");
        if (target.empty()) {
            stdout_stream << buffer.str();
        } else {
            std::ofstream f(target, std::ios::binary | std::ios::trunc);
            if (!f) throw ValidationError("output.path", "cannot write '" + target + "'");
            f << buffer.str();
        }
        return code;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const DimensionTooLarge& e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const EquidistanceViolated& e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const ZeroMomentum& e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const SingularAction& e) {
        err << "error: " << e.what() << '\n';
        return kSingular;
    } catch (const NoUsablePoints& e) {
        err << "error: " << e.what() << '\n';
        return kResonant;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace pathamp::cli
