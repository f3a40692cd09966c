// app.hpp - command-line front end:
//   pathamp amplitude|twinslit|converge|metric --config <path> [--out <path>]
//           [--oracle] [--include-self-terms] [--round-trip] [--seedless]
#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pathamp/cli/commands.hpp"

namespace pathamp::cli {

inline constexpr const char* kColumnHelp = R"(Output columns (CSV, header row, 17 significant digits):
  amplitude  log_magnitude,phase,det_log_magnitude,det_phase,jaj_re,jaj_im,
             exp_factor_log_magnitude,exp_factor_phase
             --oracle adds epsilon,closed_log_magnitude,closed_phase,
             quadrature_log_magnitude,quadrature_phase,relative_difference,
             refinement_change,agrees
  converge   dt,mode,omega_sq,steps,max_residual,observed_order,flagged
  twinslit   index,k23,k43,d23,d43,phase_difference,x23,x43,
             discrete_intensity,schrodinger_intensity
             --include-self-terms adds self_phase_2,self_phase_4,intensity_with_self
  metric     link,gamma,k,j,d,scale,x,status
             --round-trip adds discrete_phase,schrodinger_phase,phase_mismatch
Exit codes: 0 ok, 2 invalid configuration, 3 singular action matrix,
            4 no non-resonant schedule point.)";

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discrete path-integral amplitudes for coupled oscillator sources", "pathamp"};
    app.footer(kColumnHelp);
    app.require_subcommand(1);

    std::string config, out_path;
    RunOptions opt;
    bool seedless = false;  // nothing in pathamp draws random numbers; accepted for scripts

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "JSON configuration file")->required();
        sub->add_option("--out", out_path, "output CSV path (default: output.path or stdout)");
        sub->add_flag("--seedless", seedless, "pure deterministic mode (always on)");
    };
    auto* amplitude = app.add_subcommand("amplitude", "closed-form transition amplitude of the configured network");
    add_common(amplitude);
    amplitude->add_flag("--oracle", opt.oracle, "compare against brute-force quadrature (dimension <= 3)");

    auto* twinslit = app.add_subcommand("twinslit", "interference pattern over the coupling schedule");
    add_common(twinslit);
    twinslit->add_flag("--include-self-terms", opt.include_self_terms, "add slit self-interaction phases");

    auto* converge = app.add_subcommand("converge", "stencil residual refinement study");
    add_common(converge);

    auto* metric = app.add_subcommand("metric", "separations inferred from source couplings");
    add_common(metric);
    metric->add_flag("--round-trip", opt.round_trip, "reconstruct free-particle phases from the separations");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalid;
    }

    if (amplitude->parsed()) return execute(cmd_amplitude, config, out_path, opt, out, err);
    if (twinslit->parsed()) return execute(cmd_twinslit, config, out_path, opt, out, err);
    if (converge->parsed()) return execute(cmd_converge, config, out_path, opt, out, err);
    return execute(cmd_metric, config, out_path, opt, out, err);
}

}  // namespace pathamp::cli
