// Acceptance run: one [PASS]/[FAIL] line per criterion, exit status 1 if any
// criterion fails. Each criterion is timed against its budget.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "green_quadrature.hpp"
#include "pathamp/cli/commands.hpp"
#include "pathamp/gaussian.hpp"
#include "pathamp/green.hpp"
#include "pathamp/oracle.hpp"
#include "pathamp/twin_slit.hpp"
#include "scenarios.hpp"

using namespace pathamp;
namespace fs = std::filesystem;
constexpr double pi = std::numbers::pi;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_s;
    std::function<Outcome()> check;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

OscillatorNetwork single(double m, double k, double dt, std::size_t n) {
    OscillatorNetwork net;
    net.num_sources = 1;
    net.mass = m;
    net.spring = k;
    net.coupling = CouplingMatrix(1);
    net.dt = dt;
    net.steps = n;
    return net;
}

Outcome oracle_agreement() {
    struct Case {
        std::size_t steps, points;
        std::vector<double> j;
    } cases[] = {{2, 801, {0.3, -0.2}}, {3, 201, {0.3, -0.2, 0.1}}};
    double worst = 0.0;
    for (const auto& c : cases) {
        const auto a = build_action_matrix(single(0.1, 0.4, 0.5, c.steps));
        const SourceVector j(c.j);
        for (double eps : {0.1, 0.05}) {
            oracle::QuadratureSpec spec;
            spec.epsilon = eps;
            spec.points_per_axis = c.points;
            const cplx quad = oracle::brute_force_amplitude(a, j, spec).to_complex();
            const cplx closed = transition_amplitude(with_damping(symmetrize(a), eps), j).to_complex();
            worst = std::max(worst, std::abs(closed - quad) / std::abs(closed));
        }
    }
    return {worst <= 1e-2, "max relative difference " + sci(worst) + " over MN=2,3 and eps=0.1,0.05"};
}

Outcome factorization() {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst_mag = 0.0, worst_phase = 0.0;
    for (std::size_t steps : {2u, 3u, 8u, 25u, 200u}) {
        const auto pair = make_pair_network(1.0, 2.0, 0.0, 0.1, steps);
        SourceVector j(pair.dim());
        for (std::size_t i = 0; i < j.size(); ++i) j[i] = u(rng);
        const auto z = transition_amplitude(build_action_matrix(pair), j);
        const auto one = build_action_matrix(single(1.0, 2.0, 0.1, steps));
        const SourceVector j1(std::vector<double>(j.values().begin(), j.values().begin() + steps));
        const SourceVector j2(std::vector<double>(j.values().begin() + steps, j.values().end()));
        const auto prod = transition_amplitude(one, j1) * transition_amplitude(one, j2);
        worst_mag = std::max(worst_mag, std::abs(z.log_magnitude - prod.log_magnitude));
        worst_phase = std::max(worst_phase, phase_distance(z.phase, prod.phase));
    }
    return {worst_mag <= 1e-12 && worst_phase <= 1e-12,
            "max |dlog| " + sci(worst_mag) + ", max |dphase| " + sci(worst_phase)};
}

Outcome discretization_order() {
    const std::vector<double> dts{0.1, 0.05, 0.025, 0.0125};
    const auto rows = oracle::continuum_convergence_report(make_pair_network(1.0, 2.0, 0.5), dts);
    double lo = INFINITY, hi = -INFINITY;
    std::size_t measured = 0;
    bool ok = true;
    for (const auto& r : rows) {
        if (r.dt == dts.front()) continue;
        ++measured;
        if (!std::isfinite(r.observed_order)) ok = false;
        lo = std::min(lo, r.observed_order);
        hi = std::max(hi, r.observed_order);
        ok = ok && std::abs(r.observed_order - 2.0) <= 0.4;
    }
    ok = ok && measured == 6;
    return {ok, "observed orders in [" + sci(lo) + ", " + sci(hi) + "] for both normal modes"};
}

Outcome green_function() {
    const auto net = make_pair_network(1.0, 2.0, 0.5);
    const double eps = 1e-3;
    const testsupport::GreenQuadrature quad{1.0, 2.0, 0.5, eps, 200.0};
    double worst = 0.0;
    bool symmetric = true;
    for (int i = 0; i <= 100; ++i) {
        const double tau = -5.0 + 0.1 * i;
        const auto d = green::time_domain_green(net, tau, eps);
        symmetric = symmetric && d(0, 1) == d(1, 0);
        worst = std::max({worst, std::abs(d(0, 0) - quad(0, tau)), std::abs(d(0, 1) - quad(1, tau))});
    }
    const double residual = green::green_residual(net, green::gaussian_pulse(0.0, 0.25, true, false));
    return {worst <= 1e-3 && residual <= 1e-3 && symmetric,
            "max |D - quadrature| " + sci(worst) + " on 101 taus, pulse residual RMS " + sci(residual) +
                (symmetric ? ", D12 == D21" : ", D12 != D21")};
}

Outcome twin_slit_invariants() {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(-0.9, 0.9), g(0.2, 3.0);
    double exchange = 0.0;
    bool bounded = true;
    for (int trial = 0; trial < 1000; ++trial) {
        twin::TwinSlitScenario sc;
        sc.medium = {1.0, 2.0, 1.0};
        sc.gamma1 = g(rng);
        sc.gamma2 = g(rng);
        sc.gamma4 = g(rng);
        sc.j2 = 5 * u(rng);
        sc.j3 = 5 * u(rng);
        sc.j4 = 5 * u(rng);
        sc.k12 = u(rng);
        sc.k14 = u(rng);
        sc.k23 = u(rng);
        sc.k43 = u(rng);
        auto sw = sc;
        std::swap(sw.gamma2, sw.gamma4);
        std::swap(sw.j2, sw.j4);
        std::swap(sw.k12, sw.k14);
        std::swap(sw.k23, sw.k43);
        const double i1 = twin::intensity(twin::four_source_amplitude(sc));
        const double i2 = twin::intensity(twin::four_source_amplitude(sw));
        exchange = std::max(exchange, std::abs(i1 - i2));
        bounded = bounded && i1 >= 0.0 && i1 <= 4.0;
    }
    const auto sc = testsupport::base_scenario();
    const auto scan = twin::pattern_scan(sc, testsupport::base_side(), testsupport::phase_spanning_schedule(sc, 201));
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& r : scan.rows) {
        lo = std::min(lo, r.discrete_intensity);
        hi = std::max(hi, r.discrete_intensity);
        bounded = bounded && r.discrete_intensity >= 0.0 && r.discrete_intensity <= 4.0;
    }
    const double visibility = (hi - lo) / (hi + lo);
    const bool ok = exchange <= 1e-12 && bounded && scan.rows.size() == 201 && std::abs(visibility - 1.0) <= 1e-9;
    return {ok, "exchange deviation " + sci(exchange) + ", intensity in [0, 4]: " + (bounded ? "yes" : "no") +
                    ", visibility - 1 = " + sci(visibility - 1.0)};
}

Outcome round_trip() {
    const auto sc = testsupport::base_scenario();
    const auto scan = twin::pattern_scan(sc, testsupport::base_side(), testsupport::phase_spanning_schedule(sc, 201));
    double worst = 0.0;
    for (const auto& r : scan.rows)
        worst = std::max({worst, std::abs(r.schrodinger.first - r.detector_legs.first),
                          std::abs(r.schrodinger.second - r.detector_legs.second)});
    return {scan.rows.size() == 201 && worst <= 1e-12,
            "max phase mismatch " + sci(worst) + " over " + std::to_string(scan.rows.size()) + " points"};
}

Outcome anchors() {
    const double d = twin::coupling_coefficient(0.5, {1.0, 2.0, 1.0});
    const double phase = green::pairwise_phase({1.0, 1.0, 1.0}, make_pair_network(1.0, 2.0, 0.5), 1.0);
    const double err = std::abs(phase + 1.0 / (3.0 * pi));
    char buf[96];
    std::snprintf(buf, sizeof buf, "d = %.17g, phase + 1/(3 pi) = %.3g", d, err);
    return {d == -2.0 / 3.0 && err <= 1e-15, buf};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome cli_determinism() {
    const fs::path dir = fs::current_path() / "acceptance_work";
    fs::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& body) {
        std::ofstream(dir / name, std::ios::binary) << body;
        return (dir / name).string();
    };
    const auto sc = testsupport::base_scenario();
    std::string schedule = "[";
    for (const auto& [k23, k43] : testsupport::phase_spanning_schedule(sc, 201))
        schedule += (schedule.size() > 1 ? ", [" : "[") + cli::fmt_real(k23) + ", " + cli::fmt_real(k43) + "]";
    schedule += "]";
    const std::string twin = R"({
  "network": {"mass": 1.0, "spring": 2.0},
  "twinslit": {"omega0": 1.0, "j2": 1.0, "j4": 1.0, "j3": )" + cli::fmt_real(2.0 * pi) +
                             R"(, "k12": 0.5, "k14": 0.5, "k23": 0.5, "k43": 0.5,
               "zero_coupling_sentinel": true, "schedule": )" + schedule + R"(},
  "schrodinger": {"exchange_mass": 1.0, "interaction_time": 1.0, "x12": 20.0}
})";
    struct Job {
        std::string command, config, flags;
    } jobs[] = {
        {"amplitude", write("amplitude.json", R"({
  "network": {"mass": 0.1, "spring": 0.4, "dt": 0.5, "steps": 2, "source": [[0.3, -0.2]]},
  "quadrature": {"epsilon": 0.1, "points_per_axis": 801}
})"),
         "--oracle"},
        {"converge", write("converge.json", R"({
  "network": {"num_sources": 2, "mass": 1.0, "spring": 2.0, "coupling": [[0, 0.5], [0.5, 0]],
              "dt_list": [0.1, 0.05, 0.025, 0.0125]}
})"),
         ""},
        {"twinslit", write("twinslit.json", twin), "--include-self-terms"},
        {"metric", write("metric.json", twin), "--round-trip"},
    };
    std::string detail;
    bool ok = true;
    for (const auto& job : jobs) {
        std::string outputs[2];
        for (int run = 0; run < 2; ++run) {
            const fs::path target = dir / (job.command + std::to_string(run) + ".csv");
            fs::remove(target);
            const std::string cmd = std::string("\"") + PATHAMP_CLI + "\" " + job.command + " --seedless --config \"" +
                                    job.config + "\" --out \"" + target.string() + "\" " + job.flags;
            const int status = std::system(cmd.c_str());
            if (status != 0) ok = false;
            outputs[run] = slurp(target);
        }
        const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
        ok = ok && same;
        detail += (detail.empty() ? "" : ", ") + job.command + (same ? " identical" : " DIFFERS");
    }
    return {ok, detail};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "Gaussian closed form vs quadrature oracle", 60.0, oracle_agreement},
        {2, "factorization without coupling", 1.0, factorization},
        {3, "discretization order", 5.0, discretization_order},
        {4, "Green's function", 30.0, green_function},
        {5, "twin-slit invariants", 5.0, twin_slit_invariants},
        {6, "phase-matching round trip", 5.0, round_trip},
        {7, "hand-evaluation anchors", 1.0, anchors},
        {8, "CLI determinism", 60.0, cli_determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.budget_s;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::printf("[%s] %d %s: %s (%.2f s, budget %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", over budget");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
