// config.hpp - JSON run configuration for the pathamp command line.
//
// One document, five optional groups: "network", "twinslit", "schrodinger",
// "quadrature", "output". Unknown keys anywhere are rejected. Every
// validation failure is a ValidationError naming "group.key".
#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pathamp/action_matrix.hpp"
#include "pathamp/errors.hpp"
#include "pathamp/network.hpp"
#include "pathamp/oracle.hpp"
#include "pathamp/twin_slit.hpp"

namespace pathamp::cli {

using json = nlohmann::json;

struct NetworkGroup {
    std::optional<std::size_t> num_sources;
    std::optional<double> mass;
    std::optional<double> spring;
    std::optional<CouplingMatrix> coupling;
    std::optional<double> dt;
    std::optional<std::size_t> steps;
    std::optional<std::vector<std::vector<double>>> source;
    std::optional<std::vector<double>> dt_list;
    double horizon = 4.0;
};

struct TwinSlitGroup {
    double omega0 = 1.0;
    double gamma1 = 1.0, gamma2 = 1.0, gamma4 = 1.0;
    double j2 = 0.0, j3 = 0.0, j4 = 0.0;
    double k12 = 0.0, k14 = 0.0, k23 = 0.0, k43 = 0.0;
    double hbar = 1.0;
    std::vector<std::pair<double, double>> schedule;
    bool proportional = false;
    double impulse_per_momentum = 1.0;
    bool zero_coupling_sentinel = false;
};

struct ScenarioConfig {
    std::optional<NetworkGroup> network;
    std::optional<TwinSlitGroup> twinslit;
    std::optional<twin::SchrodingerSide> schrodinger;
    std::optional<oracle::QuadratureSpec> quadrature;
    std::optional<std::string> output_path;
};

namespace detail {

// Re-labels a module-level ValidationError with its config group.
inline ValidationError in_group(const ValidationError& e, const std::string& group) {
    return ValidationError(group + "." + e.field(), std::string(e.what()).substr(e.field().size() + 2));
}

inline void check_keys(const json& obj, const std::string& group, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ValidationError(group, "must be a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ValidationError(group.empty() ? it.key() : group + "." + it.key(), "unknown key");
    }
}

inline double number(const json& obj, const std::string& group, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_number()) throw ValidationError(group + "." + key, "must be a number");
    double d = v.get<double>();
    if (!std::isfinite(d)) throw ValidationError(group + "." + key, "must be finite");
    return d;
}

inline double number_or(const json& obj, const std::string& group, const char* key, double fallback) {
    return obj.contains(key) ? number(obj, group, key) : fallback;
}

inline std::size_t count(const json& obj, const std::string& group, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ValidationError(group + "." + key, "must be a nonnegative integer");
    return v.get<std::size_t>();
}

inline bool flag(const json& obj, const std::string& group, const char* key) {
    if (!obj.contains(key)) return false;
    if (!obj.at(key).is_boolean()) throw ValidationError(group + "." + key, "must be true or false");
    return obj.at(key).get<bool>();
}

inline std::vector<double> numbers(const json& v, const std::string& field) {
    if (!v.is_array()) throw ValidationError(field, "must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw ValidationError(field, "must be an array of numbers");
        out.push_back(e.get<double>());
        if (!std::isfinite(out.back())) throw ValidationError(field, "entries must be finite");
    }
    return out;
}

inline NetworkGroup parse_network(const json& g) {
    const std::string grp = "network";
    check_keys(g, grp, {"num_sources", "mass", "spring", "coupling", "dt", "steps", "source", "dt_list", "horizon"});
    NetworkGroup n;
    if (g.contains("num_sources")) n.num_sources = count(g, grp, "num_sources");
    if (g.contains("mass")) n.mass = number(g, grp, "mass");
    if (g.contains("spring")) n.spring = number(g, grp, "spring");
    if (g.contains("dt")) n.dt = number(g, grp, "dt");
    if (g.contains("steps")) n.steps = count(g, grp, "steps");
    n.horizon = number_or(g, grp, "horizon", n.horizon);
    if (g.contains("coupling")) {
        const json& c = g.at("coupling");
        if (!c.is_array()) throw ValidationError("network.coupling", "must be a square matrix");
        CouplingMatrix k(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
            auto row = numbers(c[i], "network.coupling");
            if (row.size() != c.size()) throw ValidationError("network.coupling", "must be a square matrix");
            for (std::size_t j = 0; j < row.size(); ++j) k.raw(i, j) = row[j];
        }
        n.coupling = std::move(k);
    }
    if (g.contains("source")) {
        const json& s = g.at("source");
        if (!s.is_array()) throw ValidationError("network.source", "must be one array per oscillator");
        std::vector<std::vector<double>> series;
        for (const auto& row : s) series.push_back(numbers(row, "network.source"));
        n.source = std::move(series);
    }
    if (g.contains("dt_list")) n.dt_list = numbers(g.at("dt_list"), "network.dt_list");
    return n;
}

inline TwinSlitGroup parse_twinslit(const json& g) {
    const std::string grp = "twinslit";
    check_keys(g, grp,
               {"omega0", "gamma1", "gamma2", "gamma4", "j2", "j3", "j4", "k12", "k14", "k23", "k43", "hbar", "schedule",
                "proportional", "impulse_per_momentum", "zero_coupling_sentinel"});
    TwinSlitGroup t;
    t.omega0 = number_or(g, grp, "omega0", t.omega0);
    t.gamma1 = number_or(g, grp, "gamma1", t.gamma1);
    t.gamma2 = number_or(g, grp, "gamma2", t.gamma2);
    t.gamma4 = number_or(g, grp, "gamma4", t.gamma4);
    t.j2 = number_or(g, grp, "j2", t.j2);
    t.j3 = number_or(g, grp, "j3", t.j3);
    t.j4 = number_or(g, grp, "j4", t.j4);
    t.k12 = number_or(g, grp, "k12", t.k12);
    t.k14 = number_or(g, grp, "k14", t.k14);
    t.k23 = number_or(g, grp, "k23", t.k23);
    t.k43 = number_or(g, grp, "k43", t.k43);
    t.hbar = number_or(g, grp, "hbar", t.hbar);
    t.impulse_per_momentum = number_or(g, grp, "impulse_per_momentum", t.impulse_per_momentum);
    t.proportional = flag(g, grp, "proportional");
    t.zero_coupling_sentinel = flag(g, grp, "zero_coupling_sentinel");
    if (!(t.hbar > 0.0)) throw ValidationError("twinslit.hbar", "must be positive");
    if (!(t.omega0 > 0.0)) throw ValidationError("twinslit.omega0", "must be positive");
    if (g.contains("schedule")) {
        const json& s = g.at("schedule");
        if (!s.is_array()) throw ValidationError("twinslit.schedule", "must be an array of [k23, k43] pairs");
        for (const auto& pair : s) {
            auto v = numbers(pair, "twinslit.schedule");
            if (v.size() != 2) throw ValidationError("twinslit.schedule", "must be an array of [k23, k43] pairs");
            t.schedule.emplace_back(v[0], v[1]);
        }
    }
    return t;
}

inline twin::SchrodingerSide parse_schrodinger(const json& g) {
    const std::string grp = "schrodinger";
    check_keys(g, grp, {"exchange_mass", "interaction_time", "x12", "x23", "x43", "alpha"});
    twin::SchrodingerSide s;
    s.exchange_mass = number_or(g, grp, "exchange_mass", s.exchange_mass);
    s.interaction_time = number_or(g, grp, "interaction_time", s.interaction_time);
    s.x12 = number_or(g, grp, "x12", s.x12);
    s.x23 = number_or(g, grp, "x23", s.x23);
    s.x43 = number_or(g, grp, "x43", s.x43);
    if (g.contains("alpha")) {
        auto a = numbers(g.at("alpha"), "schrodinger.alpha");
        if (a.size() != 2) throw ValidationError("schrodinger.alpha", "must be [re, im]");
        s.alpha = {a[0], a[1]};
    }
    try {
        s.validate();
    } catch (const ValidationError& e) {
        throw in_group(e, "schrodinger");
    }
    return s;
}

inline oracle::QuadratureSpec parse_quadrature(const json& g) {
    const std::string grp = "quadrature";
    check_keys(g, grp, {"epsilon", "points_per_axis", "half_width", "tolerance"});
    oracle::QuadratureSpec q;
    q.epsilon = number_or(g, grp, "epsilon", q.epsilon);
    if (g.contains("points_per_axis")) q.points_per_axis = count(g, grp, "points_per_axis");
    q.half_width = number_or(g, grp, "half_width", q.half_width);
    q.tolerance = number_or(g, grp, "tolerance", q.tolerance);
    try {
        q.validate();
    } catch (const ValidationError& e) {
        throw in_group(e, "quadrature");
    }
    return q;
}

}  // namespace detail

inline ScenarioConfig parse_config(const json& doc) {
    detail::check_keys(doc, "", {"network", "twinslit", "schrodinger", "quadrature", "output"});
    ScenarioConfig c;
    if (doc.contains("network")) c.network = detail::parse_network(doc.at("network"));
    if (doc.contains("twinslit")) c.twinslit = detail::parse_twinslit(doc.at("twinslit"));
    if (doc.contains("schrodinger")) c.schrodinger = detail::parse_schrodinger(doc.at("schrodinger"));
    if (doc.contains("quadrature")) c.quadrature = detail::parse_quadrature(doc.at("quadrature"));
    if (doc.contains("output")) {
        const json& o = doc.at("output");
        detail::check_keys(o, "output", {"path"});
        if (o.contains("path")) {
            if (!o.at("path").is_string()) throw ValidationError("output.path", "must be a string");
            c.output_path = o.at("path").get<std::string>();
        }
    }
    return c;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config", "cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("config", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc);
}

// ---------------------------------------------------------------------------
// Builders: turn groups into validated library inputs for a given command.

inline const NetworkGroup& require_network(const ScenarioConfig& c) {
    if (!c.network) throw ValidationError("network", "group is required");
    return *c.network;
}

// Network with the lattice fields required only when need_lattice is set.
inline OscillatorNetwork build_network(const NetworkGroup& g, bool need_lattice) {
    OscillatorNetwork net;
    net.num_sources = g.num_sources.value_or(1);
    if (!g.mass) throw ValidationError("network.mass", "is required");
    if (!g.spring) throw ValidationError("network.spring", "is required");
    net.mass = *g.mass;
    net.spring = *g.spring;
    net.coupling = g.coupling.value_or(CouplingMatrix(net.num_sources));
    if (need_lattice) {
        if (!g.dt) throw ValidationError("network.dt", "is required");
        if (!g.steps) throw ValidationError("network.steps", "is required");
    }
    net.dt = g.dt.value_or(0.1);
    net.steps = g.steps.value_or(2);
    try {
        net.validate();
    } catch (const ValidationError& e) {
        throw detail::in_group(e, "network");
    }
    return net;
}

inline SourceVector build_source(const NetworkGroup& g, const OscillatorNetwork& net) {
    if (!g.source) return SourceVector(net.dim());
    const auto& s = *g.source;
    if (s.size() != net.num_sources) throw ValidationError("network.source", "needs one series per oscillator");
    for (const auto& row : s)
        if (row.size() != net.steps) throw ValidationError("network.source", "each series needs 'steps' samples");
    return SourceVector::from_series(s);
}

inline twin::TwinSlitScenario build_scenario(const ScenarioConfig& c) {
    const auto& n = require_network(c);
    if (!c.twinslit) throw ValidationError("twinslit", "group is required");
    if (!n.mass) throw ValidationError("network.mass", "is required");
    if (!n.spring) throw ValidationError("network.spring", "is required");
    const auto& t = *c.twinslit;
    twin::TwinSlitScenario sc;
    sc.medium = {*n.mass, *n.spring, t.omega0};
    sc.gamma1 = t.gamma1;
    sc.gamma2 = t.gamma2;
    sc.gamma4 = t.gamma4;
    sc.j2 = t.j2;
    sc.j3 = t.j3;
    sc.j4 = t.j4;
    sc.k12 = t.k12;
    sc.k14 = t.k14;
    sc.k23 = t.k23;
    sc.k43 = t.k43;
    sc.hbar = t.hbar;
    try {
        sc.validate();
    } catch (const ValidationError& e) {
        throw detail::in_group(e, e.field() == "mass" || e.field() == "spring" ? "network" : "twinslit");
    }
    return sc;
}

inline const twin::SchrodingerSide& require_schrodinger(const ScenarioConfig& c) {
    if (!c.schrodinger) throw ValidationError("schrodinger", "group is required");
    return *c.schrodinger;
}

}  // namespace pathamp::cli
