#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "wigbound/app.hpp"
#include "wigbound/io.hpp"

namespace wigbound {

namespace {

void check_keys(const YAML::Node& node, const std::string& where, std::set<std::string> allowed) {
    if (!node) return;
    if (!node.IsMap()) throw ConfigError(where + " must be a mapping");
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

double finite(const YAML::Node& n, const std::string& what) {
    double v = 0.0;
    try {
        v = n.as<double>();
    } catch (const YAML::Exception&) {
        throw ConfigError(what + " must be a number");
    }
    if (!std::isfinite(v)) throw ConfigError(what + " must be finite");
    return v;
}

int integer(const YAML::Node& n, const std::string& what) {
    try {
        return n.as<int>();
    } catch (const YAML::Exception&) {
        throw ConfigError(what + " must be an integer");
    }
}

std::array<double, 2> pair(const YAML::Node& n, const std::string& what) {
    if (!n.IsSequence() || n.size() != 2) throw ConfigError(what + " must be a two-element list");
    return {finite(n[0], what), finite(n[1], what)};
}

std::vector<double> list(const YAML::Node& n, const std::string& what) {
    if (!n.IsSequence()) throw ConfigError(what + " must be a list");
    std::vector<double> v;
    for (const auto& e : n) v.push_back(finite(e, what));
    return v;
}

std::vector<std::string> strings(const YAML::Node& n, const std::string& what) {
    std::vector<std::string> v;
    if (n.IsScalar()) {
        v.push_back(n.as<std::string>());
        return v;
    }
    if (!n.IsSequence()) throw ConfigError(what + " must be a name or a list of names");
    for (const auto& e : n) v.push_back(e.as<std::string>());
    return v;
}

void parse_state(const YAML::Node& s, const std::filesystem::path& base, StateSpec& st) {
    check_keys(s, "problem.state", {"well", "superposition", "file", "constant"});
    if (s["well"]) {
        st.kind = StateSpec::Kind::well;
        st.n = integer(s["well"], "state.well");
        if (st.n < 1) throw ConfigError("state.well must be at least 1");
    } else if (s["superposition"]) {
        st.kind = StateSpec::Kind::superposition;
        for (const auto& t : s["superposition"]) {
            if (!t.IsSequence() || t.size() != 2) {
                throw ConfigError("superposition terms are [n, weight] pairs");
            }
            const int n = integer(t[0], "superposition level");
            if (n < 1) throw ConfigError("superposition levels must be at least 1");
            st.terms.emplace_back(n, finite(t[1], "superposition weight"));
        }
        if (st.terms.empty()) throw ConfigError("superposition needs at least one term");
    } else if (s["file"]) {
        st.kind = StateSpec::Kind::file;
        st.file = s["file"].as<std::string>();
        if (st.file.is_relative()) st.file = base / st.file;
        if (!std::filesystem::exists(st.file)) {
            throw ConfigError("state file not found: " + st.file.string());
        }
    } else if (s["constant"]) {
        st.kind = StateSpec::Kind::constant;
    } else {
        throw ConfigError("problem.state needs one of well, superposition, file, constant");
    }
}

}  // namespace

PotentialFn RunConfig::bulk_potential() const {
    if (potential.empty()) return {};
    const std::vector<double> c = potential;
    return [c](double x) {
        double v = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
        return v;
    };
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("cannot parse config: ") + e.what());
    }
    if (!root.IsMap()) throw ConfigError("config must be a mapping");
    check_keys(root, "config",
               {"problem", "grid", "delta", "transform", "spectrum", "verify", "solve",
                "trajectories", "output_dir"});
    RunConfig c;
    try {
        if (const auto p = root["problem"]) {
            check_keys(p, "problem", {"domain", "hbar", "mass", "potential", "state"});
            if (p["domain"]) {
                const auto dm = pair(p["domain"], "domain");
                c.a = dm[0];
                c.b = dm[1];
            }
            if (!(c.b > c.a)) throw ConfigError("domain needs a < b");
            double hbar = p["hbar"] ? finite(p["hbar"], "hbar") : 1.0;
            double mass = p["mass"] ? finite(p["mass"], "mass") : 1.0;
            if (!(hbar > 0.0) || !(mass > 0.0)) throw ConfigError("hbar and mass must be positive");
            c.params = PhysicalParams(hbar, mass);
            if (p["potential"]) c.potential = list(p["potential"], "potential");
            if (p["state"]) parse_state(p["state"], base_dir, c.state);
        }
        if (const auto g = root["grid"]) {
            check_keys(g, "grid", {"nx", "np", "p_max"});
            if (g["nx"]) c.nx = integer(g["nx"], "grid.nx");
            if (g["np"]) c.np = integer(g["np"], "grid.np");
            if (g["p_max"]) c.p_max = finite(g["p_max"], "grid.p_max");
            if (c.nx < 9 || c.np < 9) throw ConfigError("grid needs at least 9 nodes per axis");
            if (c.p_max < 0.0) throw ConfigError("grid.p_max must be non-negative");
        }
        if (const auto d = root["delta"]) {
            check_keys(d, "delta", {"epsilon"});
            if (d["epsilon"]) c.epsilon = finite(d["epsilon"], "delta.epsilon");
            if (!(c.epsilon > 0.0)) throw ConfigError("delta.epsilon must be positive");
        }
        if (const auto t = root["transform"]) {
            check_keys(t, "transform", {"require"});
            if (t["require"]) c.require = strings(t["require"], "transform.require");
        }
        if (const auto s = root["spectrum"]) {
            check_keys(s, "spectrum", {"E_range", "samples"});
            if (s["E_range"]) c.e_range = pair(s["E_range"], "spectrum.E_range");
            if (s["samples"]) c.scan_samples = integer(s["samples"], "spectrum.samples");
            if (c.scan_samples < 2) throw ConfigError("spectrum.samples must be at least 2");
        }
        if (const auto v = root["verify"]) {
            check_keys(v, "verify",
                       {"E", "checks", "residual_tolerance", "stationarity_tolerance",
                        "conservation_tolerance", "boundary_terms"});
            if (v["E"]) c.energy = finite(v["E"], "verify.E");
            if (v["checks"]) c.verify_checks = strings(v["checks"], "verify.checks");
            if (v["residual_tolerance"]) c.residual_tolerance = finite(v["residual_tolerance"], "tolerance");
            if (v["stationarity_tolerance"]) {
                c.stationarity_tolerance = finite(v["stationarity_tolerance"], "tolerance");
            }
            if (v["conservation_tolerance"]) {
                c.conservation_tolerance = finite(v["conservation_tolerance"], "tolerance");
            }
            if (v["boundary_terms"]) c.boundary_terms = v["boundary_terms"].as<bool>();
        }
        if (const auto s = root["solve"]) {
            check_keys(s, "solve", {"taylor_order", "E", "bc_value", "bc_points", "method"});
            if (s["taylor_order"]) c.taylor_order = integer(s["taylor_order"], "solve.taylor_order");
            if (s["E"]) c.solve_energy = finite(s["E"], "solve.E");
            if (s["bc_value"]) c.bc_value = finite(s["bc_value"], "solve.bc_value");
            if (s["bc_points"]) c.bc_points = pair(s["bc_points"], "solve.bc_points");
            if (s["method"]) c.solve_method = s["method"].as<std::string>();
            if (c.taylor_order < 0 || c.taylor_order > 2) {
                throw ConfigError("solve.taylor_order must be 0, 1 or 2");
            }
            if (c.solve_method != "collocation" && c.solve_method != "picard") {
                throw ConfigError("solve.method must be collocation or picard");
            }
        }
        if (const auto t = root["trajectories"]) {
            check_keys(t, "trajectories",
                       {"mode", "levels", "level_count", "inits", "t_span", "rtol", "atol"});
            if (t["mode"]) c.mode = t["mode"].as<std::string>();
            static const std::set<std::string> modes{"contours", "order0", "order1", "order2",
                                                     "exact_force"};
            if (!modes.count(c.mode)) throw ConfigError("unknown trajectory mode '" + c.mode + "'");
            if (t["levels"]) c.levels = list(t["levels"], "trajectories.levels");
            if (t["level_count"]) c.level_count = integer(t["level_count"], "level_count");
            if (t["inits"]) {
                if (!t["inits"].IsSequence()) throw ConfigError("trajectories.inits must be a list");
                for (const auto& i : t["inits"]) c.inits.push_back(pair(i, "trajectories.inits"));
            }
            if (t["t_span"]) c.t_span = pair(t["t_span"], "trajectories.t_span");
            if (t["rtol"]) c.rtol = finite(t["rtol"], "trajectories.rtol");
            if (t["atol"]) c.atol = finite(t["atol"], "trajectories.atol");
            if (!(c.rtol > 0.0) || !(c.atol > 0.0)) throw ConfigError("tolerances must be positive");
        }
        if (root["output_dir"]) c.output_dir = root["output_dir"].as<std::string>();
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("invalid config value: ") + e.what());
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.has_parent_path() ? path.parent_path() : ".");
}

namespace {

// Box eigenstate translated onto the configured domain.
Wavefunction well_state(int n, const Domain& d, const PhysicalParams& params) {
    const WellEigenstate s = well_eigenstate(n, d.length(), params);
    const double shift = d.x0();
    return Wavefunction::analytic([s, shift](double x) { return cplx(s.psi(x - shift), 0.0); },
                                  [s, shift](double x) { return cplx(s.dpsi(x - shift), 0.0); },
                                  d, WavefunctionKind::confined);
}

}  // namespace

Wavefunction make_state(const RunConfig& cfg) {
    const Domain d = cfg.domain();
    switch (cfg.state.kind) {
        case StateSpec::Kind::well: return well_state(cfg.state.n, d, cfg.params);
        case StateSpec::Kind::superposition: {
            std::vector<std::pair<cplx, Wavefunction>> terms;
            for (const auto& [n, w] : cfg.state.terms) terms.emplace_back(w, well_state(n, d, cfg.params));
            return superpose(terms);
        }
        case StateSpec::Kind::file:
            try {
                return read_wavefunction_csv(cfg.state.file, d);
            } catch (const IoError& e) {
                throw ConfigError(e.what());
            }
        case StateSpec::Kind::constant: {
            const double c = 1.0 / std::sqrt(d.length());
            return Wavefunction::analytic([c](double) { return cplx(c, 0.0); },
                                          [](double) { return cplx(0.0, 0.0); }, d,
                                          WavefunctionKind::confined);
        }
    }
    throw ConfigError("unknown state kind");
}

}  // namespace wigbound
