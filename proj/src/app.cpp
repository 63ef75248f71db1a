#include "wigbound/app.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "wigbound/dynamics.hpp"
#include "wigbound/io.hpp"
#include "wigbound/star.hpp"
#include "wigbound/wigner.hpp"

namespace wigbound {

namespace {

PhaseSpaceGrid grid_for(const RunConfig& cfg) {
    const Domain d = cfg.domain();
    const double pmax = cfg.p_max > 0.0 ? cfg.p_max : default_p_max(d, cfg.params);
    return make_phase_grid(d, cfg.nx, cfg.np, pmax);
}

WignerField field_for(const RunConfig& cfg) {
    return wigner_transform(make_state(cfg), grid_for(cfg), cfg.params);
}

PotentialFn zero_if_empty(PotentialFn v) {
    if (v) return v;
    return [](double) { return 0.0; };
}

std::string numbered(const char* stem, std::size_t k, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%03zu%s", stem, k, ext);
    return buf;
}

CheckResult scalar_check(std::string name, std::string equation, double measured, double tol) {
    CheckResult c;
    c.name = std::move(name);
    c.equation = std::move(equation);
    c.measured = {measured};
    c.measured_max = std::abs(measured);
    c.tolerance = tol;
    c.pass = std::abs(measured) <= tol;
    return c;
}

void log_report(const BoundaryReport& r, std::ostream& log) {
    for (const auto& c : r.checks) {
        log << (c.pass ? "PASS " : "FAIL ") << c.name << " measured " << format_double(c.measured_max)
            << " tolerance " << format_double(c.tolerance) << '\n';
    }
}

}  // namespace

int cmd_transform(const RunConfig& cfg, std::ostream& log) {
    const WignerField F = field_for(cfg);
    const BoundaryReport consistency = check_consistency(F);
    const BoundaryReport subsidiary = check_dirichlet_subsidiary(F);
    const BoundaryReport integral = check_integral_dirichlet(F);
    BoundaryReport all = consistency;
    all.append(subsidiary);
    all.append(integral);

    std::vector<const CheckResult*> required;
    auto add_group = [&](const BoundaryReport& r) {
        for (const auto& c : r.checks) required.push_back(&c);
    };
    if (cfg.require.empty()) {
        add_group(all);
    }
    for (const auto& name : cfg.require) {
        if (name == "consistency") {
            add_group(consistency);
        } else if (name == "subsidiary") {
            add_group(subsidiary);
        } else if (name == "integral_dirichlet") {
            add_group(integral);
        } else {
            auto it = std::find_if(all.checks.begin(), all.checks.end(),
                                   [&](const CheckResult& c) { return c.name == name; });
            if (it == all.checks.end()) throw ConfigError("unknown required check '" + name + "'");
            required.push_back(&*it);
        }
    }
    write_file_atomic(cfg.output_dir / "wigner.csv", field_csv(F));
    write_file_atomic(cfg.output_dir / "boundary_report.txt", report_csv(all));
    log_report(all, log);
    const bool ok = std::all_of(required.begin(), required.end(),
                                [](const CheckResult* c) { return c->pass; });
    log << (ok ? "all required checks pass\n" : "required checks failed\n");
    return ok ? 0 : 1;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& log) {
    if (!cfg.e_range) throw ConfigError("spectrum.E_range is required");
    const auto [lo, hi] = *cfg.e_range;
    std::vector<double> energies;
    if (hi > lo) {
        const auto pts = energy_scan(zero_if_empty(cfg.bulk_potential()), cfg.domain(), lo, hi,
                                     cfg.scan_samples, cfg.params);
        for (const auto& p : pts) energies.push_back(p.E);
        std::sort(energies.begin(), energies.end());
    }
    write_file_atomic(cfg.output_dir / "spectrum.csv", spectrum_csv(energies));
    log << energies.size() << " eigenvalues in [" << format_double(lo) << ", " << format_double(hi)
        << "]\n";
    return 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
    const WignerField F = field_for(cfg);
    const PotentialFn v = cfg.bulk_potential();
    std::optional<double> E = cfg.energy;
    if (!E && cfg.state.kind == StateSpec::Kind::well && cfg.potential.empty()) {
        E = well_eigenstate(cfg.state.n, cfg.domain().length(), cfg.params).E_n;
    }
    BoundaryReport report;
    std::optional<WignerField> rhs;
    auto get_rhs = [&]() -> const WignerField& {
        if (!rhs) {
            rhs = moyal_rhs(F, v, cfg.params);
            write_file_atomic(cfg.output_dir / "rhs.csv", field_csv(*rhs));
        }
        return *rhs;
    };
    for (const auto& name : cfg.verify_checks) {
        if (name == "residual") {
            if (!E) throw ConfigError("verify.E is required for the residual check");
            ResidualOptions ro;
            ro.boundary_terms = cfg.boundary_terms;
            const ResidualResult r = stargenvalue_residual(F, v, *E, cfg.params, ResidualSide::left, ro);
            write_file_atomic(cfg.output_dir / "residual.csv", complex_field_csv(r.field));
            report.checks.push_back(scalar_check(
                "stargenvalue_residual", "sup |H*F - boundary terms - E F|", r.sup, cfg.residual_tolerance));
        } else if (name == "stationarity") {
            double sup = 0.0;
            for (double x : get_rhs().values()) sup = std::max(sup, std::abs(x));
            report.checks.push_back(
                scalar_check("stationarity", "sup |dF/dt|", sup, cfg.stationarity_tolerance));
        } else if (name == "conservation") {
            report.checks.push_back(scalar_check("conservation", "int int dF/dt dx dp",
                                                 phase_space_integral(get_rhs()),
                                                 cfg.conservation_tolerance));
        } else {
            throw ConfigError("unknown verify check '" + name + "'");
        }
    }
    write_file_atomic(cfg.output_dir / "verify_report.txt", report_csv(report));
    log_report(report, log);
    return report.all_pass() ? 0 : 1;
}

int cmd_solve(const RunConfig& cfg, std::ostream& log) {
    const Domain d = cfg.domain();
    const double E = cfg.solve_energy.value_or(well_eigenstate(1, d.length(), cfg.params).E_n);
    EigenSolveConfig sc = EigenSolveConfig::standard(d, cfg.epsilon, cfg.taylor_order, E, cfg.bc_value);
    if (cfg.bc_points) sc.bc_points = {(*cfg.bc_points)[0], (*cfg.bc_points)[1]};
    sc.method = cfg.solve_method == "picard" ? BoundedSolveMethod::picard
                                             : BoundedSolveMethod::collocation;
    std::optional<BoundedSolution> sol;
    try {
        sol = solve_bounded_eigenproblem(zero_if_empty(cfg.bulk_potential()), sc, d, cfg.params);
    } catch (const SolverFailure& f) {
        log << "solver failed after " << f.iterations << " iterations (last update "
            << format_double(f.last_update) << "): " << f.what() << '\n';
        return 1;
    }
    const BoundedSolution& r = *sol;
    double interior = 0.0, leakage = 0.0;
    for (std::size_t k = 0; k < r.x.size(); ++k) {
        if (d.contains(r.x[k])) {
            interior = std::max(interior, std::abs(r.values[k]));
        } else {
            leakage = std::max(leakage, std::abs(r.values[k]));
        }
    }
    write_file_atomic(cfg.output_dir / "solution.csv", wavefunction_csv(r.psi, r.x));
    std::string rep = "key,value\n";
    rep += "iterations," + std::to_string(r.iterations) + '\n';
    rep += "last_update," + format_double(r.last_update) + '\n';
    rep += "interior_max," + format_double(interior) + '\n';
    rep += "leakage_max," + format_double(leakage) + '\n';
    write_file_atomic(cfg.output_dir / "solve_report.txt", rep);
    log << "interior max " << format_double(interior) << ", leakage " << format_double(leakage) << '\n';
    return 0;
}

namespace {

std::string index_row(std::size_t id, const std::string& file, const Trajectory& t) {
    return std::to_string(id) + ',' + file + ',' + to_string(t.origin) + ',' +
           format_double(t.epsilon) + ',' + format_double(t.level) + ',' + (t.closed ? "1" : "0") +
           ',' + (t.escaped ? "1" : "0") + ',' + std::to_string(t.samples.size()) + '\n';
}

const char* kIndexHeader = "id,file,origin,epsilon,level,closed,escaped,samples\n";

int contour_mode(const RunConfig& cfg, std::ostream& log) {
    const WignerField F = field_for(cfg);
    std::vector<double> levels = cfg.levels;
    if (levels.empty()) {
        const double mx = *std::max_element(F.values().begin(), F.values().end());
        for (int k = 1; k <= cfg.level_count; ++k) levels.push_back(mx * k / (cfg.level_count + 1));
    }
    const auto contours = exact_trajectories(F, levels);
    std::string index = kIndexHeader;
    for (std::size_t k = 0; k < contours.size(); ++k) {
        const std::string file = numbered("contour", k, ".csv");
        write_file_atomic(cfg.output_dir / file, trajectory_csv(contours[k]));
        index += index_row(k, file, contours[k]);
    }
    write_file_atomic(cfg.output_dir / "contours.csv", contours_csv(contours));
    write_file_atomic(cfg.output_dir / "index.csv", index);
    log << contours.size() << " contours over " << levels.size() << " levels\n";
    return 0;
}

}  // namespace

int cmd_trajectories(const RunConfig& cfg, std::ostream& log) {
    if (cfg.mode == "contours") return contour_mode(cfg, log);
    if (cfg.inits.empty()) throw ConfigError("trajectories.inits is required for mode " + cfg.mode);
    const Domain d = cfg.domain();
    const SmoothedDelta delta(cfg.epsilon);
    OdeOptions ode;
    ode.rtol = cfg.rtol;
    ode.atol = cfg.atol;

    std::optional<EffectiveForceField> force;
    if (cfg.mode == "exact_force") {
        const WignerField F = field_for(cfg);
        const PotentialFn bulk = cfg.bulk_potential();
        const BoundaryPotential vd = boundary_potential(d, delta, cfg.params);
        const PotentialFn total = [bulk, vd](double x) { return vd(x) + (bulk ? bulk(x) : 0.0); };
        force = effective_force(F, total, cfg.params);
        write_file_atomic(cfg.output_dir / "force.csv", force_csv(*force));
        log << "force mask fraction " << format_double(force->mask_fraction()) << '\n';
    }
    const int order = cfg.mode == "order0" ? 0 : (cfg.mode == "order1" ? 1 : 2);

    const std::size_t n = cfg.inits.size();
    std::vector<Trajectory> out(n);
    std::vector<char> failed(n, 0);
    std::vector<std::string> errors(n);
    parallel_for(n, [&](std::size_t k) {
        try {
            if (force) {
                out[k] = force_trajectory(*force, cfg.inits[k], cfg.t_span, cfg.params, ode);
                out[k].epsilon = cfg.epsilon;
            } else {
                TrajectoryOptions to;
                to.domain = d;
                to.ode = ode;
                out[k] = approx_trajectories(order, delta, cfg.inits[k], cfg.t_span, cfg.params, to);
            }
        } catch (const TrajectoryFailure& f) {
            out[k] = f.partial;
            failed[k] = 1;
            errors[k] = f.what();
        }
    });
    std::string index = kIndexHeader;
    int code = 0;
    for (std::size_t k = 0; k < n; ++k) {
        std::string file = numbered("traj", k, ".csv");
        if (failed[k]) {
            file += ".partial";
            code = 1;
            log << "trajectory " << k << " failed: " << errors[k] << '\n';
        }
        write_file_atomic(cfg.output_dir / file, trajectory_csv(out[k]));
        index += index_row(k, file, out[k]);
    }
    write_file_atomic(cfg.output_dir / "index.csv", index);
    log << n << " trajectories, mode " << cfg.mode << '\n';
    return code;
}

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log) {
    if (name == "transform") return cmd_transform(cfg, log);
    if (name == "spectrum") return cmd_spectrum(cfg, log);
    if (name == "verify") return cmd_verify(cfg, log);
    if (name == "solve") return cmd_solve(cfg, log);
    if (name == "trajectories") return cmd_trajectories(cfg, log);
    throw ConfigError("unknown command '" + name + "'");
}

}  // namespace wigbound
