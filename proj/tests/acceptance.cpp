// Acceptance run at desk scale: 257 x 257 grid, hbar = m = 1, box ]-1, 1[.
// Prints one PASS/FAIL line per criterion and exits non-zero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "wigbound/app.hpp"
#include "wigbound/dynamics.hpp"

using namespace wigbound;
using std::numbers::pi;

namespace {

const PhysicalParams P;
const Domain box(-1.0, 1.0);

PhaseSpaceGrid desk_grid() { return make_phase_grid(box, 257, 257, default_p_max(box, P)); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double sup_abs(const WignerField& F) {
    double m = 0.0;
    for (double v : F.values()) m = std::max(m, std::abs(v));
    return m;
}

// Collects sub-results of one criterion.
struct Verdict {
    bool ok = true;
    std::string detail;

    void need(bool cond, const std::string& what) {
        ok = ok && cond;
        if (!detail.empty()) detail += "; ";
        detail += what + (cond ? "" : " [fail]");
    }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Verdict spectrum() {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    const auto scan = energy_scan({}, box, 0.1, 15.0, 400, P);
    const double t = seconds_since(t0);
    double worst = 1.0;
    if (scan.size() >= 3) {
        worst = 0.0;
        for (int n = 1; n <= 3; ++n) {
            const double exact = pi * pi * n * n / 8.0;
            worst = std::max(worst, std::abs(scan[n - 1].E - exact) / exact);
        }
    }
    v.need(worst <= 1e-6, fmt("max relative error %.2e", worst));
    v.need(t < 10.0, fmt("%.2f s", t));
    return v;
}

Verdict transform_agreement() {
    Verdict v;
    const auto g = desk_grid();
    const auto t0 = std::chrono::steady_clock::now();
    const auto Fn = wigner_transform(well_eigenstate(1, 2.0, P).wavefunction(), g, P);
    const double t = seconds_since(t0);
    const auto Fa = analytic_well_wigner(1, 2.0, P, g);
    double e = 0.0;
    for (std::size_t k = 0; k < Fn.values().size(); ++k) {
        e = std::max(e, std::abs(Fn.values()[k] - Fa.values()[k]));
    }
    v.need(e <= 1e-6, fmt("sup difference %.2e", e));
    v.need(t < 60.0, fmt("%.2f s", t));
    return v;
}

Verdict boundary_suite() {
    Verdict v;
    const auto g = desk_grid();
    for (int n = 1; n <= 3; ++n) {
        const auto F = wigner_transform(well_eigenstate(n, 2.0, P).wavefunction(), g, P);
        auto r = check_consistency(F, 1e-6);
        r.append(check_dirichlet_subsidiary(F, 1e-6));
        r.append(check_integral_dirichlet(F, 1e-6));
        double worst = 0.0;
        for (const auto& c : r.checks) {
            if (!c.expected) worst = std::max(worst, c.measured_max);
        }
        v.need(r.all_pass(), "n=" + std::to_string(n) + fmt(" worst %.2e", worst));
    }
    const auto c = Wavefunction::analytic([](double) { return cplx(std::sqrt(0.5), 0.0); },
                                          [](double) { return cplx(0.0, 0.0); }, box,
                                          WavefunctionKind::confined);
    const auto Fc = wigner_transform(c, g, P);
    const auto sub = check_dirichlet_subsidiary(Fc, 1e-6);
    const auto& neu = sub.find("neumann_left");
    const double slope = std::abs(neu.measured[g.np() / 2]);
    v.need(!neu.pass && std::abs(slope - 1.0 / pi) <= 1e-3, fmt("constant state slope %.6f", slope));
    const auto lims = check_integral_dirichlet(Fc, 1e-6);
    const auto& integ = lims.find("integral_dirichlet_left");
    const double lim = integ.measured.front();
    v.need(!integ.pass && std::abs(lim - 0.5) <= 1e-3, fmt("constant state integral limit %.6f", lim));
    return v;
}

Verdict residual() {
    Verdict v;
    const auto g = desk_grid();
    const auto F = analytic_well_wigner(1, 2.0, P, g);
    const double E1 = well_eigenstate(1, 2.0, P).E_n;
    const auto r = stargenvalue_residual(F, {}, E1, P, ResidualSide::both);
    v.need(r.sup <= 1e-4, fmt("residual %.2e", r.sup));
    ResidualOptions off;
    off.boundary_terms = false;
    const double bare = stargenvalue_residual(F, {}, E1, P, ResidualSide::left, off).sup;
    v.need(bare >= 0.1, fmt("without boundary terms %.3f", bare));
    std::vector<double> energies;
    for (int k = 0; k < 41; ++k) energies.push_back(E1 + 0.05 * (k - 20));
    const auto sweep = residual_energy_sweep(F, {}, energies, P);
    const auto best = std::min_element(sweep.begin(), sweep.end()) - sweep.begin();
    v.need(best == 20, "sweep argmin index " + std::to_string(best) + " of 41");
    return v;
}

// Sup over a grid of |numeric - closed form| for both walls.
double delta_star_discrepancy(int n, double eps_prime) {
    const auto g = make_phase_grid(box, 33, 65, default_p_max(box, P));
    const auto F = analytic_well_wigner(n, 2.0, P, g);
    const auto psi = well_eigenstate(n, 2.0, P).wavefunction();
    DeltaStarOptions o;
    o.epsilon_prime = eps_prime;
    double e = 0.0;
    for (auto [wall, side] : {std::pair{Wall::a, Side::plus}, std::pair{Wall::b, Side::minus}}) {
        const auto S = delta_prime_star(F, wall, side, StarSide::left, o);
        for (std::size_t i = 1; i + 1 < g.nx(); ++i) {
            for (std::size_t j = 0; j < g.np(); ++j) {
                const cplx c = delta_prime_star_closed_form(psi, wall, g.x_nodes[i], g.p_nodes[j], P);
                e = std::max(e, std::abs(S.at(i, j) - c));
            }
        }
    }
    return e;
}

Verdict delta_star() {
    Verdict v;
    const double ep = DeltaStarOptions{}.epsilon_prime;
    for (int n = 1; n <= 3; ++n) {
        const double e1 = delta_star_discrepancy(n, ep);
        const double e2 = delta_star_discrepancy(n, 0.5 * ep);
        v.need(e1 <= 1e-4 && e2 <= 0.5 * e1,
               "n=" + std::to_string(n) + fmt(" %.2e", e1) + fmt(" -> %.2e", e2));
    }
    // The k-integral and y-space routes evaluate the same product; the y window is refined so
    // its Simpson error sits below the comparison tolerance.
    const auto F = analytic_well_wigner(2, 2.0, P, make_phase_grid(box, 17, 33, default_p_max(box, P)));
    DeltaStarOptions o;
    o.epsilon_prime = 0.05;
    o.y_intervals = 3200;
    double d = 0.0;
    for (double x : {-0.6, -0.2, 0.3}) {
        for (double p : {0.0, 1.1, -2.4}) {
            o.method = DeltaStarMethod::kernel;
            const cplx a = delta_prime_star_at(F, Wall::a, Side::plus, StarSide::left, x, p, o);
            o.method = DeltaStarMethod::k_integral;
            const cplx b = delta_prime_star_at(F, Wall::a, Side::plus, StarSide::left, x, p, o);
            d = std::max(d, std::abs(a - b));
        }
    }
    v.need(d <= 1e-7, fmt("k-integral vs y-space %.2e", d));
    return v;
}

Verdict eigensolver() {
    Verdict v;
    const double E1 = pi * pi / 8.0;
    try {
        const auto narrow = solve_bounded_eigenproblem(
            {}, EigenSolveConfig::standard(box, 0.0025, 0, E1, 0.008), box, P);
        double e = 0.0;
        for (std::size_t i = 0; i < narrow.x.size(); ++i) {
            if (std::abs(narrow.x[i]) <= 0.99) {
                e = std::max(e, std::abs(narrow.values[i] - std::cos(pi * narrow.x[i] / 2.0)));
            }
        }
        v.need(e <= 1e-3, fmt("narrow walls sup error %.2e", e));
    } catch (const SolverFailure& f) {
        v.need(false, std::string("narrow walls: ") + f.what());
    }
    try {
        const auto broad = solve_bounded_eigenproblem(
            {}, EigenSolveConfig::standard(box, 0.25, 2, E1, 0.707), box, P);
        double mx = 0.0, leak = 0.0;
        for (std::size_t i = 0; i < broad.x.size(); ++i) {
            mx = std::max(mx, broad.values[i]);
            if (std::abs(broad.x[i]) > 1.0) leak = std::max(leak, std::abs(broad.values[i]));
        }
        v.need(std::abs(mx - 1.0) <= 0.05, fmt("broad walls interior max %.4f", mx));
        v.need(leak > 1e-3, fmt("leakage %.3f", leak));
    } catch (const SolverFailure& f) {
        v.need(false, std::string("broad walls: ") + f.what());
    }
    return v;
}

Verdict dynamics() {
    Verdict v;
    const auto g = desk_grid();
    for (int n = 1; n <= 3; ++n) {
        const auto r = moyal_rhs(analytic_well_wigner(n, 2.0, P, g), {}, P);
        const double s = sup_abs(r), c = std::abs(phase_space_integral(r));
        v.need(s <= 1e-4 && c <= 1e-6,
               "n=" + std::to_string(n) + fmt(" stationarity %.2e", s) + fmt(" conservation %.2e", c));
    }
    const auto s1 = well_eigenstate(1, 2.0, P), s2 = well_eigenstate(2, 2.0, P);
    auto evolved = [&](double t) {
        return superpose({{std::polar(1.0, -s1.E_n * t), s1.wavefunction()},
                          {std::polar(1.0, -s2.E_n * t), s2.wavefunction()}});
    };
    const auto r = moyal_rhs(wigner_transform(evolved(0.0), g, P), {}, P);
    const double c = std::abs(phase_space_integral(r));
    v.need(c <= 1e-5, fmt("superposition conservation %.2e", c));
    // The two-level field oscillates at (E2 - E1)/hbar = 3 pi^2 / 8; central difference in time.
    const double dt = 1e-3;
    const auto Fp = wigner_transform(evolved(dt), g, P);
    const auto Fm = wigner_transform(evolved(-dt), g, P);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 2; i + 2 < g.nx(); ++i) {
        for (std::size_t j = 0; j < g.np(); ++j) {
            const double dFdt = (Fp.at(i, j) - Fm.at(i, j)) / (2.0 * dt);
            err = std::max(err, std::abs(dFdt - r.at(i, j)));
            scale = std::max(scale, std::abs(dFdt));
        }
    }
    v.need(err / scale <= 1e-3, fmt("beat derivative relative error %.2e", err / scale));
    return v;
}

Verdict trajectories() {
    Verdict v;
    const SmoothedDelta D(0.25);
    {
        const auto t = approx_trajectories(0, SmoothedDelta(0.025), {0.0, 0.5}, {0.0, 1.0}, P);
        const auto e = t.samples.back();
        v.need(std::abs(e.x - 0.5) + std::abs(e.p - 0.5) <= 1e-12, "order-0 interior inertial");
    }
    double worst = 0.0;
    for (int k = 0; k <= 400; ++k) {
        const double x = -1.2 + 0.006 * k;
        auto diff = [&](int m) { return delta_derivative(D, x + 1.0, m) - delta_derivative(D, x - 1.0, m); };
        const double f0 = approx_force(0, D, x, P, box);
        const double f1 = approx_force(1, D, x, P, box);
        const double f2 = approx_force(2, D, x, P, box);
        worst = std::max(worst, std::abs((f1 - f0) - diff(4) / 48.0));
        worst = std::max(worst, std::abs((f2 - f1) + diff(6) / 3840.0));
    }
    v.need(worst <= 1e-12, fmt("order corrections %.1e", worst));
    TrajectoryOptions tight;
    tight.ode.rtol = 1e-11;
    tight.ode.atol = 1e-14;
    double rev = 0.0;
    for (int k = 0; k <= 2; ++k) {
        const auto f = approx_trajectories(k, D, {0.3, 1.3}, {0.0, 5.0}, P, tight).samples.back();
        const auto b = approx_trajectories(k, D, {f.x, f.p}, {5.0, 0.0}, P, tight).samples.back();
        rev = std::max({rev, std::abs(b.x - 0.3) / (10.0 * tight.ode.rtol * 1.0),
                        std::abs(b.p - 1.3) / (10.0 * tight.ode.rtol * 1.3)});
    }
    v.need(rev <= 1.0, fmt("forward-backward error %.2f x (10 rtol)", rev));
    {
        const auto t = approx_trajectories(0, D, {0.0, 1.0}, {0.0, 20.0}, P);
        double pmin = 1e9;
        for (const auto& s : t.samples) pmin = std::min(pmin, s.p);
        v.need(!t.escaped && pmin < -0.99, fmt("p0=1 reflects, p_min %.4f", pmin));
    }
    const double th = escape_threshold(0, D, P, TrajectoryOptions{}, 0.5, 50.0);
    TrajectoryOptions stop;
    stop.stop_on_escape = true;
    const bool above = approx_trajectories(0, D, {0.0, 1.01 * th}, {0.0, 20.0 / th}, P, stop).escaped;
    v.need(above, fmt("escape threshold %.6f", th));
    return v;
}

Verdict figures() {
    Verdict v;
    const auto out = std::filesystem::temp_directory_path() / "wigbound_acceptance";
    std::filesystem::remove_all(out);
    for (const char* name : {"fig4_contours", "fig5_order0", "fig6_order1", "fig7_order2"}) {
        auto cfg = load_config(std::filesystem::path(WIGBOUND_CONFIG_DIR) / (std::string(name) + ".yaml"));
        cfg.output_dir = out / name;
        std::ostringstream log;
        const int rc = cmd_trajectories(cfg, log);
        v.need(rc == 0 && std::filesystem::exists(cfg.output_dir / "index.csv"), name);
    }
    const auto g = desk_grid();
    const auto F = analytic_well_wigner(1, 2.0, P, g);
    double mx = 0.0;
    for (double x : F.values()) mx = std::max(mx, x);
    std::vector<double> levels;
    for (int k = 1; k <= 8; ++k) levels.push_back(mx * k / 9.0);
    int closed = 0;
    const auto cs = exact_trajectories(F, levels);
    for (const auto& c : cs) closed += c.closed;
    v.need(!cs.empty() && closed == static_cast<int>(cs.size()),
           std::to_string(closed) + " closed contours");
    const SmoothedDelta D(0.25);
    const auto island = approx_trajectories(2, D, {0.5, 0.2}, {0.0, 20.0}, P);
    double xmin = 1e9;
    for (const auto& s : island.samples) xmin = std::min(xmin, s.x);
    v.need(xmin > 0.0, fmt("order-2 island stays at x > %.3f", xmin));
    const auto deflect = approx_trajectories(1, D, {0.0, 1.5}, {0.0, 3.0}, P);
    double pspread = 0.0;
    for (const auto& s : deflect.samples) pspread = std::max(pspread, std::abs(s.p - 1.5));
    v.need(pspread > 0.1, fmt("momentum deflection %.3f", pspread));
    return v;
}

Verdict baker() {
    Verdict v;
    const auto g = desk_grid();
    auto fidelity = [&](const Wavefunction& psi) {
        try {
            return std::abs(overlap(reconstruct_wavefunction(wigner_transform(psi, g, P)), psi));
        } catch (const NotPureState&) {
            return 0.0;
        }
    };
    double worst = 1.0;
    for (int n = 1; n <= 3; ++n) worst = std::min(worst, fidelity(well_eigenstate(n, 2.0, P).wavefunction()));
    const auto sup = superpose({{1.0, well_eigenstate(1, 2.0, P).wavefunction()},
                                {cplx(0.0, 1.0), well_eigenstate(2, 2.0, P).wavefunction()}});
    worst = std::min(worst, fidelity(sup));
    v.need(worst >= 1.0 - 1e-6, fmt("worst fidelity 1 - %.2e", 1.0 - worst));
    const auto mix = combine({{0.5, analytic_well_wigner(1, 2.0, P, g)}, {0.5, analytic_well_wigner(2, 2.0, P, g)}});
    bool rejected = false;
    try {
        reconstruct_wavefunction(mix);
    } catch (const NotPureState&) {
        rejected = true;
    }
    v.need(rejected, "mixture rejected");
    return v;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"spectrum reproduction", spectrum},
        {"analytic/numeric Wigner agreement", transform_agreement},
        {"boundary-condition suite", boundary_suite},
        {"boundary star-genvalue residual", residual},
        {"delta-prime star oracle", delta_star},
        {"bounded eigensolver", eigensolver},
        {"dynamics", dynamics},
        {"trajectory hierarchy", [] {
             Verdict a = trajectories();
             const Verdict b = figures();
             a.need(b.ok, b.detail);
             return a;
         }},
        {"Baker round trip", baker},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[k].second();
        } catch (const std::exception& e) {
            v.need(false, std::string("exception: ") + e.what());
        }
        failed += !v.ok;
        std::printf("%s %zu %s: %s (%.1f s)\n", v.ok ? "PASS" : "FAIL", k + 1, criteria[k].first,
                    v.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
