#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>

#include "wigbound/wavefunction.hpp"

namespace wigbound {

EigenSolveConfig EigenSolveConfig::standard(const Domain& domain, double epsilon, int taylor_order,
                                            double E, double bc_value) {
    EigenSolveConfig cfg;
    cfg.epsilon = epsilon;
    cfg.taylor_order = taylor_order;
    cfg.E = E;
    cfg.bc_points = {domain.a() + 2.0 * epsilon, domain.b() - 2.0 * epsilon};
    cfg.bc_values = {bc_value, bc_value};
    return cfg;
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

struct Mesh {
    std::vector<double> x;
    double h = 0.0;
    int M = 0;  // nodes per 2 eps shift
};

Mesh build_mesh(const EigenSolveConfig& cfg, const Domain& domain, const SmoothedDelta& delta) {
    double target = cfg.mesh_spacing;
    if (target <= 0.0) target = std::min(delta.epsilon_prime() / 20.0, domain.length() / 2000.0);
    Mesh m;
    m.M = std::max(1, static_cast<int>(std::ceil(2.0 * cfg.epsilon / target)));
    m.h = 2.0 * cfg.epsilon / m.M;
    const double reach = delta.cutoff() + 2.0 * cfg.epsilon + 4.0 * m.h;
    const auto lead = static_cast<long>(std::ceil(reach / m.h));
    const auto interior = static_cast<long>(std::ceil(domain.length() / m.h));
    const long n = interior + 2 * lead + 1;
    m.x.resize(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) m.x[static_cast<std::size_t>(i)] = domain.a() + (i - lead) * m.h;
    return m;
}

// Adds c * (shifted Taylor term at node j with sign s) to row r:
// psi(j) + s*2eps*psi'(j) + 2eps^2*psi''(j), truncated at taylor_order.
void add_shifted(Triplets& t, int r, long j, double c, double s, const EigenSolveConfig& cfg,
                 double h) {
    const double e = cfg.epsilon;
    t.emplace_back(r, static_cast<int>(j), c);
    if (cfg.taylor_order >= 1) {
        const double w = c * s * 2.0 * e / (2.0 * h);
        t.emplace_back(r, static_cast<int>(j + 1), w);
        t.emplace_back(r, static_cast<int>(j - 1), -w);
    }
    if (cfg.taylor_order >= 2) {
        const double w = c * 2.0 * e * e / (h * h);
        t.emplace_back(r, static_cast<int>(j + 1), w);
        t.emplace_back(r, static_cast<int>(j), -2.0 * w);
        t.emplace_back(r, static_cast<int>(j - 1), w);
    }
}

void add_bc_row(Triplets& t, int r, const std::vector<double>& x, double point) {
    const double h = x[1] - x[0];
    long i0 = static_cast<long>(std::floor((point - x.front()) / h)) - 1;
    i0 = std::clamp<long>(i0, 0, static_cast<long>(x.size()) - 4);
    for (int k = 0; k < 4; ++k) {
        double w = 1.0;
        const double xk = x[static_cast<std::size_t>(i0 + k)];
        for (int q = 0; q < 4; ++q) {
            if (q == k) continue;
            const double xq = x[static_cast<std::size_t>(i0 + q)];
            w *= (point - xq) / (xk - xq);
        }
        t.emplace_back(r, static_cast<int>(i0 + k), w);
    }
}

double shifted_value(const Eigen::VectorXd& psi, long j, double s, const EigenSolveConfig& cfg,
                     double h) {
    const double e = cfg.epsilon;
    double v = psi[j];
    if (cfg.taylor_order >= 1) v += s * 2.0 * e * (psi[j + 1] - psi[j - 1]) / (2.0 * h);
    if (cfg.taylor_order >= 2) v += 2.0 * e * e * (psi[j + 1] - 2.0 * psi[j] + psi[j - 1]) / (h * h);
    return v;
}

}  // namespace

BoundedSolution solve_bounded_eigenproblem(const PotentialFn& v_bulk, const EigenSolveConfig& cfg,
                                           const Domain& domain, const PhysicalParams& params) {
    if (cfg.taylor_order < 0 || cfg.taylor_order > 2) {
        throw InvalidArgument("taylor_order must be 0, 1 or 2");
    }
    const auto [p0, p1] = cfg.bc_points;
    if (!(domain.contains(p0) && p0 > domain.a()) || !(domain.contains(p1) && p1 < domain.b()) ||
        !(p0 < p1)) {
        throw InvalidArgument("boundary-condition points must lie strictly inside the domain");
    }
    if (!(cfg.ode_tolerance > 0.0)) throw InvalidArgument("ode_tolerance must be positive");
    const SmoothedDelta delta(cfg.epsilon);
    const Mesh mesh = build_mesh(cfg, domain, delta);
    const auto n = static_cast<long>(mesh.x.size());
    const double h = mesh.h;
    const double k2 = 2.0 * params.mass / (params.hbar * params.hbar);
    const double a = domain.a();
    const double b = domain.b();

    // Interior rows 1..n-2 hold the ODE, rows 0 and n-1 the two boundary values.
    Triplets base;
    Triplets shifts;
    std::vector<double> da(static_cast<std::size_t>(n)), db(static_cast<std::size_t>(n));
    for (long i = 1; i + 1 < n; ++i) {
        const double x = mesh.x[static_cast<std::size_t>(i)];
        const int r = static_cast<int>(i);
        const double v = (v_bulk && domain.contains(x)) ? v_bulk(x) : 0.0;
        base.emplace_back(r, r - 1, 1.0 / (h * h));
        base.emplace_back(r, r, -2.0 / (h * h) - k2 * (v - cfg.E));
        base.emplace_back(r, r + 1, 1.0 / (h * h));
        da[static_cast<std::size_t>(i)] = delta_derivative(delta, x - a, 1);
        db[static_cast<std::size_t>(i)] = delta_derivative(delta, x - b, 1);
        if (da[static_cast<std::size_t>(i)] != 0.0) {
            add_shifted(shifts, r, i + mesh.M, da[static_cast<std::size_t>(i)], -1.0, cfg, h);
        }
        if (db[static_cast<std::size_t>(i)] != 0.0) {
            add_shifted(shifts, r, i - mesh.M, -db[static_cast<std::size_t>(i)], 1.0, cfg, h);
        }
    }
    add_bc_row(base, 0, mesh.x, p0);
    add_bc_row(base, static_cast<int>(n - 1), mesh.x, p1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs[0] = cfg.bc_values.first;
    rhs[n - 1] = cfg.bc_values.second;

    Eigen::SparseMatrix<double> A(n, n);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    Eigen::VectorXd psi;
    int iterations = 0;
    double last_update = 0.0;

    if (cfg.method == BoundedSolveMethod::collocation) {
        Triplets all = base;
        all.insert(all.end(), shifts.begin(), shifts.end());
        A.setFromTriplets(all.begin(), all.end());
        lu.compute(A);
        if (lu.info() != Eigen::Success) throw SolverFailure("collocation matrix is singular", 0, 0.0);
        psi = lu.solve(rhs);
        iterations = 1;
    } else {
        A.setFromTriplets(base.begin(), base.end());
        lu.compute(A);
        if (lu.info() != Eigen::Success) throw SolverFailure("bulk operator is singular", 0, 0.0);
        psi = lu.solve(rhs);
        bool converged = false;
        while (iterations < cfg.max_iterations) {
            ++iterations;
            Eigen::VectorXd src = rhs;
            for (long i = 1; i + 1 < n; ++i) {
                const auto u = static_cast<std::size_t>(i);
                double s = 0.0;
                if (da[u] != 0.0) s += da[u] * shifted_value(psi, i + mesh.M, -1.0, cfg, h);
                if (db[u] != 0.0) s -= db[u] * shifted_value(psi, i - mesh.M, 1.0, cfg, h);
                src[i] = -s;
            }
            Eigen::VectorXd next = lu.solve(src);
            last_update = (next - psi).cwiseAbs().maxCoeff();
            psi = std::move(next);
            if (!std::isfinite(last_update)) break;
            if (last_update < cfg.ode_tolerance) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw SolverFailure("shifted-term iteration did not converge", iterations, last_update);
        }
    }

    std::vector<cplx> values(static_cast<std::size_t>(n));
    std::vector<double> real(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        real[static_cast<std::size_t>(i)] = psi[i];
        values[static_cast<std::size_t>(i)] = psi[i];
    }
    return BoundedSolution{
        Wavefunction::sampled(mesh.x, std::move(values), domain, WavefunctionKind::smooth_confined),
        mesh.x, std::move(real), iterations, last_update};
}

double shooting_mismatch(const PotentialFn& v_bulk, const Domain& domain, double E,
                         const PhysicalParams& params) {
    const double k2 = 2.0 * params.mass / (params.hbar * params.hbar);
    OdeOptions opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-14;
    opt.h_init = 1e-4 * domain.length();
    auto rhs = [&](double x, const std::array<double, 2>& y) {
        return std::array<double, 2>{y[1], k2 * ((v_bulk ? v_bulk(x) : 0.0) - E) * y[0]};
    };
    const auto y = integrate_dopri<2>(rhs, {0.0, 1.0}, domain.a(), domain.b(), opt);
    return y[0];
}

std::vector<SpectrumPoint> energy_scan(const PotentialFn& v_bulk, const Domain& domain,
                                       double E_lo, double E_hi, int n_samples,
                                       const PhysicalParams& params) {
    std::vector<SpectrumPoint> out;
    if (!(E_hi > E_lo)) return out;
    if (n_samples < 2) throw InvalidArgument("energy_scan needs at least two samples");
    const auto ns = static_cast<std::size_t>(n_samples);
    std::vector<double> E(ns), m(ns);
    for (std::size_t i = 0; i < ns; ++i) {
        E[i] = E_lo + (E_hi - E_lo) * static_cast<double>(i) / static_cast<double>(ns - 1);
    }
    parallel_for(ns, [&](std::size_t i) { m[i] = shooting_mismatch(v_bulk, domain, E[i], params); });

    auto bisect = [&](double lo, double hi, double mlo) {
        for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double mm = shooting_mismatch(v_bulk, domain, mid, params);
            if ((mm < 0.0) == (mlo < 0.0)) {
                lo = mid;
                mlo = mm;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    };

    std::vector<std::pair<std::size_t, bool>> brackets;  // (index, is_tangency)
    for (std::size_t i = 0; i < ns; ++i) {
        if (m[i] == 0.0) {
            out.push_back({E[i], 0.0, false});
            continue;
        }
        if (i + 1 < ns && m[i + 1] != 0.0 && (m[i] < 0.0) != (m[i + 1] < 0.0)) {
            brackets.emplace_back(i, false);
        } else if (i > 0 && i + 1 < ns && std::abs(m[i]) < 1e-7 &&
                   std::abs(m[i]) <= std::abs(m[i - 1]) && std::abs(m[i]) <= std::abs(m[i + 1]) &&
                   (m[i] < 0.0) == (m[i - 1] < 0.0) && (m[i] < 0.0) == (m[i + 1] < 0.0)) {
            brackets.emplace_back(i, true);
        }
    }
    std::vector<SpectrumPoint> found(brackets.size());
    parallel_for(brackets.size(), [&](std::size_t k) {
        const auto [i, tangent] = brackets[k];
        if (tangent) {
            found[k] = {E[i], m[i], true};
            return;
        }
        const double root = bisect(E[i], E[i + 1], m[i]);
        found[k] = {root, shooting_mismatch(v_bulk, domain, root, params), false};
    });
    out.insert(out.end(), found.begin(), found.end());
    std::sort(out.begin(), out.end(),
              [](const SpectrumPoint& l, const SpectrumPoint& r) { return l.E < r.E; });
    return out;
}

}  // namespace wigbound
