#include "wigbound/dynamics.hpp"

#include <cmath>
#include <numbers>

namespace wigbound {

namespace {

std::vector<double> bracket(const std::vector<cplx>& l, const std::vector<cplx>& r, double hbar) {
    const cplx ih(0.0, hbar);
    std::vector<double> out(l.size());
    for (std::size_t j = 0; j < l.size(); ++j) out[j] = ((l[j] - r[j]) / ih).real();
    return out;
}

}  // namespace

WignerField moyal_rhs(const WignerField& F, const PotentialFn& v_bulk, const PhysicalParams& params,
                      const MoyalOptions& opt) {
    const auto& g = F.grid();
    const std::size_t nx = g.nx();
    const std::size_t np = g.np();
    if (opt.collar < 0 || 2 * static_cast<std::size_t>(opt.collar) >= nx) {
        throw InvalidArgument("rhs collar leaves no interior nodes");
    }
    const std::size_t lo = static_cast<std::size_t>(opt.collar);
    const std::size_t hi = nx - 1 - lo;
    const double hbar = params.hbar;
    const double m = params.mass;
    const double cb = hbar * hbar / (2.0 * m);
    std::vector<double> out(nx * np, 0.0);
    parallel_for(hi - lo + 1, [&](std::size_t k) {
        const std::size_t i = lo + k;
        const double x = g.x_nodes[i];
        const XDerivatives d = x_derivatives(F, x);
        double* o = out.data() + i * np;
        for (std::size_t j = 0; j < np; ++j) o[j] = -g.p_nodes[j] / m * d.d1[j];
        if (v_bulk) {
            const auto b = bracket(potential_star_row(F, v_bulk, x, StarSide::left),
                                   potential_star_row(F, v_bulk, x, StarSide::right), hbar);
            for (std::size_t j = 0; j < np; ++j) o[j] += b[j];
        }
        const auto ba = bracket(
            delta_prime_star_row(F, Wall::a, Side::plus, StarSide::left, x, g.p_nodes, opt.delta),
            delta_prime_star_row(F, Wall::a, Side::plus, StarSide::right, x, g.p_nodes, opt.delta),
            hbar);
        const auto bb = bracket(
            delta_prime_star_row(F, Wall::b, Side::minus, StarSide::left, x, g.p_nodes, opt.delta),
            delta_prime_star_row(F, Wall::b, Side::minus, StarSide::right, x, g.p_nodes, opt.delta),
            hbar);
        for (std::size_t j = 0; j < np; ++j) o[j] += -cb * ba[j] + cb * bb[j];
    });
    WignerField r(g, std::move(out), Provenance::external, F.params());
    if (F.split()) r.set_split(F.x0());
    return r;
}

double phase_space_integral(const WignerField& F) {
    const auto& g = F.grid();
    auto weights = [](std::size_t n, double h) {
        if ((n - 1) % 2 == 0) return simpson_weights(n - 1, h);
        std::vector<double> w(n, h);
        w.front() = w.back() = 0.5 * h;
        return w;
    };
    const auto wx = weights(g.nx(), g.dx());
    const auto wp = weights(g.np(), g.dp());
    double acc = 0.0;
    for (std::size_t i = 0; i < g.nx(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < g.np(); ++j) row += wp[j] * F.at(i, j);
        acc += wx[i] * row;
    }
    return acc;
}

double check_conservation(const WignerField& F, const PotentialFn& v_bulk,
                          const PhysicalParams& params, const MoyalOptions& opt) {
    return phase_space_integral(moyal_rhs(F, v_bulk, params, opt));
}

WignerField moyal_step_rk4(const WignerField& F, const PotentialFn& v_bulk, double dt,
                           const PhysicalParams& params, const MoyalOptions& opt) {
    if (!std::isfinite(dt)) throw InvalidArgument("time step must be finite");
    MoyalOptions o = opt;
    o.delta.method = DeltaStarMethod::kernel;
    auto shifted = [&](const WignerField& base, const WignerField& k, double h) {
        std::vector<double> v = base.values();
        for (std::size_t n = 0; n < v.size(); ++n) v[n] += h * k.values()[n];
        WignerField s(base.grid(), std::move(v), Provenance::external, base.params());
        if (base.split()) s.set_split(base.x0());
        return s;
    };
    const WignerField k1 = moyal_rhs(F, v_bulk, params, o);
    const WignerField k2 = moyal_rhs(shifted(F, k1, 0.5 * dt), v_bulk, params, o);
    const WignerField k3 = moyal_rhs(shifted(F, k2, 0.5 * dt), v_bulk, params, o);
    const WignerField k4 = moyal_rhs(shifted(F, k3, dt), v_bulk, params, o);
    std::vector<double> v = F.values();
    for (std::size_t n = 0; n < v.size(); ++n) {
        v[n] += dt / 6.0 *
                (k1.values()[n] + 2.0 * k2.values()[n] + 2.0 * k3.values()[n] + k4.values()[n]);
    }
    WignerField r(F.grid(), std::move(v), Provenance::external, F.params());
    if (F.split()) r.set_split(F.x0());
    return r;
}

double EffectiveForceField::mask_fraction() const {
    if (mask.empty()) return 0.0;
    std::size_t n = 0;
    for (char m : mask) n += m ? 1 : 0;
    return static_cast<double>(n) / static_cast<double>(mask.size());
}

double EffectiveForceField::operator()(double x, double p) const {
    const std::size_t nx = grid.nx();
    const std::size_t np = grid.np();
    if (x < grid.x_nodes.front() || x > grid.x_nodes.back()) return 0.0;
    if (p < grid.p_nodes.front() || p > grid.p_nodes.back()) return 0.0;
    const double u = (x - grid.x_nodes.front()) / grid.dx();
    const double v = (p - grid.p_nodes.front()) / grid.dp();
    const std::size_t i = std::min(static_cast<std::size_t>(u), nx - 2);
    const std::size_t j = std::min(static_cast<std::size_t>(v), np - 2);
    const double tu = u - static_cast<double>(i);
    const double tv = v - static_cast<double>(j);
    auto f = [&](std::size_t a, std::size_t b) { return filled[grid.flat(a, b)]; };
    return (1 - tu) * (1 - tv) * f(i, j) + tu * (1 - tv) * f(i + 1, j) + (1 - tu) * tv * f(i, j + 1) +
           tu * tv * f(i + 1, j + 1);
}

std::vector<double> force_numerator(const WignerField& F, const PotentialFn& v_total, double x) {
    return bracket(potential_star_row(F, v_total, x, StarSide::left),
                   potential_star_row(F, v_total, x, StarSide::right), F.params().hbar);
}

double j_kernel(const PotentialFn& v, double x, double p, const PhysicalParams& params,
                double half_width, double damping) {
    // J is real: the odd part of V(x+y) - V(x-y) pairs with sin(2py/hbar).
    constexpr int panels = 64;
    const GaussRule& rule = gauss_legendre(8);
    const double h = half_width / panels;
    const double hbar = params.hbar;
    double acc = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double mid = (2 * k + 1) * 0.5 * h;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double y = mid + 0.5 * h * rule.nodes[q];
            const double damp = damping > 0.0 ? std::exp(-(y / damping) * (y / damping)) : 1.0;
            acc += 0.5 * h * rule.weights[q] * (v(x + y) - v(x - y)) * damp *
                   std::sin(2.0 * p * y / hbar);
        }
    }
    return 2.0 * acc / (std::numbers::pi * hbar * hbar);
}

EffectiveForceField effective_force(const WignerField& F, const PotentialFn& v_total,
                                    const PhysicalParams& params, const ForceOptions& opt) {
    if (!v_total) throw InvalidArgument("effective force needs a potential");
    const auto& g = F.grid();
    const std::size_t nx = g.nx();
    const std::size_t np = g.np();
    EffectiveForceField out;
    out.grid = g;
    out.values.assign(nx * np, 0.0);
    out.mask.assign(nx * np, 1);
    out.j_kernel.assign(nx * np, 0.0);
    std::vector<double> num(nx * np), dfdp(nx * np);
    const double L = g.domain.length();
    const double damping = opt.j_damping > 0.0 ? opt.j_damping : L;
    parallel_for(nx, [&](std::size_t i) {
        const double x = g.x_nodes[i];
        const auto n = force_numerator(F, v_total, x);
        const auto d = p_derivative(F, x, 1);
        for (std::size_t j = 0; j < np; ++j) {
            num[g.flat(i, j)] = n[j];
            dfdp[g.flat(i, j)] = d[j];
            out.j_kernel[g.flat(i, j)] = j_kernel(v_total, x, g.p_nodes[j], params, L, damping);
        }
    });
    double dmax = 0.0;
    for (double d : dfdp) dmax = std::max(dmax, std::abs(d));
    out.floor = opt.floor_relative * dmax;
    bool any = false;
    for (std::size_t k = 0; k < nx * np; ++k) {
        if (dmax > 0.0 && std::abs(dfdp[k]) >= out.floor) {
            out.mask[k] = 0;
            // dV_eff/dx dF/dp = [V, F]_M and the force is -dV_eff/dx.
            out.values[k] = -num[k] / dfdp[k];
            any = true;
        }
    }
    if (!any) throw DegenerateField("dF/dp vanishes at every node; effective force undefined");
    out.filled = out.values;
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < np; ++j) {
            if (!out.mask[g.flat(i, j)]) continue;
            std::ptrdiff_t lo = static_cast<std::ptrdiff_t>(j) - 1;
            std::size_t hi = j + 1;
            while (lo >= 0 && out.mask[g.flat(i, static_cast<std::size_t>(lo))]) --lo;
            while (hi < np && out.mask[g.flat(i, hi)]) ++hi;
            double v = 0.0;
            if (lo >= 0 && hi < np) {
                const double fl = out.values[g.flat(i, static_cast<std::size_t>(lo))];
                const double fh = out.values[g.flat(i, hi)];
                const double t = static_cast<double>(j - static_cast<std::size_t>(lo)) /
                                 static_cast<double>(hi - static_cast<std::size_t>(lo));
                v = (1 - t) * fl + t * fh;
            } else if (lo >= 0) {
                v = out.values[g.flat(i, static_cast<std::size_t>(lo))];
            } else if (hi < np) {
                v = out.values[g.flat(i, hi)];
            }
            out.filled[g.flat(i, j)] = v;
        }
    }
    return out;
}

}  // namespace wigbound
