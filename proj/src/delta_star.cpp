#include <cmath>
#include <numbers>

#include "wigbound/numerics.hpp"
#include "wigbound/star.hpp"

namespace wigbound {

namespace {

bool use_kernel(const WignerField& F, const DeltaStarOptions& opt) {
    switch (opt.method) {
        // Grid-only fields reconstruct the kernel by p-quadrature.
        case DeltaStarMethod::kernel: return true;
        case DeltaStarMethod::k_integral: return false;
        case DeltaStarMethod::automatic: break;
    }
    return F.has_kernel();
}

std::vector<double> eta_levels(const DeltaStarOptions& opt) {
    if (!(opt.epsilon_prime > 0.0)) throw InvalidArgument("epsilon' must be positive");
    if (!opt.eta_levels.empty()) {
        for (double e : opt.eta_levels) {
            if (!(e >= 0.0)) throw InvalidArgument("eta levels must be non-negative");
        }
        return opt.eta_levels;
    }
    const double e = opt.epsilon_prime;
    return {6.0 * e, 8.0 * e, 10.0 * e};
}

// One offset level of delta'(x - c) * F(x + s eta, p) for all p, y-space form.
// Left:  (1/pi hbar) int dy delta'(x - c + y) exp(-2ipy/hbar) Ft(x + s eta, y).
// Right: the same with delta'(x - c - y).
std::vector<cplx> kernel_level(const WignerField& F, double c, double xe, double x,
                               StarSide direction, std::span<const double> p,
                               const DeltaStarOptions& opt) {
    const SmoothedDelta delta(opt.epsilon_prime / 0.8);
    const double hbar = F.params().hbar;
    const double sgn = direction == StarSide::left ? 1.0 : -1.0;
    const double y0 = sgn * (c - x);
    const double half = 6.0 * opt.epsilon_prime;
    const int n = std::max(2, opt.y_intervals + (opt.y_intervals % 2));
    const auto w = simpson_weights(static_cast<std::size_t>(n), 2.0 * half / n);
    std::vector<cplx> acc(p.size(), 0.0);
    for (int m = 0; m <= n; ++m) {
        const double y = y0 - half + 2.0 * half * m / n;
        const double d1 = delta_derivative(delta, x - c + sgn * y, 1);
        if (d1 == 0.0) continue;
        const cplx ft = F.kernel(xe, y);
        if (ft == 0.0) continue;
        const cplx g = w[static_cast<std::size_t>(m)] * d1 * ft;
        for (std::size_t j = 0; j < p.size(); ++j) {
            acc[j] += g * std::polar(1.0, -2.0 * p[j] * y / hbar);
        }
    }
    const double scale = 1.0 / (std::numbers::pi * hbar);
    for (auto& v : acc) v *= scale;
    return acc;
}

// Left: (i/2pi) int dk k exp(ik(x - c)) exp(-k^2 eps'^2/4) F(xe, p - hbar k/2); right uses p + hbar k/2.
std::vector<cplx> k_level(const WignerField& F, double c, double xe, double x,
                          StarSide direction, std::span<const double> p,
                          const DeltaStarOptions& opt, std::vector<std::string>* warnings) {
    const double hbar = F.params().hbar;
    const double ep = opt.epsilon_prime;
    const double kmax = 8.0 / ep;
    const int n = std::max(2, opt.k_nodes + (opt.k_nodes % 2));
    const double dk = 2.0 * kmax / n;
    const auto w = simpson_weights(static_cast<std::size_t>(n), dk);
    const double sgn = direction == StarSide::left ? -1.0 : 1.0;
    const double pmax = F.grid().p_max();
    bool truncated = false;
    std::vector<cplx> acc(p.size(), 0.0);
    std::vector<double> pk(static_cast<std::size_t>(n) + 1);
    std::vector<double> fk(pk.size());
    for (std::size_t j = 0; j < p.size(); ++j) {
        for (int m = 0; m <= n; ++m) {
            const double k = -kmax + m * dk;
            pk[static_cast<std::size_t>(m)] = p[j] + sgn * 0.5 * hbar * k;
        }
        if (!F.has_evaluator() && (std::abs(pk.front()) > pmax || std::abs(pk.back()) > pmax)) {
            truncated = true;
        }
        F.row(xe, pk, fk);
        cplx s = 0.0;
        for (int m = 0; m <= n; ++m) {
            const double k = -kmax + m * dk;
            const std::size_t u = static_cast<std::size_t>(m);
            s += w[u] * k * std::exp(-0.25 * k * k * ep * ep) * std::polar(1.0, k * (x - c)) * fk[u];
        }
        acc[j] = cplx(0.0, 1.0 / (2.0 * std::numbers::pi)) * s;
    }
    if (truncated && warnings) {
        warnings->push_back("k-integral reaches beyond the momentum grid; values truncated to zero");
    }
    return acc;
}

}  // namespace

std::vector<cplx> delta_prime_star_row(const WignerField& F, Wall wall, Side side_limit,
                                 StarSide direction, double x, std::span<const double> p,
                                 const DeltaStarOptions& opt, std::vector<std::string>* warnings) {
    const double c = wall == Wall::a ? F.domain().a() : F.domain().b();
    const double s = side_limit == Side::plus ? 1.0 : -1.0;
    const bool kernel = use_kernel(F, opt);
    const auto etas = eta_levels(opt);
    std::vector<std::vector<cplx>> lv;
    lv.reserve(etas.size());
    for (double eta : etas) {
        const double xe = x + s * eta;
        lv.push_back(kernel ? kernel_level(F, c, xe, x, direction, p, opt)
                            : k_level(F, c, xe, x, direction, p, opt, warnings));
    }
    if (lv.size() == 1) return lv.front();
    std::vector<cplx> out(p.size());
    std::vector<double> re(lv.size()), im(lv.size());
    for (std::size_t j = 0; j < p.size(); ++j) {
        for (std::size_t l = 0; l < lv.size(); ++l) {
            re[l] = lv[l][j].real();
            im[l] = lv[l][j].imag();
        }
        out[j] = cplx(extrapolate_to_zero(etas, re), extrapolate_to_zero(etas, im));
    }
    return out;
}

cplx delta_prime_star_at(const WignerField& F, Wall wall, Side side_limit, StarSide direction,
                         double x, double p, const DeltaStarOptions& opt,
                         std::vector<std::string>* warnings) {
    const double pp[1] = {p};
    return delta_prime_star_row(F, wall, side_limit, direction, x, pp, opt, warnings).front();
}

ComplexField delta_prime_star(const WignerField& F, Wall wall, Side side_limit,
                              StarSide direction, const DeltaStarOptions& opt) {
    const auto& g = F.grid();
    const std::size_t np = g.np();
    ComplexField out{g, std::vector<cplx>(g.nx() * np, 0.0), {}};
    std::vector<char> warned(g.nx(), 0);
    parallel_for(g.nx(), [&](std::size_t i) {
        std::vector<std::string> w;
        const auto r = delta_prime_star_row(F, wall, side_limit, direction, g.x_nodes[i], g.p_nodes,
                                      opt, &w);
        std::copy(r.begin(), r.end(), out.values.begin() + static_cast<std::ptrdiff_t>(i * np));
        warned[i] = w.empty() ? 0 : 1;
    });
    for (char w : warned) {
        if (w) {
            out.warnings.push_back(
                "k-integral reaches beyond the momentum grid; values truncated to zero");
            break;
        }
    }
    return out;
}

cplx delta_prime_star_closed_form(const Wavefunction& psi, Wall wall, double x, double p,
                                  const PhysicalParams& params, StarSide direction) {
    const Domain& d = psi.domain();
    const double c = wall == Wall::a ? d.a() : d.b();
    const cplx dpsi = psi.one_sided(c, wall == Wall::a ? Side::plus : Side::minus, 1);
    const double hbar = params.hbar;
    const cplx left = -std::polar(1.0, -2.0 * p * (c - x) / hbar) * std::conj(psi(2.0 * x - c)) *
                      dpsi / (std::numbers::pi * hbar);
    if (direction == StarSide::left) return left;
    return -std::polar(1.0, -2.0 * p * (x - c) / hbar) * std::conj(dpsi) * psi(2.0 * x - c) /
           (std::numbers::pi * hbar);
}

namespace {

// E-independent part of the residual for one star direction.
ComplexField residual_base(const WignerField& F, const PotentialFn& v_bulk,
                           const PhysicalParams& params, StarSide direction,
                           const ResidualOptions& opt) {
    const auto& g = F.grid();
    const std::size_t nx = g.nx();
    const std::size_t np = g.np();
    if (opt.collar < 0 || 2 * static_cast<std::size_t>(opt.collar) >= nx) {
        throw InvalidArgument("residual collar leaves no interior nodes");
    }
    const std::size_t lo = static_cast<std::size_t>(opt.collar);
    const std::size_t hi = nx - 1 - lo;
    const double hbar = params.hbar;
    const double m = params.mass;
    const double sgn = direction == StarSide::left ? 1.0 : -1.0;
    const double cb = hbar * hbar / (2.0 * m);
    ComplexField out{g, std::vector<cplx>(nx * np, 0.0), {}};
    std::vector<char> warned(nx, 0);
    parallel_for(hi - lo + 1, [&](std::size_t k) {
        const std::size_t i = lo + k;
        const double x = g.x_nodes[i];
        const XDerivatives d = x_derivatives(F, x);
        std::vector<cplx> vf;
        if (v_bulk) vf = potential_star_row(F, v_bulk, x, direction);
        std::vector<cplx> da, db;
        std::vector<std::string> w;
        if (opt.boundary_terms) {
            da = delta_prime_star_row(F, Wall::a, Side::plus, direction, x, g.p_nodes, opt.delta, &w);
            db = delta_prime_star_row(F, Wall::b, Side::minus, direction, x, g.p_nodes, opt.delta, &w);
        }
        warned[i] = w.empty() ? 0 : 1;
        cplx* o = out.values.data() + i * np;
        for (std::size_t j = 0; j < np; ++j) {
            const double p = g.p_nodes[j];
            cplx v = (p * p * F.at(i, j) + cplx(0.0, -sgn * hbar * p * d.d1[j]) -
                      0.25 * hbar * hbar * d.d2[j]) /
                     (2.0 * m);
            if (v_bulk) v += vf[j];
            if (opt.boundary_terms) v += -cb * da[j] + cb * db[j];
            o[j] = v;
        }
    });
    for (char w : warned) {
        if (w) {
            out.warnings.push_back(
                "k-integral reaches beyond the momentum grid; values truncated to zero");
            break;
        }
    }
    return out;
}

double subtract_energy(ComplexField& f, const WignerField& F, double E, int collar) {
    const auto& g = F.grid();
    const std::size_t lo = static_cast<std::size_t>(collar);
    const std::size_t hi = g.nx() - 1 - lo;
    double sup = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) {
        for (std::size_t j = 0; j < g.np(); ++j) {
            cplx& v = f.values[g.flat(i, j)];
            v -= E * F.at(i, j);
            sup = std::max(sup, std::abs(v));
        }
    }
    return sup;
}

}  // namespace

ResidualResult stargenvalue_residual(const WignerField& F, const PotentialFn& v_bulk, double E,
                                     const PhysicalParams& params, ResidualSide which,
                                     const ResidualOptions& opt) {
    if (!std::isfinite(E)) throw InvalidArgument("energy must be finite");
    ResidualResult r{ComplexField{}, std::nullopt, 0.0, 0.0, 0.0, opt.collar};
    const bool want_left = which != ResidualSide::right;
    const bool want_right = which != ResidualSide::left;
    if (want_left) {
        r.field = residual_base(F, v_bulk, params, StarSide::left, opt);
        r.sup_left = subtract_energy(r.field, F, E, opt.collar);
    }
    if (want_right) {
        ComplexField right = residual_base(F, v_bulk, params, StarSide::right, opt);
        r.sup_right = subtract_energy(right, F, E, opt.collar);
        if (want_left) {
            r.right = std::move(right);
        } else {
            r.field = std::move(right);
        }
    }
    r.sup = std::max(r.sup_left, r.sup_right);
    return r;
}

std::vector<double> residual_energy_sweep(const WignerField& F, const PotentialFn& v_bulk,
                                          const std::vector<double>& energies,
                                          const PhysicalParams& params,
                                          const ResidualOptions& opt) {
    const ComplexField base = residual_base(F, v_bulk, params, StarSide::left, opt);
    std::vector<double> out;
    out.reserve(energies.size());
    for (double E : energies) {
        if (!std::isfinite(E)) throw InvalidArgument("energy must be finite");
        ComplexField f = base;
        out.push_back(subtract_energy(f, F, E, opt.collar));
    }
    return out;
}

}  // namespace wigbound
