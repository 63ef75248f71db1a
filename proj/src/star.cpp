#include "wigbound/star.hpp"

#include "wigbound/numerics.hpp"

#include <cmath>
#include <numbers>

namespace wigbound {

SymbolSpec SymbolSpec::kinetic(const PhysicalParams& params) {
    SymbolSpec s;
    s.kind = SymbolKind::kinetic;
    s.params = params;
    return s;
}

SymbolSpec SymbolSpec::polynomial(std::vector<double> coefficients, const PhysicalParams& params) {
    if (coefficients.empty()) coefficients.push_back(0.0);
    if (coefficients.size() > 13) throw InvalidArgument("polynomial symbols are limited to degree 12");
    for (double c : coefficients) {
        if (!std::isfinite(c)) throw InvalidArgument("polynomial coefficients must be finite");
    }
    SymbolSpec s;
    s.kind = SymbolKind::polynomial_potential;
    s.coefficients = std::move(coefficients);
    s.params = params;
    return s;
}

SymbolSpec SymbolSpec::delta_prime(Wall wall, const SmoothedDelta& delta,
                                   const PhysicalParams& params) {
    SymbolSpec s;
    s.kind = SymbolKind::boundary_delta_prime;
    s.wall = wall;
    s.delta = delta;
    s.params = params;
    return s;
}

StarTruncation StarTruncation::series(int order) {
    if (order < 0) throw InvalidArgument("truncation order must be non-negative");
    return StarTruncation{order, false};
}

StarTruncation StarTruncation::exact() { return StarTruncation{0, true}; }

double ComplexField::sup_norm() const {
    double m = 0.0;
    for (const cplx& v : values) m = std::max(m, std::abs(v));
    return m;
}

WignerField ComplexField::real_part(const PhysicalParams& params) const {
    std::vector<double> re(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) re[k] = values[k].real();
    return WignerField(grid, std::move(re), Provenance::external, params);
}

namespace {

double step_for(const WignerField& F) { return 0.02 * F.params().hbar / F.grid().p_max(); }

}  // namespace

XDerivatives x_derivatives(const WignerField& F, double x, std::optional<Side> side) {
    const double h = step_for(F);
    const double a = F.domain().a();
    const double b = F.domain().b();
    if (!side) {
        if (x - 2.0 * h <= a) {
            side = Side::plus;
        } else if (x + 2.0 * h >= b) {
            side = Side::minus;
        } else if (F.split() && std::abs(x - F.x0()) < 2.0 * h) {
            // F1 owns the split point itself.
            side = x <= F.x0() ? Side::minus : Side::plus;
        }
    }
    const std::size_t np = F.grid().np();
    XDerivatives d{std::vector<double>(np), std::vector<double>(np)};
    if (!side) {
        std::array<std::vector<double>, 5> r;
        for (int k = -2; k <= 2; ++k) r[static_cast<std::size_t>(k + 2)] = F.row(x + k * h);
        for (std::size_t j = 0; j < np; ++j) {
            const std::array<double, 5> f{r[0][j], r[1][j], r[2][j], r[3][j], r[4][j]};
            d.d1[j] = fd_central_d1(f, h);
            d.d2[j] = fd_central_d2(f, h);
        }
        return d;
    }
    const double s = *side == Side::plus ? 1.0 : -1.0;
    std::array<std::vector<double>, 6> r;
    for (int k = 0; k < 6; ++k) r[static_cast<std::size_t>(k)] = F.row(x + s * k * h);
    for (std::size_t j = 0; j < np; ++j) {
        const std::array<double, 6> f{r[0][j], r[1][j], r[2][j], r[3][j], r[4][j], r[5][j]};
        d.d1[j] = s * fd_forward_d1(f, h);
        d.d2[j] = fd_forward_d2(f, h);
    }
    return d;
}

namespace {

constexpr int kPanels = 128;
constexpr int kPanelOrder = 8;

// (1/pi hbar) int_{-W}^{W} dy weight(y) exp(-2ipy/hbar) Ft(x, y) for every grid momentum.
template <class Weight>
std::vector<cplx> kernel_integral(const WignerField& F, double x, Weight&& weight) {
    const auto& g = F.grid();
    const std::size_t np = g.np();
    std::vector<cplx> acc(np, 0.0);
    const double W = std::min(x - F.domain().a(), F.domain().b() - x);
    if (!(W > 0.0)) return acc;
    const double hbar = F.params().hbar;
    const GaussRule& rule = gauss_legendre(kPanelOrder);
    const double half = W / kPanels;
    for (int k = 0; k < kPanels; ++k) {
        const double mid = -W + (2 * k + 1) * half;
        for (int q = 0; q < kPanelOrder; ++q) {
            const double y = mid + half * rule.nodes[static_cast<std::size_t>(q)];
            const cplx gm = half * rule.weights[static_cast<std::size_t>(q)] * weight(y) *
                            F.kernel(x, y);
            if (gm == 0.0) continue;
            cplx ph = std::polar(1.0, -2.0 * g.p_nodes[0] * y / hbar);
            const cplx rot = std::polar(1.0, -2.0 * g.dp() * y / hbar);
            for (std::size_t j = 0; j < np; ++j) {
                acc[j] += gm * ph;
                ph *= rot;
            }
        }
    }
    const double scale = 1.0 / (std::numbers::pi * hbar);
    for (auto& v : acc) v *= scale;
    return acc;
}

std::vector<double> fd_p_derivative(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> d(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        if (j >= 2 && j + 2 < n) {
            const std::array<double, 5> s{f[j - 2], f[j - 1], f[j], f[j + 1], f[j + 2]};
            d[j] = fd_central_d1(s, h);
        } else if (j + 5 < n) {
            const std::array<double, 6> s{f[j], f[j + 1], f[j + 2], f[j + 3], f[j + 4], f[j + 5]};
            d[j] = fd_forward_d1(s, h);
        } else {
            const std::array<double, 6> s{f[j], f[j - 1], f[j - 2], f[j - 3], f[j - 4], f[j - 5]};
            d[j] = -fd_forward_d1(s, h);
        }
    }
    return d;
}

}  // namespace

std::vector<double> p_derivative(const WignerField& F, double x, int n) {
    if (n < 0) throw InvalidArgument("derivative order must be non-negative");
    if (n == 0) return F.row(x);
    const std::size_t np = F.grid().np();
    if (F.has_kernel()) {
        const double hbar = F.params().hbar;
        const auto m = kernel_integral(F, x, [&](double y) {
            return std::pow(cplx(0.0, -2.0 * y / hbar), n);
        });
        std::vector<double> out(np);
        for (std::size_t j = 0; j < np; ++j) out[j] = m[j].real();
        return out;
    }
    std::vector<double> f = F.row(x);
    for (int k = 0; k < n; ++k) f = fd_p_derivative(f, F.grid().dp());
    return f;
}

namespace {

double poly_derivative(const std::vector<double>& c, double x, int n) {
    double acc = 0.0;
    for (std::size_t k = static_cast<std::size_t>(n); k < c.size(); ++k) {
        double f = 1.0;
        for (std::size_t m = 0; m < static_cast<std::size_t>(n); ++m) f *= static_cast<double>(k - m);
        acc += c[k] * f * std::pow(x, static_cast<double>(k) - n);
    }
    return acc;
}

}  // namespace

ComplexField star_product(const SymbolSpec& A, const WignerField& F, StarTruncation trunc,
                          StarSide side) {
    const auto& g = F.grid();
    const std::size_t nx = g.nx();
    const std::size_t np = g.np();
    const double hbar = A.params.hbar;
    const double m = A.params.mass;
    const double sgn = side == StarSide::left ? 1.0 : -1.0;
    ComplexField out{g, std::vector<cplx>(nx * np, 0.0), {}};

    int order = trunc.order;
    if (trunc.exact_bopp) {
        switch (A.kind) {
            case SymbolKind::kinetic: order = 2; break;
            case SymbolKind::polynomial_potential:
                order = static_cast<int>(A.coefficients.size()) - 1;
                break;
            case SymbolKind::boundary_delta_prime:
                throw InvalidArgument("exact Bopp expansion needs a polynomial symbol");
        }
    }

    parallel_for(nx, [&](std::size_t i) {
        const double x = g.x_nodes[i];
        cplx* o = out.values.data() + i * np;
        if (A.kind == SymbolKind::kinetic) {
            XDerivatives d;
            if (order >= 1) d = x_derivatives(F, x);
            for (std::size_t j = 0; j < np; ++j) {
                const double p = g.p_nodes[j];
                cplx v = p * p * F.at(i, j);
                if (order >= 1) v += cplx(0.0, -sgn * hbar * p * d.d1[j]);
                if (order >= 2) v += -0.25 * hbar * hbar * d.d2[j];
                o[j] = v / (2.0 * m);
            }
            return;
        }
        // Potential-type symbols: sum_n (1/n!) (+-i hbar/2)^n A^(n)(x) d^n F/dp^n.
        cplx factor = 1.0;
        for (int n = 0; n <= order; ++n) {
            if (n > 0) factor *= cplx(0.0, sgn * 0.5 * hbar) / static_cast<double>(n);
            double an = 0.0;
            if (A.kind == SymbolKind::polynomial_potential) {
                an = poly_derivative(A.coefficients, x, n);
            } else {
                an = delta_derivative(A.delta, x - A.wall_position(g.domain), n + 1);
            }
            if (an == 0.0) continue;
            const std::vector<double> dn = n == 0 ? F.row(x) : p_derivative(F, x, n);
            for (std::size_t j = 0; j < np; ++j) o[j] += factor * an * dn[j];
        }
    });
    return out;
}

WignerField moyal_bracket(const SymbolSpec& A, const WignerField& F, StarTruncation trunc) {
    const ComplexField l = star_product(A, F, trunc, StarSide::left);
    const ComplexField r = star_product(A, F, trunc, StarSide::right);
    const cplx ih(0.0, A.params.hbar);
    std::vector<double> v(l.values.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = ((l.values[k] - r.values[k]) / ih).real();
    return WignerField(F.grid(), std::move(v), Provenance::external, F.params());
}

std::vector<cplx> potential_star_row(const WignerField& F, const PotentialFn& v, double x,
                                     StarSide side) {
    const double s = side == StarSide::left ? 1.0 : -1.0;
    if (F.has_kernel()) {
        return kernel_integral(F, x, [&](double y) { return cplx(v(x + s * y), 0.0); });
    }
    // Second-order series with finite-difference potential derivatives.
    const double hbar = F.params().hbar;
    const double h = 1e-4 * F.domain().length();
    const double v0 = v(x);
    const double v1 = (v(x + h) - v(x - h)) / (2.0 * h);
    const double v2 = (v(x + h) - 2.0 * v0 + v(x - h)) / (h * h);
    const auto f0 = F.row(x);
    const auto f1 = p_derivative(F, x, 1);
    const auto f2 = p_derivative(F, x, 2);
    std::vector<cplx> out(f0.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = v0 * f0[j] + cplx(0.0, s * 0.5 * hbar) * v1 * f1[j] -
                 0.125 * hbar * hbar * v2 * f2[j];
    }
    return out;
}

}  // namespace wigbound
