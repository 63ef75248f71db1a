#include "wigbound/wigner.hpp"

#include <cmath>
#include <numbers>

namespace wigbound {

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::numeric_transform: return "numeric_transform";
        case Provenance::analytic_well: return "analytic_well";
        case Provenance::external: return "external";
    }
    return "external";
}

WignerField::WignerField(PhaseSpaceGrid grid, std::vector<double> values, Provenance provenance,
                         PhysicalParams params)
    : grid_(std::move(grid)), values_(std::move(values)), provenance_(provenance), params_(params) {
    if (values_.size() != grid_.nx() * grid_.np()) {
        throw InvalidArgument("field values do not match the grid size");
    }
}

WignerField& WignerField::set_evaluator(PointFn point, RowFn row) {
    point_ = std::move(point);
    row_ = std::move(row);
    return *this;
}

WignerField& WignerField::set_kernel(KernelFn kernel) {
    kernel_ = std::move(kernel);
    return *this;
}

WignerField& WignerField::set_state(Wavefunction psi) {
    state_ = std::move(psi);
    return *this;
}

WignerField& WignerField::set_split(double x0) {
    split_ = true;
    x0_ = x0;
    return *this;
}

WignerField& WignerField::set_imag_residue(double r) {
    imag_residue_ = r;
    return *this;
}

namespace {

// Four-point Lagrange stencil on a uniform axis: first index and weights.
std::size_t stencil(const std::vector<double>& nodes, double t, double w[4]) {
    const double h = nodes[1] - nodes[0];
    long i0 = static_cast<long>(std::floor((t - nodes.front()) / h)) - 1;
    i0 = std::clamp<long>(i0, 0, static_cast<long>(nodes.size()) - 4);
    for (int k = 0; k < 4; ++k) {
        double c = 1.0;
        for (int m = 0; m < 4; ++m) {
            if (m == k) continue;
            c *= (t - nodes[static_cast<std::size_t>(i0 + m)]) /
                 (nodes[static_cast<std::size_t>(i0 + k)] - nodes[static_cast<std::size_t>(i0 + m)]);
        }
        w[k] = c;
    }
    return static_cast<std::size_t>(i0);
}

}  // namespace

double WignerField::interpolate(double x, double p) const {
    if (p < grid_.p_nodes.front() || p > grid_.p_nodes.back()) return 0.0;
    double wx[4], wp[4];
    const std::size_t i0 = stencil(grid_.x_nodes, x, wx);
    const std::size_t j0 = stencil(grid_.p_nodes, p, wp);
    double acc = 0.0;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) acc += wx[a] * wp[b] * at(i0 + a, j0 + b);
    }
    return acc;
}

double WignerField::operator()(double x, double p) const {
    if (x <= domain().a() || x >= domain().b()) return 0.0;
    if (point_) return point_(x, p);
    return interpolate(x, p);
}

void WignerField::row(double x, std::span<const double> p, std::span<double> out) const {
    if (x <= domain().a() || x >= domain().b()) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    if (row_) {
        row_(x, p, out);
        return;
    }
    for (std::size_t j = 0; j < p.size(); ++j) out[j] = (*this)(x, p[j]);
}

std::vector<double> WignerField::row(double x) const {
    std::vector<double> out(grid_.np());
    if (!point_ && x > domain().a() && x < domain().b()) {
        // Grid momenta: interpolate in x only.
        double wx[4];
        const std::size_t i0 = stencil(grid_.x_nodes, x, wx);
        for (std::size_t j = 0; j < out.size(); ++j) {
            double acc = 0.0;
            for (int a = 0; a < 4; ++a) acc += wx[a] * at(i0 + a, j);
            out[j] = acc;
        }
        return out;
    }
    row(x, grid_.p_nodes, out);
    return out;
}

cplx WignerField::kernel(double x, double y) const {
    if (kernel_) return kernel_(x, y);
    if (x <= domain().a() || x >= domain().b()) return 0.0;
    const std::vector<double> f = row(x);
    const std::size_t n = grid_.np() - 1;
    const double hp = grid_.dp();
    std::vector<double> w;
    if (n % 2 == 0) {
        w = simpson_weights(n, hp);
    } else {
        w.assign(n + 1, hp);
        w.front() = w.back() = 0.5 * hp;
    }
    const double hbar = params_.hbar;
    cplx acc = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
        acc += w[j] * f[j] * std::polar(1.0, 2.0 * grid_.p_nodes[j] * y / hbar);
    }
    return acc;
}

WignerField combine(const std::vector<std::pair<double, WignerField>>& terms) {
    if (terms.empty()) throw InvalidArgument("combination needs at least one field");
    const WignerField& first = terms.front().second;
    std::vector<double> values(first.values().size(), 0.0);
    bool evaluators = true;
    bool kernels = true;
    for (const auto& [c, f] : terms) {
        if (!(f.domain() == first.domain()) || f.grid().nx() != first.grid().nx() ||
            f.grid().np() != first.grid().np()) {
            throw DomainMismatch("combined fields must share one grid");
        }
        for (std::size_t k = 0; k < values.size(); ++k) values[k] += c * f.values()[k];
        evaluators = evaluators && f.has_evaluator();
        kernels = kernels && f.has_kernel();
    }
    WignerField out(first.grid(), std::move(values), Provenance::external, first.params());
    if (evaluators) {
        out.set_evaluator(
            [terms](double x, double p) {
                double acc = 0.0;
                for (const auto& [c, f] : terms) acc += c * f(x, p);
                return acc;
            },
            [terms](double x, std::span<const double> p, std::span<double> o) {
                std::fill(o.begin(), o.end(), 0.0);
                std::vector<double> tmp(p.size());
                for (const auto& [c, f] : terms) {
                    f.row(x, p, tmp);
                    for (std::size_t j = 0; j < p.size(); ++j) o[j] += c * tmp[j];
                }
            });
    }
    if (kernels) {
        out.set_kernel([terms](double x, double y) {
            cplx acc = 0.0;
            for (const auto& [c, f] : terms) acc += c * f.kernel(x, y);
            return acc;
        });
    }
    if (first.split()) out.set_split(first.x0());
    return out;
}

namespace {

// Composite Gauss-Legendre over the window: only interior points are sampled, so the
// improper limits at the window ends need no special treatment. The panel count is fixed,
// which keeps the quadrature error smooth in x.
constexpr int kPanels = 128;
constexpr int kPanelOrder = 8;

struct TransformPlan {
    Wavefunction psi;
    double s0, s1;  // support
    double hbar;
};

// F(x, p_j) over the window [-W, W]; returns max |Im| (scaled by 1/(pi hbar)).
double transform_row(const TransformPlan& plan, double x, std::span<const double> p,
                     std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    const double W = std::min(x - plan.s0, plan.s1 - x);
    if (!(W > 0.0) || p.empty()) return 0.0;
    const std::size_t np = p.size();
    const GaussRule& rule = gauss_legendre(kPanelOrder);
    const double half = W / kPanels;  // half panel width
    std::vector<cplx> acc(np, 0.0);
    for (int k = 0; k < kPanels; ++k) {
        const double mid = -W + (2 * k + 1) * half;
        for (int q = 0; q < kPanelOrder; ++q) {
            const double y = mid + half * rule.nodes[static_cast<std::size_t>(q)];
            const cplx gm = half * rule.weights[static_cast<std::size_t>(q)] *
                            std::conj(plan.psi(x - y)) * plan.psi(x + y);
            if (gm == 0.0) continue;
            cplx ph = std::polar(1.0, -2.0 * p[0] * y / plan.hbar);
            if (np == 1) {
                acc[0] += gm * ph;
                continue;
            }
            const cplx rot = std::polar(1.0, -2.0 * (p[1] - p[0]) * y / plan.hbar);
            for (std::size_t j = 0; j < np; ++j) {
                acc[j] += gm * ph;
                ph *= rot;
            }
        }
    }
    const double scale = 1.0 / (std::numbers::pi * plan.hbar);
    double imag = 0.0;
    for (std::size_t j = 0; j < np; ++j) {
        out[j] = scale * acc[j].real();
        imag = std::max(imag, scale * std::abs(acc[j].imag()));
    }
    return imag;
}

}  // namespace

WignerField wigner_transform(const Wavefunction& psi, const PhaseSpaceGrid& grid,
                             const PhysicalParams& params) {
    const Domain& d = grid.domain;
    const auto support = psi.support();
    if (!std::isfinite(support.first) || !std::isfinite(support.second)) {
        throw DomainMismatch("wigner_transform needs a confined state");
    }
    if (psi.kind() == WavefunctionKind::unconfined) {
        if (support.first < d.a() || support.second > d.b()) {
            throw DomainMismatch("state support extends beyond the grid domain");
        }
    } else if (!(psi.domain() == d)) {
        throw DomainMismatch("state and grid use different domains");
    }
    auto plan = std::make_shared<TransformPlan>(
        TransformPlan{psi, support.first, support.second, params.hbar});

    const std::size_t nx = grid.nx();
    const std::size_t np = grid.np();
    std::vector<double> values(nx * np, 0.0);
    std::vector<double> imag(nx, 0.0);
    parallel_for(nx, [&](std::size_t i) {
        const double x = grid.x_nodes[i];
        if (x <= d.a() || x >= d.b()) return;
        imag[i] = transform_row(*plan, x, grid.p_nodes,
                                std::span<double>(values.data() + i * np, np));
    });
    double fmax = 0.0;
    for (double v : values) fmax = std::max(fmax, std::abs(v));
    const double residue = *std::max_element(imag.begin(), imag.end()) / std::max(fmax, 1e-300);

    WignerField F(grid, std::move(values), Provenance::numeric_transform, params);
    F.set_evaluator(
         [plan, d](double x, double p) {
             if (x <= d.a() || x >= d.b()) return 0.0;
             double out = 0.0;
             const double pp[1] = {p};
             transform_row(*plan, x, pp, std::span<double>(&out, 1));
             return out;
         },
         [plan, d](double x, std::span<const double> p, std::span<double> out) {
             if (x <= d.a() || x >= d.b()) {
                 std::fill(out.begin(), out.end(), 0.0);
                 return;
             }
             transform_row(*plan, x, p, out);
         })
        .set_kernel([plan, d](double x, double y) -> cplx {
            if (x <= d.a() || x >= d.b()) return 0.0;
            return std::conj(plan->psi(x - y)) * plan->psi(x + y);
        })
        .set_state(psi)
        .set_split(0.5 * (support.first + support.second))
        .set_imag_residue(residue);
    return F;
}

namespace {

// sin(2 d w / hbar) / d with the removable singularity at d = 0.
double sin_over(double d, double w, double hbar, double guard) {
    const double z = 2.0 * d * w / hbar;
    if (std::abs(d) < guard) {
        const double z2 = z * z;
        return (2.0 * w / hbar) * (1.0 - z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0);
    }
    return std::sin(z) / d;
}

}  // namespace

WignerField analytic_well_wigner(int n, double L, const PhysicalParams& params,
                                 std::optional<PhaseSpaceGrid> grid) {
    const WellEigenstate s = well_eigenstate(n, L, params);
    const Domain d = s.domain();
    if (!grid) grid = make_phase_grid(d, 257, 257, default_p_max(d, params));
    if (!(grid->domain == d)) throw DomainMismatch("grid domain must be [-L/2, L/2]");

    const double hbar = params.hbar;
    const double a2 = s.alpha * s.alpha;
    const double k = s.k_n;
    const double beta = s.beta_n;
    const double guard = 1e-6 * hbar / L;
    auto point = [=](double x, double p) {
        const double ax = std::abs(x);
        if (!(ax < 0.5 * L)) return 0.0;
        const double w = 0.5 * L - ax;
        const double pi = std::numbers::pi;
        return -a2 / (2.0 * pi) * std::cos(2.0 * (beta - k * ax)) * sin_over(p, w, hbar, guard) +
               a2 / (4.0 * pi) * sin_over(p + hbar * k, w, hbar, guard) +
               a2 / (4.0 * pi) * sin_over(p - hbar * k, w, hbar, guard);
    };
    const std::size_t nx = grid->nx();
    const std::size_t np = grid->np();
    std::vector<double> values(nx * np);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < np; ++j) {
            values[grid->flat(i, j)] = point(grid->x_nodes[i], grid->p_nodes[j]);
        }
    }
    WignerField F(*grid, std::move(values), Provenance::analytic_well, params);
    F.set_evaluator(point,
                    [point](double x, std::span<const double> p, std::span<double> out) {
                        for (std::size_t j = 0; j < p.size(); ++j) out[j] = point(x, p[j]);
                    })
        .set_kernel([s](double x, double y) -> cplx {
            if (!(std::abs(x) < 0.5 * s.L)) return 0.0;
            return s.psi(x - y) * s.psi(x + y);
        })
        .set_state(s.wavefunction())
        .set_split(0.0);
    return F;
}

}  // namespace wigbound
