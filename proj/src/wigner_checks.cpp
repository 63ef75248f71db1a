#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "wigbound/wigner.hpp"

namespace wigbound {

bool BoundaryReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult& BoundaryReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return c;
    }
    throw InvalidArgument("no check named " + name);
}

void BoundaryReport::append(const BoundaryReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

std::vector<double> one_sided_limit(const WignerField& F, double c, Side side, double offset) {
    if (offset <= 0.0) offset = F.grid().eta;
    const double s = side == Side::plus ? 1.0 : -1.0;
    const std::size_t np = F.grid().np();
    std::vector<double> h;
    std::vector<std::vector<double>> rows;
    for (int k = 0; k < 4; ++k) {
        const double off = offset / std::pow(2.0, k);
        h.push_back(off);
        rows.push_back(F.row(c + s * off));
    }
    std::vector<double> out(np), f(h.size());
    for (std::size_t j = 0; j < np; ++j) {
        for (std::size_t k = 0; k < h.size(); ++k) f[k] = rows[k][j];
        out[j] = extrapolate_to_zero(h, f);
    }
    return out;
}

std::vector<double> one_sided_derivative(const WignerField& F, double c, Side side, int order,
                                         double h, int n_points) {
    if (order < 1 || order >= n_points) throw InvalidArgument("derivative order out of range");
    const double s = side == Side::plus ? 1.0 : -1.0;
    const auto n = static_cast<Eigen::Index>(n_points);
    // Interpolating polynomial through t = 1..n (t = distance / h), differentiated at t = 0.
    Eigen::MatrixXd V(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index q = 0; q < n; ++q) V(k, q) = std::pow(static_cast<double>(k + 1), q);
    }
    const Eigen::MatrixXd Vinv = V.fullPivLu().inverse();
    double fact = 1.0;
    for (int m = 2; m <= order; ++m) fact *= m;
    const double scale = fact * std::pow(s, order) / std::pow(h, order);
    std::vector<double> out(F.grid().np(), 0.0);
    for (Eigen::Index k = 0; k < n; ++k) {
        const std::vector<double> r = F.row(c + s * static_cast<double>(k + 1) * h);
        const double w = scale * Vinv(order, k);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += w * r[j];
    }
    return out;
}

namespace {

CheckResult make_check(std::string name, std::string equation, std::vector<double> measured,
                       double tolerance, std::optional<double> expected = std::nullopt) {
    CheckResult c;
    c.name = std::move(name);
    c.equation = std::move(equation);
    double m = 0.0;
    for (double v : measured) m = std::max(m, std::abs(v - expected.value_or(0.0)));
    c.measured = std::move(measured);
    c.measured_max = m;
    c.tolerance = tolerance;
    c.pass = std::isfinite(m) && m <= tolerance;
    c.expected = expected;
    return c;
}

std::vector<double> difference(const std::vector<double>& l, const std::vector<double>& r) {
    std::vector<double> d(l.size());
    for (std::size_t j = 0; j < l.size(); ++j) d[j] = l[j] - r[j];
    return d;
}

double field_x0(const WignerField& F) { return F.split() ? F.x0() : F.domain().x0(); }

// Fit spacing for one-sided derivatives: a fiftieth of the shortest resolved x-wavelength.
double fit_spacing(const WignerField& F) { return 0.02 * F.params().hbar / F.grid().p_max(); }

}  // namespace

BoundaryReport check_consistency(const WignerField& F, double tolerance) {
    const double a = F.domain().a();
    const double b = F.domain().b();
    const double x0 = field_x0(F);
    BoundaryReport r;
    r.checks.push_back(make_check("dirichlet_left", "F(a+,p) = 0",
                                  one_sided_limit(F, a, Side::plus), tolerance));
    r.checks.push_back(make_check("dirichlet_right", "F(b-,p) = 0",
                                  one_sided_limit(F, b, Side::minus), tolerance));
    r.checks.push_back(make_check("continuity_x0", "F(x0-,p) = F(x0+,p)",
                                  difference(one_sided_limit(F, x0, Side::minus),
                                             one_sided_limit(F, x0, Side::plus)),
                                  tolerance));
    return r;
}

BoundaryReport check_dirichlet_subsidiary(const WignerField& F, double tolerance) {
    const double a = F.domain().a();
    const double b = F.domain().b();
    const double x0 = field_x0(F);
    auto d = [&](double c, Side s, int order) {
        return one_sided_derivative(F, c, s, order, fit_spacing(F), 10);
    };
    BoundaryReport r;
    r.checks.push_back(make_check("neumann_left", "dF/dx(a+,p) = 0", d(a, Side::plus, 1), tolerance));
    r.checks.push_back(
        make_check("neumann_right", "dF/dx(b-,p) = 0", d(b, Side::minus, 1), tolerance));
    r.checks.push_back(make_check("x0_first_derivative", "dF/dx(x0-,p) = dF/dx(x0+,p)",
                                  difference(d(x0, Side::minus, 1), d(x0, Side::plus, 1)),
                                  tolerance));
    r.checks.push_back(make_check("second_derivative_left", "d2F/dx2(a+,p) = 0",
                                  d(a, Side::plus, 2), tolerance));
    r.checks.push_back(make_check("second_derivative_right", "d2F/dx2(b-,p) = 0",
                                  d(b, Side::minus, 2), tolerance));
    r.checks.push_back(make_check("x0_second_derivative", "d2F/dx2(x0-,p) = d2F/dx2(x0+,p)",
                                  difference(d(x0, Side::minus, 2), d(x0, Side::plus, 2)),
                                  tolerance));
    if (F.state()) {
        const cplx dpsi = F.state()->one_sided(a, Side::plus, 1);
        const double predicted = 8.0 * std::norm(dpsi) / (std::numbers::pi * F.params().hbar);
        r.checks.push_back(make_check("third_derivative_left",
                                      "d3F/dx3(a+,p) = 8|psi'(a+)|^2/(pi hbar)",
                                      d(a, Side::plus, 3), 1e-3 * std::max(1.0, predicted),
                                      predicted));
    }
    return r;
}

BoundaryReport check_integral_dirichlet(const WignerField& F, double tolerance) {
    const double a = F.domain().a();
    const double b = F.domain().b();
    const double offset = F.grid().eta;
    auto limit = [&](double c, double s) {
        std::vector<double> h, f;
        for (int k = 0; k < 4; ++k) {
            const double off = offset / std::pow(2.0, k);
            h.push_back(off);
            f.push_back(F.kernel(c + s * off, 0.0).real());
        }
        return std::vector<double>{extrapolate_to_zero(h, f)};
    };
    BoundaryReport r;
    r.checks.push_back(make_check("integral_dirichlet_left", "lim int F(a+s,p) dp = 0",
                                  limit(a, 1.0), tolerance));
    r.checks.push_back(make_check("integral_dirichlet_right", "lim int F(b-s,p) dp = 0",
                                  limit(b, -1.0), tolerance));
    return r;
}

Marginals marginals(const WignerField& F) {
    Marginals m;
    const WignerField field = F;
    m.position = [field](double x) {
        if (x <= field.domain().a() || x >= field.domain().b()) return 0.0;
        return field.kernel(x, 0.0).real();
    };
    const double a = F.domain().a();
    const double b = F.domain().b();
    if (F.has_kernel()) {
        const std::size_t n = 4096;
        const double h = (b - a) / static_cast<double>(n);
        const auto w = simpson_weights(n, h);
        for (std::size_t k = 1; k < n; ++k) m.total += w[k] * m.position(a + static_cast<double>(k) * h);
    } else {
        const auto& g = F.grid();
        const std::size_t nx = g.nx() - 1;
        const std::size_t np = g.np() - 1;
        auto weights = [](std::size_t n, double h) {
            if (n % 2 == 0) return simpson_weights(n, h);
            std::vector<double> w(n + 1, h);
            w.front() = w.back() = 0.5 * h;
            return w;
        };
        const auto wx = weights(nx, g.dx());
        const auto wp = weights(np, g.dp());
        for (std::size_t i = 0; i <= nx; ++i) {
            for (std::size_t j = 0; j <= np; ++j) m.total += wx[i] * wp[j] * F.at(i, j);
        }
    }
    return m;
}

Wavefunction reconstruct_wavefunction(const WignerField& F, double purity_threshold) {
    const auto& g = F.grid();
    const std::size_t nx = g.nx();
    const std::size_t np = g.np();
    const double hbar = F.params().hbar;
    const std::size_t Q = (nx - 1) / 2;

    // Closure-backed fields are sampled over a wider momentum band with the grid spacing;
    // the grid band alone truncates the 1/p^2 tails of confined states.
    const std::size_t band = F.has_evaluator() ? 4 : 1;
    const std::size_t npe = band * (np - 1) + 1;
    std::vector<double> pe(npe);
    for (std::size_t j = 0; j < npe; ++j) {
        pe[j] = -static_cast<double>(band) * g.p_max() + static_cast<double>(j) * g.dp();
    }
    std::vector<double> rows(nx * npe);
    parallel_for(nx, [&](std::size_t m) {
        std::span<double> out(rows.data() + m * npe, npe);
        if (band == 1) {
            for (std::size_t j = 0; j < np; ++j) out[j] = F.at(m, j);
        } else {
            F.row(g.x_nodes[m], pe, out);
        }
    });
    std::vector<double> wp;
    if ((npe - 1) % 2 == 0) {
        wp = simpson_weights(npe - 1, g.dp());
    } else {
        wp.assign(npe, g.dp());
        wp.front() = wp.back() = 0.5 * g.dp();
    }
    // T[m][q] = Ft(x_m, q dx) by inverse Fourier transform in p.
    std::vector<std::vector<cplx>> T(nx, std::vector<cplx>(Q + 1));
    parallel_for(nx, [&](std::size_t m) {
        const double* f = rows.data() + m * npe;
        for (std::size_t q = 0; q <= Q; ++q) {
            const double y = static_cast<double>(q) * g.dx();
            cplx ph = std::polar(1.0, 2.0 * pe[0] * y / hbar);
            const cplx rot = std::polar(1.0, 2.0 * g.dp() * y / hbar);
            cplx acc = 0.0;
            for (std::size_t j = 0; j < npe; ++j) {
                acc += wp[j] * f[j] * ph;
                ph *= rot;
            }
            T[m][q] = acc;
        }
    });
    auto Ft = [&](std::size_t iu, std::size_t iv) {
        const std::size_t m = (iu + iv) / 2;
        if (iv >= iu) return T[m][(iv - iu) / 2];
        return std::conj(T[m][(iu - iv) / 2]);
    };

    std::size_t i0 = 0;
    double best = -HUGE_VAL;
    for (std::size_t i = 0; i < nx; ++i) {
        if (T[i][0].real() > best) {
            best = T[i][0].real();
            i0 = i;
        }
    }
    if (!(best > 0.0)) throw InvalidArgument("field has no positive density to reconstruct from");

    std::vector<double> xs, re, im;
    const double root = std::sqrt(best);
    for (std::size_t iv = i0 % 2; iv < nx; iv += 2) {
        const cplx v = Ft(i0, iv) / root;
        xs.push_back(g.x_nodes[iv]);
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    const CubicSpline sre(xs, re), sim(xs, im);
    std::vector<cplx> psi(nx);
    for (std::size_t i = 0; i < nx; ++i) psi[i] = {sre(g.x_nodes[i]), sim(g.x_nodes[i])};

    double tmax = 0.0, resid = 0.0;
    for (std::size_t iu = 0; iu < nx; ++iu) {
        for (std::size_t iv = iu % 2; iv < nx; iv += 2) {
            const cplx t = Ft(iu, iv);
            tmax = std::max(tmax, std::abs(t));
            resid = std::max(resid, std::abs(t - std::conj(psi[iu]) * psi[iv]));
        }
    }
    const double rel = resid / tmax;
    if (!(rel < purity_threshold)) {
        throw NotPureState("field does not factorise as a pure state", rel);
    }

    const auto wx = ((nx - 1) % 2 == 0) ? simpson_weights(nx - 1, g.dx())
                                        : std::vector<double>(nx, g.dx());
    double norm = 0.0;
    for (std::size_t i = 0; i < nx; ++i) norm += wx[i] * std::norm(psi[i]);
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& v : psi) v *= scale;
    return Wavefunction::sampled(g.x_nodes, std::move(psi), g.domain, WavefunctionKind::confined);
}

}  // namespace wigbound
