#include "wigbound/wavefunction.hpp"

#include <cmath>
#include <numbers>

namespace wigbound {

Wavefunction Wavefunction::analytic(ComplexFn value, ComplexFn derivative, Domain domain,
                                    WavefunctionKind kind) {
    if (!value) throw InvalidArgument("analytic wavefunction needs a value closure");
    Wavefunction w(domain);
    w.value_ = std::move(value);
    w.derivative_ = std::move(derivative);
    w.kind_ = kind;
    if (kind == WavefunctionKind::confined) w.support_ = {domain.a(), domain.b()};
    return w;
}

Wavefunction Wavefunction::sampled(std::vector<double> x, std::vector<cplx> values, Domain domain,
                                   WavefunctionKind kind) {
    if (x.size() != values.size() || x.size() < 2) {
        throw InvalidArgument("sampled wavefunction needs matching node and value arrays");
    }
    std::vector<double> re(values.size()), im(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        re[i] = values[i].real();
        im[i] = values[i].imag();
    }
    auto s = std::make_shared<Samples>();
    s->re = CubicSpline(x, std::move(re));
    s->im = CubicSpline(x, std::move(im));
    s->x = std::move(x);
    Wavefunction w(domain);
    w.support_ = {s->x.front(), s->x.back()};
    if (kind == WavefunctionKind::confined) {
        w.support_ = {std::max(domain.a(), s->x.front()), std::min(domain.b(), s->x.back())};
    }
    w.sampled_ = std::move(s);
    w.kind_ = kind;
    return w;
}

Wavefunction Wavefunction::with_support(std::pair<double, double> s) const {
    Wavefunction w = *this;
    w.support_ = s;
    return w;
}

cplx Wavefunction::operator()(double x) const {
    if (kind_ == WavefunctionKind::confined) {
        if (!(x > support_.first && x < support_.second)) return 0.0;
    } else if (x < support_.first || x > support_.second) {
        return 0.0;
    }
    if (sampled_) return {sampled_->re(x), sampled_->im(x)};
    return value_(x);
}

cplx Wavefunction::derivative(double x) const {
    if (kind_ == WavefunctionKind::confined) {
        if (!(x > support_.first && x < support_.second)) return 0.0;
    } else if (x < support_.first || x > support_.second) {
        return 0.0;
    }
    if (sampled_) return {sampled_->re.eval(x, 1), sampled_->im.eval(x, 1)};
    if (derivative_) return derivative_(x);
    const double h = 1e-6 * domain_.length();
    return (value_(x + h) - value_(x - h)) / (2.0 * h);
}

cplx Wavefunction::one_sided(double c, Side side, int derivative_order, double eta) const {
    if (derivative_order < 0 || derivative_order > 1) {
        throw InvalidArgument("one-sided limits are available for psi and psi' only");
    }
    if (eta <= 0.0) eta = 1e-3 * domain_.length();
    const double s = (side == Side::plus) ? 1.0 : -1.0;
    std::vector<double> h, re, im;
    for (int k = 0; k < 3; ++k) {
        const double off = eta / std::pow(2.0, k);
        const cplx v = derivative_order == 0 ? (*this)(c + s * off) : derivative(c + s * off);
        h.push_back(off);
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    return {extrapolate_to_zero(h, re), extrapolate_to_zero(h, im)};
}

std::vector<double> Wavefunction::sample_nodes() const {
    return sampled_ ? sampled_->x : std::vector<double>{};
}

double WellEigenstate::psi(double x) const {
    if (!(std::abs(x) < 0.5 * L)) return 0.0;
    return alpha * std::sin(k_n * x + beta_n);
}

double WellEigenstate::dpsi(double x) const {
    if (!(std::abs(x) < 0.5 * L)) return 0.0;
    return alpha * k_n * std::cos(k_n * x + beta_n);
}

Wavefunction WellEigenstate::wavefunction() const {
    const WellEigenstate s = *this;
    return Wavefunction::analytic([s](double x) { return cplx(s.psi(x), 0.0); },
                                  [s](double x) { return cplx(s.dpsi(x), 0.0); }, domain(),
                                  WavefunctionKind::confined);
}

WellEigenstate well_eigenstate(int n, double L, const PhysicalParams& params) {
    if (n < 1) throw InvalidArgument("quantum number must be >= 1");
    if (!(L > 0.0)) throw InvalidArgument("well width must be positive");
    WellEigenstate s;
    s.n = n;
    s.L = L;
    s.k_n = n * std::numbers::pi / L;
    s.beta_n = n * std::numbers::pi / 2.0;
    s.alpha = std::sqrt(2.0 / L);
    s.E_n = params.hbar * params.hbar * s.k_n * s.k_n / (2.0 * params.mass);
    return s;
}

Wavefunction confine(const Wavefunction& phi, const Domain& domain) {
    return Wavefunction::analytic([phi](double x) { return phi(x); },
                                  [phi](double x) { return phi.derivative(x); }, domain,
                                  WavefunctionKind::confined);
}

Wavefunction smooth_confine(const Wavefunction& phi, const Domain& domain,
                            const SmoothedDelta& delta) {
    const double a = domain.a();
    const double b = domain.b();
    auto value = [phi, delta, a, b](double x) {
        return phi(x) * theta_eval(delta, x - a) * theta_eval(delta, b - x);
    };
    auto deriv = [phi, delta, a, b](double x) {
        const double ta = theta_eval(delta, x - a);
        const double tb = theta_eval(delta, b - x);
        const double da = delta_derivative(delta, x - a, 0);
        const double db = delta_derivative(delta, b - x, 0);
        return phi.derivative(x) * ta * tb + phi(x) * (da * tb - ta * db);
    };
    return Wavefunction::analytic(value, deriv, domain, WavefunctionKind::smooth_confined)
        .with_support({a - delta.cutoff(), b + delta.cutoff()});
}

namespace {

std::pair<double, double> finite_support(const Wavefunction& psi) {
    const auto s = psi.support();
    if (!std::isfinite(s.first) || !std::isfinite(s.second)) {
        throw DomainMismatch("operation needs a state with bounded support");
    }
    return s;
}

}  // namespace

cplx overlap(const Wavefunction& phi, const Wavefunction& psi, int n_intervals) {
    const auto s1 = finite_support(phi);
    const auto s2 = finite_support(psi);
    const double lo = std::max(s1.first, s2.first);
    const double hi = std::min(s1.second, s2.second);
    if (!(hi > lo)) return 0.0;
    const auto n = static_cast<std::size_t>(n_intervals + n_intervals % 2);
    const double h = (hi - lo) / static_cast<double>(n);
    const auto w = simpson_weights(n, h);
    cplx acc = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double x = lo + static_cast<double>(k) * h;
        acc += w[k] * std::conj(phi(x)) * psi(x);
    }
    return acc;
}

double norm_squared(const Wavefunction& psi, int n_intervals) {
    return overlap(psi, psi, n_intervals).real();
}

Wavefunction superpose(const std::vector<std::pair<cplx, Wavefunction>>& terms, bool normalize) {
    if (terms.empty()) throw InvalidArgument("superposition needs at least one term");
    const Domain domain = terms.front().second.domain();
    double lo = HUGE_VAL, hi = -HUGE_VAL;
    bool confined = true;
    for (const auto& [c, w] : terms) {
        lo = std::min(lo, w.support().first);
        hi = std::max(hi, w.support().second);
        confined = confined && w.kind() == WavefunctionKind::confined;
    }
    auto value = [terms](double x) {
        cplx acc = 0.0;
        for (const auto& [c, w] : terms) acc += c * w(x);
        return acc;
    };
    auto deriv = [terms](double x) {
        cplx acc = 0.0;
        for (const auto& [c, w] : terms) acc += c * w.derivative(x);
        return acc;
    };
    const auto kind = confined ? WavefunctionKind::confined : terms.front().second.kind();
    Wavefunction out = Wavefunction::analytic(value, deriv, domain, kind).with_support({lo, hi});
    if (!normalize) return out;
    const double scale = 1.0 / std::sqrt(norm_squared(out));
    return Wavefunction::analytic([out, scale](double x) { return scale * out(x); },
                                  [out, scale](double x) { return scale * out.derivative(x); },
                                  domain, kind)
        .with_support({lo, hi});
}

double BoundaryPotential::derivative(double x, int k) const {
    return strength * (delta_derivative(delta, x - domain.b(), k + 1) -
                       delta_derivative(delta, x - domain.a(), k + 1));
}

BoundaryPotential boundary_potential(const Domain& domain, const SmoothedDelta& delta,
                                     const PhysicalParams& params) {
    return BoundaryPotential{domain, delta, params.hbar * params.hbar / (2.0 * params.mass)};
}

}  // namespace wigbound
