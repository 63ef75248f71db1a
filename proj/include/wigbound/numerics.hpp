#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wigbound/core.hpp"

namespace wigbound {

/// Natural cubic spline through strictly increasing abscissae.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double t) const { return eval(t, 0); }
    /// Value (order 0) or derivative (order 1, 2) at t. Constant extension outside.
    double eval(double t, int order) const;

    const std::vector<double>& x() const { return x_; }
    bool empty() const { return x_.empty(); }

private:
    std::vector<double> x_, y_, m_;  // m_ holds second derivatives
};

/// Composite Simpson weights for n (even) intervals of width h.
std::vector<double> simpson_weights(std::size_t n_intervals, double h);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes, weights;
};
const GaussRule& gauss_legendre(int n);

/// Cubic Lagrange interpolation on a uniform axis; clamps to the end cells.
double lagrange4(std::span<const double> nodes, std::span<const double> values, double t);

/// Thrown by the ODE integrator when the step size collapses.
class IntegratorFailure : public std::runtime_error {
public:
    IntegratorFailure(const std::string& what, double t_last, std::vector<double> y_last)
        : std::runtime_error(what), t(t_last), y(std::move(y_last)) {}
    double t;
    std::vector<double> y;
};

struct OdeOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double h_init = 1e-3;
    double h_min = 1e-14;
    int max_steps = 2'000'000;
    // Optional state-dependent cap on the step size.
    std::function<double(double t, std::span<const double> y)> h_max;
};

/// Adaptive Dormand-Prince 5(4) integration from t0 to t1 (either direction).
/// `observe` is called after every accepted step; returning false stops early.
template <std::size_t N, class Rhs, class Observer>
std::array<double, N> integrate_dopri(Rhs&& rhs, std::array<double, N> y, double t0, double t1,
                                      const OdeOptions& opt, Observer&& observe) {
    using State = std::array<double, N>;
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double dir = (t1 >= t0) ? 1.0 : -1.0;
    double t = t0;
    double h = std::min(std::abs(opt.h_init), std::abs(t1 - t0));
    if (h <= 0.0) return y;
    State k1 = rhs(t, y), k2, k3, k4, k5, k6, k7, tmp, ynew;
    int steps = 0;
    while (dir * (t1 - t) > 0.0) {
        if (++steps > opt.max_steps) {
            throw IntegratorFailure("integrator exceeded the step budget", t,
                                    std::vector<double>(y.begin(), y.end()));
        }
        double hcap = std::abs(t1 - t);
        if (opt.h_max) hcap = std::min(hcap, opt.h_max(t, std::span<const double>(y)));
        h = std::min(h, hcap);
        if (h < opt.h_min) {
            throw IntegratorFailure("step size underflow", t,
                                    std::vector<double>(y.begin(), y.end()));
        }
        const double hs = dir * h;
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hs * a21 * k1[i];
        k2 = rhs(t + c2 * hs, tmp);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        k3 = rhs(t + c3 * hs, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = rhs(t + c4 * hs, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = rhs(t + c5 * hs, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        k6 = rhs(t + hs, tmp);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        k7 = rhs(t + hs, ynew);
        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double ei = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                    e6 * k6[i] + e7 * k7[i]);
            const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err = std::max(err, std::abs(ei) / sc);
        }
        if (!std::isfinite(err)) err = 1e10;
        if (err <= 1.0) {
            // Land exactly on t1 when the remaining interval was the cap.
            t = (h == std::abs(t1 - t)) ? t1 : t + hs;
            y = ynew;
            k1 = k7;
            if (!observe(t, y)) break;
        }
        const double factor = (err == 0.0) ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h *= factor;
    }
    return y;
}

template <std::size_t N, class Rhs>
std::array<double, N> integrate_dopri(Rhs&& rhs, std::array<double, N> y, double t0, double t1,
                                      const OdeOptions& opt) {
    return integrate_dopri<N>(std::forward<Rhs>(rhs), y, t0, t1, opt,
                              [](double, const std::array<double, N>&) { return true; });
}

// Fourth-order finite-difference derivatives from five samples f(x + k h), k = -2..2,
// or one-sided samples k = 0..4 (forward) and k = 0..-4 (backward, passed as f(x - k h)).
double fd_central_d1(std::span<const double, 5> f, double h);
double fd_central_d2(std::span<const double, 5> f, double h);
double fd_forward_d1(std::span<const double, 6> f, double h);
double fd_forward_d2(std::span<const double, 6> f, double h);

}  // namespace wigbound
