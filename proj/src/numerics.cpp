#include "wigbound/numerics.hpp"

#include <numbers>

namespace wigbound {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) {
        throw InvalidArgument("spline needs at least two matching samples");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(x_[i] > x_[i - 1])) throw InvalidArgument("spline abscissae must increase");
    }
    m_.assign(n, 0.0);
    if (n < 3) return;
    // Tridiagonal solve for the natural spline.
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        const double diag = 2.0 * (h0 + h1);
        const double rhs = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
        const double denom = diag - h0 * c[i - 1];
        c[i] = h1 / denom;
        d[i] = (rhs - h0 * d[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m_[i] = d[i] - c[i] * m_[i + 1];
    }
}

double CubicSpline::eval(double t, int order) const {
    if (x_.empty()) return 0.0;
    if (t <= x_.front()) t = x_.front();
    if (t >= x_.back()) t = x_.back();
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t i = static_cast<std::size_t>(std::distance(x_.begin(), it));
    i = std::clamp<std::size_t>(i, 1, x_.size() - 1) - 1;
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - t) / h;
    const double B = (t - x_[i]) / h;
    switch (order) {
        case 0:
            return A * y_[i] + B * y_[i + 1] +
                   ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
        case 1:
            return (y_[i + 1] - y_[i]) / h - (3.0 * A * A - 1.0) / 6.0 * h * m_[i] +
                   (3.0 * B * B - 1.0) / 6.0 * h * m_[i + 1];
        case 2:
            return A * m_[i] + B * m_[i + 1];
        default:
            throw InvalidArgument("spline derivative order must be 0, 1 or 2");
    }
}

std::vector<double> simpson_weights(std::size_t n_intervals, double h) {
    if (n_intervals == 0 || n_intervals % 2 != 0) {
        throw InvalidArgument("Simpson rule needs an even number of intervals");
    }
    std::vector<double> w(n_intervals + 1);
    for (std::size_t k = 0; k <= n_intervals; ++k) {
        const double c = (k == 0 || k == n_intervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        w[k] = c * h / 3.0;
    }
    return w;
}

const GaussRule& gauss_legendre(int n) {
    if (n < 1 || n > 64) throw InvalidArgument("Gauss-Legendre order must lie in 1..64");
    static const auto table = [] {
        std::vector<GaussRule> t(65);
        for (int m = 1; m <= 64; ++m) {
            GaussRule& r = t[static_cast<std::size_t>(m)];
            r.nodes.resize(static_cast<std::size_t>(m));
            r.weights.resize(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i) {
                double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
                double dp = 0.0;
                for (int it = 0; it < 100; ++it) {
                    double p0 = 1.0, p1 = x;
                    for (int k = 2; k <= m; ++k) {
                        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                        p0 = p1;
                        p1 = p2;
                    }
                    if (m == 1) p0 = 1.0;
                    dp = m * (x * p1 - p0) / (x * x - 1.0);
                    const double dx = p1 / dp;
                    x -= dx;
                    if (std::abs(dx) < 1e-16) break;
                }
                r.nodes[static_cast<std::size_t>(m - 1 - i)] = x;
                r.weights[static_cast<std::size_t>(m - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
            }
        }
        return t;
    }();
    return table[static_cast<std::size_t>(n)];
}

double lagrange4(std::span<const double> nodes, std::span<const double> values, double t) {
    const std::size_t n = nodes.size();
    if (n < 4 || values.size() != n) throw InvalidArgument("lagrange4 needs four or more nodes");
    const double h = nodes[1] - nodes[0];
    const double s = (t - nodes[0]) / h;
    long i0 = static_cast<long>(std::floor(s)) - 1;
    i0 = std::clamp<long>(i0, 0, static_cast<long>(n) - 4);
    double result = 0.0;
    for (int k = 0; k < 4; ++k) {
        double w = 1.0;
        const double xk = nodes[static_cast<std::size_t>(i0 + k)];
        for (int m = 0; m < 4; ++m) {
            if (m == k) continue;
            const double xm = nodes[static_cast<std::size_t>(i0 + m)];
            w *= (t - xm) / (xk - xm);
        }
        result += w * values[static_cast<std::size_t>(i0 + k)];
    }
    return result;
}

double fd_central_d1(std::span<const double, 5> f, double h) {
    return (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h);
}

double fd_central_d2(std::span<const double, 5> f, double h) {
    return (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
}

double fd_forward_d1(std::span<const double, 6> f, double h) {
    return (-137.0 * f[0] + 300.0 * f[1] - 300.0 * f[2] + 200.0 * f[3] - 75.0 * f[4] +
            12.0 * f[5]) /
           (60.0 * h);
}

double fd_forward_d2(std::span<const double, 6> f, double h) {
    return (45.0 * f[0] - 154.0 * f[1] + 214.0 * f[2] - 156.0 * f[3] + 61.0 * f[4] -
            10.0 * f[5]) /
           (12.0 * h * h);
}

}  // namespace wigbound
