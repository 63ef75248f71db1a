#include "wigbound/core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace wigbound {

PhysicalParams::PhysicalParams(double hbar_, double mass_) : hbar(hbar_), mass(mass_) {
    if (!(hbar > 0.0) || !(mass > 0.0) || !std::isfinite(hbar) || !std::isfinite(mass)) {
        throw InvalidArgument("hbar and mass must be positive and finite");
    }
}

Domain::Domain(double a, double b) : a_(a), b_(b) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw InvalidArgument("domain requires finite a < b");
    }
}

std::size_t PhaseSpaceGrid::x_index(double x) const {
    const double t = std::round((x - x_nodes.front()) / dx());
    return static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(nx() - 1)));
}

std::size_t PhaseSpaceGrid::p_index(double p) const {
    const double t = std::round((p - p_nodes.front()) / dp());
    return static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(np() - 1)));
}

PhaseSpaceGrid make_phase_grid(const Domain& domain, int nx, int np, double p_max) {
    if (nx < 3 || np < 3) {
        throw InvalidArgument("phase grid needs nx >= 3 and np >= 3");
    }
    if (!(p_max > 0.0) || !std::isfinite(p_max)) {
        throw InvalidArgument("p_max must be positive");
    }
    PhaseSpaceGrid g;
    g.domain = domain;
    g.x_nodes.resize(static_cast<std::size_t>(nx));
    g.p_nodes.resize(static_cast<std::size_t>(np));
    const double hx = domain.length() / (nx - 1);
    for (int i = 0; i < nx; ++i) {
        g.x_nodes[static_cast<std::size_t>(i)] = domain.a() + i * hx;
    }
    g.x_nodes.back() = domain.b();
    const double hp = 2.0 * p_max / (np - 1);
    for (int j = 0; j < np; ++j) {
        g.p_nodes[static_cast<std::size_t>(j)] = -p_max + j * hp;
    }
    g.p_nodes.back() = p_max;
    // Exact symmetry about p = 0.
    for (int j = 0; j < np / 2; ++j) {
        g.p_nodes[static_cast<std::size_t>(np - 1 - j)] = -g.p_nodes[static_cast<std::size_t>(j)];
    }
    if (np % 2 == 1) g.p_nodes[static_cast<std::size_t>(np / 2)] = 0.0;
    g.eta = 0.5 * hx;
    return g;
}

double default_p_max(const Domain& domain, const PhysicalParams& params) {
    return 12.0 * params.hbar * std::numbers::pi / domain.length();
}

SmoothedDelta::SmoothedDelta(double epsilon) : epsilon_(epsilon), epsilon_prime_(0.8 * epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw InvalidArgument("smoothed delta needs epsilon > 0");
    }
}

double hermite(int n, double u) {
    if (n == 0) return 1.0;
    double h0 = 1.0;
    double h1 = 2.0 * u;
    for (int k = 1; k < n; ++k) {
        const double h2 = 2.0 * u * h1 - 2.0 * k * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

double delta_derivative(const SmoothedDelta& d, double x, int k) {
    if (k < 0) throw InvalidArgument("derivative order must be non-negative");
    if (std::abs(x) > d.cutoff()) return 0.0;
    const double ep = d.epsilon_prime();
    const double u = x / ep;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign * hermite(k, u) * std::exp(-u * u) /
           (std::pow(ep, k + 1) * std::sqrt(std::numbers::pi));
}

double delta_eval(const SmoothedDelta& d, double x, int derivative_order) {
    if (derivative_order < 0 || derivative_order > 6) {
        throw InvalidArgument("delta derivative order must lie in 0..6");
    }
    return delta_derivative(d, x, derivative_order);
}

double theta_eval(const SmoothedDelta& d, double x) {
    if (x > d.cutoff()) return 1.0;
    if (x < -d.cutoff()) return 0.0;
    return 0.5 * (1.0 + std::erf(x / d.epsilon_prime()));
}

double extrapolate_to_zero(const std::vector<double>& h, const std::vector<double>& f) {
    if (h.size() != f.size() || h.empty()) {
        throw InvalidArgument("extrapolation needs matching non-empty samples");
    }
    std::vector<double> t = f;
    const std::size_t n = h.size();
    for (std::size_t m = 1; m < n; ++m) {
        for (std::size_t i = 0; i + m < n; ++i) {
            t[i] = (h[i + m] * t[i] - h[i] * t[i + 1]) / (h[i + m] - h[i]);
        }
    }
    return t[0];
}

namespace {
std::atomic<int> g_threads{0};
}

void set_num_threads(int n) { g_threads = std::max(0, n); }

int num_threads() {
    const int n = g_threads.load();
    if (n > 0) return n;
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(num_threads()), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n && !failed; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace wigbound
