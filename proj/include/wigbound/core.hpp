#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wigbound {

/// Raised when an argument violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a wavefunction's support does not match the grid it is sampled on.
class DomainMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Physical constants. Both must be strictly positive.
struct PhysicalParams {
    double hbar = 1.0;
    double mass = 1.0;

    PhysicalParams() = default;
    PhysicalParams(double hbar_, double mass_);
};

/// The confinement interval ]a, b[.
class Domain {
public:
    Domain(double a, double b);

    double a() const { return a_; }
    double b() const { return b_; }
    double x0() const { return 0.5 * (a_ + b_); }
    double length() const { return b_ - a_; }
    bool contains(double x) const { return x > a_ && x < b_; }

    bool operator==(const Domain&) const = default;

private:
    double a_;
    double b_;
};

/// Uniform phase-space grid on [a, b] x [-p_max, p_max].
struct PhaseSpaceGrid {
    Domain domain{-1.0, 1.0};
    std::vector<double> x_nodes;
    std::vector<double> p_nodes;
    double eta = 0.0;  // one-sided limit offset

    std::size_t nx() const { return x_nodes.size(); }
    std::size_t np() const { return p_nodes.size(); }
    double dx() const { return x_nodes[1] - x_nodes[0]; }
    double dp() const { return p_nodes[1] - p_nodes[0]; }
    double p_max() const { return p_nodes.back(); }

    /// Nearest node index for a coordinate (clamped to the grid).
    std::size_t x_index(double x) const;
    std::size_t p_index(double p) const;
    /// Row-major flat index, x outer.
    std::size_t flat(std::size_t i, std::size_t j) const { return i * np() + j; }
};

PhaseSpaceGrid make_phase_grid(const Domain& domain, int nx, int np, double p_max);

/// Default desk-scale momentum cutoff 12 hbar pi / L.
double default_p_max(const Domain& domain, const PhysicalParams& params);

/// Gaussian regularisation of the Dirac delta with spread 0.8 epsilon.
class SmoothedDelta {
public:
    explicit SmoothedDelta(double epsilon);

    double epsilon() const { return epsilon_; }
    double epsilon_prime() const { return epsilon_prime_; }
    /// Half-width beyond which the Gaussian is treated as exactly zero.
    double cutoff() const { return 6.0 * epsilon_prime_; }

private:
    double epsilon_;
    double epsilon_prime_;
};

/// k-th derivative of the smoothed delta at x, k in 0..6.
double delta_eval(const SmoothedDelta& d, double x, int derivative_order);

/// Same as delta_eval without the order restriction (used for potential derivatives).
double delta_derivative(const SmoothedDelta& d, double x, int derivative_order);

/// Smoothed Heaviside step, the antiderivative of the smoothed delta.
double theta_eval(const SmoothedDelta& d, double x);

/// Physicists' Hermite polynomial H_n(u).
double hermite(int n, double u);

/// Polynomial extrapolation to h = 0 from samples f(h_k) (Neville).
double extrapolate_to_zero(const std::vector<double>& h, const std::vector<double>& f);

// Worker count used by the parallel maps. 0 means hardware concurrency.
void set_num_threads(int n);
int num_threads();

/// Runs body(i) for i in [0, n) across the configured worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace wigbound
