#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wigbound/core.hpp"
#include "wigbound/numerics.hpp"

namespace wigbound {

using cplx = std::complex<double>;
using ComplexFn = std::function<cplx(double)>;
using PotentialFn = std::function<double(double)>;

enum class WavefunctionKind { unconfined, confined, smooth_confined };

enum class Side { plus, minus };

/// A position-space state, either closure-backed or sampled with spline interpolation.
class Wavefunction {
public:
    /// Closure-backed state; `derivative` may be empty, in which case it is
    /// approximated by central differences.
    static Wavefunction analytic(ComplexFn value, ComplexFn derivative, Domain domain,
                                 WavefunctionKind kind = WavefunctionKind::unconfined);

    /// Sampled state on strictly increasing nodes.
    static Wavefunction sampled(std::vector<double> x, std::vector<cplx> values, Domain domain,
                                WavefunctionKind kind);

    cplx operator()(double x) const;
    cplx derivative(double x) const;

    WavefunctionKind kind() const { return kind_; }
    const Domain& domain() const { return domain_; }
    bool is_sampled() const { return sampled_ != nullptr; }

    /// Interval outside which the state vanishes identically (infinite for unconfined states).
    std::pair<double, double> support() const { return support_; }

    /// One-sided limit of psi (or psi' when derivative_order = 1) at c from the given side,
    /// extrapolated from offsets eta, eta/2, eta/4.
    cplx one_sided(double c, Side side, int derivative_order = 0, double eta = 0.0) const;

    /// Sample nodes for sampled states (empty for closures).
    std::vector<double> sample_nodes() const;

    // Used by smooth_confine to widen the support.
    Wavefunction with_support(std::pair<double, double> s) const;

private:
    struct Samples {
        std::vector<double> x;
        CubicSpline re, im;
    };

    Wavefunction(Domain d) : domain_(d) {}

    ComplexFn value_;
    ComplexFn derivative_;
    std::shared_ptr<const Samples> sampled_;
    Domain domain_;
    WavefunctionKind kind_ = WavefunctionKind::unconfined;
    std::pair<double, double> support_{-HUGE_VAL, HUGE_VAL};
};

/// Analytic infinite-well eigenstate on the symmetric interval [-L/2, L/2].
struct WellEigenstate {
    int n = 1;
    double L = 2.0;
    double k_n = 0.0;
    double beta_n = 0.0;
    double alpha = 0.0;
    double E_n = 0.0;

    double psi(double x) const;
    double dpsi(double x) const;
    /// Confined Wavefunction on ]-L/2, L/2[.
    Wavefunction wavefunction() const;
    Domain domain() const { return Domain(-0.5 * L, 0.5 * L); }
};

WellEigenstate well_eigenstate(int n, double L, const PhysicalParams& params);

Wavefunction confine(const Wavefunction& phi, const Domain& domain);
Wavefunction smooth_confine(const Wavefunction& phi, const Domain& domain,
                            const SmoothedDelta& delta);

/// sum_k c_k psi_k; normalised over the common support when `normalize` is set.
Wavefunction superpose(const std::vector<std::pair<cplx, Wavefunction>>& terms,
                       bool normalize = true);

/// Norm squared by composite Simpson over the support (confined states only).
double norm_squared(const Wavefunction& psi, int n_intervals = 8192);

/// <phi, psi> over the intersection of supports.
cplx overlap(const Wavefunction& phi, const Wavefunction& psi, int n_intervals = 8192);

/// V_D(x) = (hbar^2 / 2m) [delta'(x - b) - delta'(x - a)] and its derivatives.
struct BoundaryPotential {
    Domain domain;
    SmoothedDelta delta;
    double strength;

    double operator()(double x) const { return derivative(x, 0); }
    /// k-th x-derivative of V_D (any k >= 0).
    double derivative(double x, int k) const;
};

BoundaryPotential boundary_potential(const Domain& domain, const SmoothedDelta& delta,
                                     const PhysicalParams& params);

enum class BoundedSolveMethod { collocation, picard };

struct EigenSolveConfig {
    double epsilon = 0.25;
    int taylor_order = 2;
    double E = 0.0;
    std::pair<double, double> bc_points{0.0, 0.0};
    std::pair<double, double> bc_values{0.0, 0.0};
    double ode_tolerance = 1e-10;
    BoundedSolveMethod method = BoundedSolveMethod::collocation;
    int max_iterations = 50;
    // Target mesh spacing; 0 picks min(eps'/10, L/2000).
    double mesh_spacing = 0.0;

    /// Standard configuration with boundary conditions imposed at a + 2 eps and b - 2 eps.
    static EigenSolveConfig standard(const Domain& domain, double epsilon, int taylor_order,
                                     double E, double bc_value);
};

class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string& what, int iterations_, double last_update_)
        : std::runtime_error(what), iterations(iterations_), last_update(last_update_) {}
    int iterations;
    double last_update;
};

struct BoundedSolution {
    Wavefunction psi;
    std::vector<double> x;
    std::vector<double> values;
    int iterations = 0;
    double last_update = 0.0;
};

/// Solves -(hbar^2/2m) psi'' + V psi = E psi + (hbar^2/2m)[delta'(x-a) T_a - delta'(x-b) T_b]
/// where T_a, T_b are the Taylor-shifted boundary terms evaluated at x +- 2 eps.
BoundedSolution solve_bounded_eigenproblem(const PotentialFn& v_bulk, const EigenSolveConfig& cfg,
                                           const Domain& domain, const PhysicalParams& params);

struct SpectrumPoint {
    double E;
    double mismatch;
    bool tangency = false;
};

/// psi(b; E) for the bulk solution with psi(a) = 0, psi'(a) = 1.
double shooting_mismatch(const PotentialFn& v_bulk, const Domain& domain, double E,
                         const PhysicalParams& params);

std::vector<SpectrumPoint> energy_scan(const PotentialFn& v_bulk, const Domain& domain,
                                       double E_lo, double E_hi, int n_samples,
                                       const PhysicalParams& params);

}  // namespace wigbound
