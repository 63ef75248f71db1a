#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "wigbound/core.hpp"
#include "wigbound/numerics.hpp"
#include "wigbound/star.hpp"
#include "wigbound/wigner.hpp"

namespace wigbound {

struct MoyalOptions {
    int collar = 2;
    DeltaStarOptions delta;
};

/// dF/dt = [H, F]_M - (hbar^2/2m)[delta'(x-a), F(x+)]_M + (hbar^2/2m)[delta'(x-b), F(x-)]_M on
/// interior nodes; the collar next to each wall is left at zero. An empty V_bulk means zero potential.
WignerField moyal_rhs(const WignerField& F, const PotentialFn& v_bulk, const PhysicalParams& params,
                      const MoyalOptions& opt = {});

/// Integral of the rhs over the phase-space grid.
double check_conservation(const WignerField& F, const PotentialFn& v_bulk,
                          const PhysicalParams& params, const MoyalOptions& opt = {});
double phase_space_integral(const WignerField& F);

/// Experimental: one classical RK4 step of the Moyal equation on the grid values. The result
/// carries no kernel, so later steps reconstruct it by p-quadrature. Unvalidated beyond short
/// two-state beats.
WignerField moyal_step_rk4(const WignerField& F, const PotentialFn& v_bulk, double dt,
                           const PhysicalParams& params, const MoyalOptions& opt = {});

class DegenerateField : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// -dV_eff/dx on the grid. Masked nodes have |dF/dp| below the floor and hold zero force.
struct EffectiveForceField {
    PhaseSpaceGrid grid;
    std::vector<double> values;
    std::vector<char> mask;
    // J(x_i, p'_j) on the grid momenta, Gaussian-damped in y.
    std::vector<double> j_kernel;
    double floor = 0.0;
    // Values with masked nodes filled, used for interpolation.
    std::vector<double> filled;

    double mask_fraction() const;
    /// Bilinear interpolation; masked nodes are filled from the nearest unmasked momenta in the row.
    double operator()(double x, double p) const;
};

struct ForceOptions {
    double floor_relative = 1e-6;
    // Width of the Gaussian damping applied to V(x+y) - V(x-y) when tabulating J.
    double j_damping = 0.0;  // 0 means the domain length
};

/// int dp' J(x, p') F(x, p + p') evaluated on the grid, equal to [V, F]_M.
std::vector<double> force_numerator(const WignerField& F, const PotentialFn& v_total, double x);

/// J(x, p) = (i / pi hbar^2) int dy [V(x + y) - V(x - y)] exp(-2ipy/hbar) exp(-(y/damping)^2).
double j_kernel(const PotentialFn& v, double x, double p, const PhysicalParams& params,
                double half_width, double damping);

EffectiveForceField effective_force(const WignerField& F, const PotentialFn& v_total,
                                    const PhysicalParams& params, const ForceOptions& opt = {});

enum class TrajectoryOrigin { contour_level, ode_order0, ode_order1, ode_order2, ode_exact_force };
std::string to_string(TrajectoryOrigin o);

struct TrajectorySample {
    double t, x, p;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    TrajectoryOrigin origin = TrajectoryOrigin::contour_level;
    double epsilon = 0.0;
    double rtol = 0.0;
    double atol = 0.0;
    double level = 0.0;   // contour level for contour trajectories
    bool closed = false;  // contour returns to its first vertex
    bool escaped = false; // ODE trajectory left the walls
};

/// Integrator failure carrying the samples accepted before it.
class TrajectoryFailure : public IntegratorFailure {
public:
    TrajectoryFailure(const IntegratorFailure& f, Trajectory partial_)
        : IntegratorFailure(f), partial(std::move(partial_)) {}
    Trajectory partial;
};

/// Equi-Wigner contours by marching squares; t is arc length.
std::vector<Trajectory> exact_trajectories(const WignerField& F, const std::vector<double>& levels);

struct TrajectoryOptions {
    Domain domain{-1.0, 1.0};
    OdeOptions ode{};
    // Stop once |x| lies beyond a wall by more than this many eps'.
    double escape_margin = 6.0;
    bool stop_on_escape = false;
};

/// p-dot of the truncated hierarchy: order 0 (hbar^2/2m)[delta''(x-a) - delta''(x-b)], order 1
/// adds (hbar^2/48m)[delta''''(x-a) - delta''''(x-b)], order 2 subtracts
/// (hbar^4/3840m)[delta^(6)(x-a) - delta^(6)(x-b)].
double approx_force(int order, const SmoothedDelta& delta, double x, const PhysicalParams& params,
                    const Domain& domain);

Trajectory approx_trajectories(int order, const SmoothedDelta& delta, std::array<double, 2> init,
                               std::array<double, 2> t_span, const PhysicalParams& params,
                               const TrajectoryOptions& opt = {});

/// x' = p/m, p' = force(x, p) from a tabulated effective force.
Trajectory force_trajectory(const EffectiveForceField& force, std::array<double, 2> init,
                            std::array<double, 2> t_span, const PhysicalParams& params,
                            const OdeOptions& ode = {});

/// Smallest launch momentum from x = (a+b)/2 whose order-k trajectory escapes, by bisection.
double escape_threshold(int order, const SmoothedDelta& delta, const PhysicalParams& params,
                        const TrajectoryOptions& opt, double p_lo, double p_hi, double tol = 1e-6);

}  // namespace wigbound
