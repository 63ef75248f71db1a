#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wigbound/core.hpp"
#include "wigbound/wavefunction.hpp"
#include "wigbound/wigner.hpp"

namespace wigbound {

enum class SymbolKind { kinetic, polynomial_potential, boundary_delta_prime };
enum class Wall { a, b };
enum class StarSide { left, right };

/// Phase-space symbol acting on a field through the star product.
struct SymbolSpec {
    SymbolKind kind = SymbolKind::kinetic;
    std::vector<double> coefficients;  // polynomial: sum_k c_k x^k
    Wall wall = Wall::a;
    SmoothedDelta delta{0.01};
    PhysicalParams params;

    static SymbolSpec kinetic(const PhysicalParams& params);
    static SymbolSpec polynomial(std::vector<double> coefficients, const PhysicalParams& params);
    static SymbolSpec delta_prime(Wall wall, const SmoothedDelta& delta,
                                  const PhysicalParams& params);

    double wall_position(const Domain& d) const { return wall == Wall::a ? d.a() : d.b(); }
};

/// Highest power of hbar/2 kept in the star series, or the exact finite Bopp expansion.
struct StarTruncation {
    int order = 2;
    bool exact_bopp = false;

    static StarTruncation series(int order);
    static StarTruncation exact();
};

/// Complex values on a phase-space grid, x outer.
struct ComplexField {
    PhaseSpaceGrid grid;
    std::vector<cplx> values;
    std::vector<std::string> warnings;

    cplx at(std::size_t i, std::size_t j) const { return values[grid.flat(i, j)]; }
    double sup_norm() const;
    WignerField real_part(const PhysicalParams& params = {}) const;
};

/// Fourth-order x-derivatives of F at x on the grid momenta. Stencils stay on the side
/// given by `side` when a wall or the split point is within reach.
struct XDerivatives {
    std::vector<double> d1, d2;
};
XDerivatives x_derivatives(const WignerField& F, double x, std::optional<Side> side = std::nullopt);

/// d^n F / dp^n at x on the grid momenta: kernel moments when available, else finite
/// differences on the grid.
std::vector<double> p_derivative(const WignerField& F, double x, int n);

ComplexField star_product(const SymbolSpec& A, const WignerField& F, StarTruncation trunc,
                          StarSide side);

/// (A * F - F * A) / (i hbar).
WignerField moyal_bracket(const SymbolSpec& A, const WignerField& F, StarTruncation trunc);

enum class DeltaStarMethod { automatic, kernel, k_integral };

struct DeltaStarOptions {
    // Gaussian spread of the regularised delta used inside the star product.
    double epsilon_prime = 1.25e-4;
    DeltaStarMethod method = DeltaStarMethod::automatic;
    // Offsets of the one-sided limit; empty means {6, 8, 10} eps'. Several offsets are
    // extrapolated to zero.
    std::vector<double> eta_levels;
    int k_nodes = 1024;      // Simpson intervals over |k| <= 8/eps'
    int y_intervals = 200;   // Simpson intervals over the delta window in y
};

/// delta'(x - wall) * F(x +- 0, p) (left) or F(x +- 0, p) * delta'(x - wall) (right) at one point.
/// The one-sided offset is applied to F before the star product is taken.
cplx delta_prime_star_at(const WignerField& F, Wall wall, Side side_limit, StarSide direction,
                         double x, double p, const DeltaStarOptions& opt = {},
                         std::vector<std::string>* warnings = nullptr);

/// Same for every momentum in p.
std::vector<cplx> delta_prime_star_row(const WignerField& F, Wall wall, Side side_limit,
                                       StarSide direction, double x, std::span<const double> p,
                                       const DeltaStarOptions& opt = {},
                                       std::vector<std::string>* warnings = nullptr);

ComplexField delta_prime_star(const WignerField& F, Wall wall, Side side_limit,
                              StarSide direction, const DeltaStarOptions& opt = {});

/// Pure-state closed form -(1/pi hbar) exp(-2ip(c - x)/hbar) psi*(2x - c) psi'(c) for a
/// Dirichlet state; the right-star value is its complex conjugate for real states.
cplx delta_prime_star_closed_form(const Wavefunction& psi, Wall wall, double x, double p,
                                  const PhysicalParams& params, StarSide direction = StarSide::left);

enum class ResidualSide { left, right, both };

struct ResidualResult {
    ComplexField field;  // left-star residual (right-star when only that was requested)
    std::optional<ComplexField> right;
    double sup = 0.0;
    double sup_left = 0.0;
    double sup_right = 0.0;
    int collar = 2;
};

struct ResidualOptions {
    bool boundary_terms = true;
    int collar = 2;
    DeltaStarOptions delta;
};

/// H * F - (hbar^2/2m) delta'(x-a) * F(x+) + (hbar^2/2m) delta'(x-b) * F(x-) - E F on interior
/// nodes. An empty V_bulk means zero potential.
ResidualResult stargenvalue_residual(const WignerField& F, const PotentialFn& v_bulk, double E,
                                     const PhysicalParams& params,
                                     ResidualSide which = ResidualSide::left,
                                     const ResidualOptions& opt = {});

/// Sup norms of the left residual for several trial energies, sharing the E-independent part.
std::vector<double> residual_energy_sweep(const WignerField& F, const PotentialFn& v_bulk,
                                          const std::vector<double>& energies,
                                          const PhysicalParams& params,
                                          const ResidualOptions& opt = {});

/// (1/pi hbar) int dy exp(-2ipy/hbar) V(x +- y) Ft(x, y): V * F (left, +) or F * V (right, -).
std::vector<cplx> potential_star_row(const WignerField& F, const PotentialFn& v, double x,
                                     StarSide side);

}  // namespace wigbound
