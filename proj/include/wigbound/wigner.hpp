#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wigbound/core.hpp"
#include "wigbound/wavefunction.hpp"

namespace wigbound {

enum class Provenance { numeric_transform, analytic_well, external };

std::string to_string(Provenance p);

/// Real phase-space field on a grid, optionally backed by exact evaluators.
///
/// The kernel is the position-space pair density Ft(x, y) = psi*(x - y) psi(x + y), related to
/// the field by F(x, p) = (1/pi hbar) int dy exp(-2ipy/hbar) Ft(x, y). Fields without a kernel
/// fall back to p-quadrature over the grid.
class WignerField {
public:
    using PointFn = std::function<double(double x, double p)>;
    // Fills out[j] = F(x, p[j]).
    using RowFn = std::function<void(double x, std::span<const double> p, std::span<double> out)>;
    using KernelFn = std::function<cplx(double x, double y)>;

    WignerField(PhaseSpaceGrid grid, std::vector<double> values,
                Provenance provenance = Provenance::external, PhysicalParams params = {});

    const PhaseSpaceGrid& grid() const { return grid_; }
    const Domain& domain() const { return grid_.domain; }
    const std::vector<double>& values() const { return values_; }
    double at(std::size_t i, std::size_t j) const { return values_[grid_.flat(i, j)]; }
    Provenance provenance() const { return provenance_; }
    const PhysicalParams& params() const { return params_; }

    /// Point value: exact evaluator when present, else cubic interpolation of the grid.
    /// Zero outside [a, b].
    double operator()(double x, double p) const;
    /// F(x, p_j) for the given momenta.
    void row(double x, std::span<const double> p, std::span<double> out) const;
    std::vector<double> row(double x) const;

    bool has_evaluator() const { return static_cast<bool>(point_); }
    bool has_kernel() const { return static_cast<bool>(kernel_); }
    /// Ft(x, y); computed by p-quadrature of the grid values when no kernel is attached.
    cplx kernel(double x, double y) const;

    /// Split representation: F1 on a < x <= x0 and F2 on x0 < x < b.
    bool split() const { return split_; }
    double x0() const { return x0_; }

    /// Source state when the field came from a known wavefunction.
    const std::optional<Wavefunction>& state() const { return state_; }
    /// Largest |Im| of the defining integral relative to max |F|.
    double imag_residue() const { return imag_residue_; }

    WignerField& set_evaluator(PointFn point, RowFn row);
    WignerField& set_kernel(KernelFn kernel);
    WignerField& set_state(Wavefunction psi);
    WignerField& set_split(double x0);
    WignerField& set_imag_residue(double r);

private:
    double interpolate(double x, double p) const;

    PhaseSpaceGrid grid_;
    std::vector<double> values_;
    Provenance provenance_;
    PhysicalParams params_;
    PointFn point_;
    RowFn row_;
    KernelFn kernel_;
    std::optional<Wavefunction> state_;
    bool split_ = false;
    double x0_ = 0.0;
    double imag_residue_ = 0.0;
};

/// sum_k c_k F_k on a common grid; evaluators and kernels combine linearly when all terms have them.
WignerField combine(const std::vector<std::pair<double, WignerField>>& terms);

/// Numeric transform over the finite y-window min(x - a, b - x) of the confined state.
WignerField wigner_transform(const Wavefunction& psi, const PhaseSpaceGrid& grid,
                             const PhysicalParams& params = {});

/// Closed-form infinite-well Wigner function on [-L/2, L/2]; default desk grid when none given.
WignerField analytic_well_wigner(int n, double L, const PhysicalParams& params,
                                 std::optional<PhaseSpaceGrid> grid = std::nullopt);

struct CheckResult {
    std::string name;
    std::string equation;
    std::vector<double> measured;  // per grid momentum
    double measured_max = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    // Set for checks that compare against a predicted value instead of zero.
    std::optional<double> expected;
};

struct BoundaryReport {
    std::vector<CheckResult> checks;

    bool all_pass() const;
    const CheckResult& find(const std::string& name) const;
    void append(const BoundaryReport& other);
};

/// F(a+, p) = F(b-, p) = 0 and continuity across x0.
BoundaryReport check_consistency(const WignerField& F, double tolerance = 1e-8);

/// dF/dx(a+) = dF/dx(b-) = 0, the automatic second-derivative consequences, and the
/// third-derivative value 8|psi'(a+)|^2 / (pi hbar) when the source state is known.
BoundaryReport check_dirichlet_subsidiary(const WignerField& F, double tolerance = 1e-6);

/// lim int F(a + s, p) dp and lim int F(b - s, p) dp as s -> 0+.
BoundaryReport check_integral_dirichlet(const WignerField& F, double tolerance = 1e-6);

/// One-sided limit of F at c from the given side, per grid momentum.
std::vector<double> one_sided_limit(const WignerField& F, double c, Side side,
                                    double offset = 0.0);

/// One-sided x-derivative of F (order 1..3) at c from the given side, per grid momentum,
/// from a polynomial fit through samples at c +- k h, k = 1..n_points.
std::vector<double> one_sided_derivative(const WignerField& F, double c, Side side, int order,
                                         double h, int n_points = 6);

struct Marginals {
    std::function<double(double)> position;
    double total = 0.0;
};

Marginals marginals(const WignerField& F);

class NotPureState : public std::runtime_error {
public:
    NotPureState(const std::string& what, double residual_)
        : std::runtime_error(what), residual(residual_) {}
    double residual;
};

/// Baker-converse reconstruction; the phase makes psi(u0) real positive. Closure-backed
/// fields are sampled on a momentum band four times wider than the grid.
/// The purity test compares the sup factorisation residual, relative to sup |Ft|, with the
/// threshold.
Wavefunction reconstruct_wavefunction(const WignerField& F, double purity_threshold = 1e-2);

}  // namespace wigbound
