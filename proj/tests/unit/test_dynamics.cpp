#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wigbound/dynamics.hpp"

using namespace wigbound;
using std::numbers::pi;

namespace {

PhaseSpaceGrid grid(int nx, int np) {
    const Domain d(-1.0, 1.0);
    return make_phase_grid(d, nx, np, default_p_max(d, PhysicalParams{}));
}

double sup_abs(const WignerField& F) {
    double m = 0.0;
    for (double v : F.values()) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

TEST_SUITE("dynamics") {
    TEST_CASE("eigenstates are stationary and conserve probability") {
        const PhysicalParams P;
        const auto F = analytic_well_wigner(1, 2.0, P, grid(65, 65));
        const auto r = moyal_rhs(F, {}, P);
        CHECK(sup_abs(r) < 1e-4);
        CHECK(std::abs(phase_space_integral(r)) < 1e-6);
        CHECK(std::abs(check_conservation(F, {}, P)) < 1e-6);
    }

    TEST_CASE("phase-space integral of an eigenstate is one") {
        const auto F = analytic_well_wigner(1, 2.0, PhysicalParams{}, grid(129, 257));
        CHECK(phase_space_integral(F) == doctest::Approx(1.0).epsilon(1e-3));
    }

    TEST_CASE("order corrections are the printed terms") {
        const PhysicalParams P;
        const Domain d(-1.0, 1.0);
        const SmoothedDelta D(0.25);
        for (double x : {-0.9, -0.3, 0.0, 0.45, 0.95}) {
            auto diff = [&](int k) {
                return delta_derivative(D, x + 1.0, k) - delta_derivative(D, x - 1.0, k);
            };
            const double f0 = approx_force(0, D, x, P, d);
            const double f1 = approx_force(1, D, x, P, d);
            const double f2 = approx_force(2, D, x, P, d);
            CHECK(f0 == doctest::Approx(0.5 * diff(2)).epsilon(1e-14));
            CHECK(std::abs((f1 - f0) - diff(4) / 48.0) <= 1e-12 * std::max(1.0, std::abs(f1)));
            CHECK(std::abs((f2 - f1) + diff(6) / 3840.0) <= 1e-12 * std::max(1.0, std::abs(f2)));
        }
        CHECK_THROWS_AS(approx_force(3, D, 0.0, P, d), InvalidArgument);
    }

    TEST_CASE("narrow walls leave the interior inertial") {
        const PhysicalParams P;
        const auto t = approx_trajectories(0, SmoothedDelta(0.025), {0.0, 0.5}, {0.0, 1.0}, P);
        const auto e = t.samples.back();
        CHECK(e.x == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(e.p == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(t.origin == TrajectoryOrigin::ode_order0);
    }

    TEST_CASE("order-0 orbit reflects at moderate momentum") {
        const auto t = approx_trajectories(0, SmoothedDelta(0.25), {0.0, 1.0}, {0.0, 20.0}, PhysicalParams{});
        double pmin = 1e9;
        for (const auto& s : t.samples) pmin = std::min(pmin, s.p);
        CHECK_FALSE(t.escaped);
        CHECK(pmin == doctest::Approx(-1.0).epsilon(1e-3));
    }

    TEST_CASE("escape threshold matches the barrier height") {
        const PhysicalParams P;
        const SmoothedDelta D(0.25);
        // Kinetic energy p^2/2 equals the peak of (1/2) delta'(x) at x = eps'/sqrt(2).
        const double oracle =
            std::sqrt(std::sqrt(2.0) * std::exp(-0.5) / std::sqrt(pi)) / D.epsilon_prime();
        const double th = escape_threshold(0, D, P, TrajectoryOptions{}, 0.5, 50.0);
        CHECK(th == doctest::Approx(oracle).epsilon(1e-4));
        CHECK_THROWS_AS(escape_threshold(0, D, P, TrajectoryOptions{}, 5.0, 50.0), InvalidArgument);
    }

    TEST_CASE("contours of the ground state are closed") {
        const auto F = analytic_well_wigner(1, 2.0, PhysicalParams{}, grid(65, 65));
        double mx = 0.0;
        for (double v : F.values()) mx = std::max(mx, v);
        const auto cs = exact_trajectories(F, {0.5 * mx});
        REQUIRE_FALSE(cs.empty());
        for (const auto& c : cs) {
            CHECK(c.closed);
            CHECK(c.origin == TrajectoryOrigin::contour_level);
        }
        CHECK_THROWS_AS(exact_trajectories(F, {std::nan("")}), InvalidArgument);
        CHECK(to_string(TrajectoryOrigin::ode_exact_force) == "ode_exact_force");
    }

    TEST_CASE("effective force of a quadratic potential is classical") {
        const PhysicalParams P;
        const Domain d(-1.0, 1.0);
        const auto g = make_phase_grid(d, 21, 129, 64.0);
        const auto F = analytic_well_wigner(1, 2.0, P, g);
        const PotentialFn V = [](double x) { return 0.7 * x * x - 0.3 * x; };
        const auto f = effective_force(F, V, P);
        double e = 0.0;
        for (std::size_t i = 2; i + 2 < g.nx(); ++i) {
            for (std::size_t j = 0; j < g.np(); ++j) {
                if (f.mask[g.flat(i, j)]) continue;
                e = std::max(e, std::abs(f.values[g.flat(i, j)] + (1.4 * g.x_nodes[i] - 0.3)));
            }
        }
        CHECK(e < 1e-8);
        CHECK(f.mask_fraction() < 0.5);
    }
}
