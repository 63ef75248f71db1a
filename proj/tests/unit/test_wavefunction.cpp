#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wigbound/wavefunction.hpp"

using namespace wigbound;
using std::numbers::pi;

TEST_SUITE("wavefunction") {
    TEST_CASE("well eigenstates have the textbook energies") {
        const PhysicalParams P;
        for (int n = 1; n <= 4; ++n) {
            const auto s = well_eigenstate(n, 2.0, P);
            CHECK(s.E_n == doctest::Approx(pi * pi * n * n / 8.0).epsilon(1e-14));
            CHECK(s.k_n == doctest::Approx(pi * n / 2.0));
            CHECK(std::abs(s.psi(-1.0)) < 1e-14);
            CHECK(std::abs(s.psi(1.0)) < 1e-14);
            CHECK(norm_squared(s.wavefunction()) == doctest::Approx(1.0).epsilon(1e-10));
        }
        CHECK(well_eigenstate(1, 2.0, P).psi(0.0) == doctest::Approx(1.0));
        CHECK_THROWS_AS(well_eigenstate(0, 2.0, P), InvalidArgument);
    }

    TEST_CASE("eigenstates are orthonormal") {
        const PhysicalParams P;
        const auto a = well_eigenstate(1, 2.0, P).wavefunction();
        const auto b = well_eigenstate(2, 2.0, P).wavefunction();
        CHECK(std::abs(overlap(a, b)) < 1e-10);
        CHECK(std::abs(overlap(a, a)) == doctest::Approx(1.0).epsilon(1e-10));
    }

    TEST_CASE("confined states vanish outside the domain") {
        const Domain d(-1.0, 1.0);
        const auto phi = Wavefunction::analytic([](double x) { return cplx(std::exp(-x * x), 0.0); }, {}, d);
        const auto c = confine(phi, d);
        CHECK(c.kind() == WavefunctionKind::confined);
        CHECK(c(1.5) == cplx(0.0, 0.0));
        CHECK(c(0.5).real() == doctest::Approx(std::exp(-0.25)));
        CHECK(c.derivative(0.5).real() == doctest::Approx(-std::exp(-0.25)).epsilon(1e-6));
    }

    TEST_CASE("one-sided limits of the ground state at the wall") {
        const auto s = well_eigenstate(1, 2.0, PhysicalParams{});
        const auto psi = s.wavefunction();
        CHECK(std::abs(psi.one_sided(-1.0, Side::plus)) < 1e-8);
        CHECK(psi.one_sided(-1.0, Side::plus, 1).real() == doctest::Approx(pi / 2.0).epsilon(1e-6));
        CHECK(std::abs(psi.one_sided(-1.0, Side::minus, 1)) < 1e-12);
    }

    TEST_CASE("superposition is normalised") {
        const PhysicalParams P;
        const auto s = superpose({{1.0, well_eigenstate(1, 2.0, P).wavefunction()},
                                  {cplx(0.0, 1.0), well_eigenstate(2, 2.0, P).wavefunction()}});
        CHECK(norm_squared(s) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(s(0.0).real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
    }

    TEST_CASE("sampled states interpolate") {
        const Domain d(-1.0, 1.0);
        std::vector<double> x;
        std::vector<cplx> v;
        for (int k = 0; k <= 200; ++k) {
            x.push_back(-1.0 + 0.01 * k);
            v.emplace_back(std::cos(pi * x.back() / 2.0), 0.0);
        }
        const auto s = Wavefunction::sampled(x, v, d, WavefunctionKind::confined);
        CHECK(s.is_sampled());
        CHECK(s(0.123).real() == doctest::Approx(std::cos(pi * 0.123 / 2.0)).epsilon(1e-7));
        CHECK_THROWS_AS(Wavefunction::sampled({0.0, 0.0, 1.0}, {1.0, 1.0, 1.0}, d,
                                              WavefunctionKind::confined),
                        InvalidArgument);
    }

    TEST_CASE("boundary potential is the difference of delta derivatives") {
        const Domain d(-1.0, 1.0);
        const SmoothedDelta D(0.25);
        const auto V = boundary_potential(d, D, PhysicalParams{});
        const double x = 0.8;
        CHECK(V(x) == doctest::Approx(0.5 * (delta_eval(D, x - 1.0, 1) - delta_eval(D, x + 1.0, 1))));
        CHECK(V.derivative(x, 2) ==
              doctest::Approx(0.5 * (delta_eval(D, x - 1.0, 3) - delta_eval(D, x + 1.0, 3))));
    }

    TEST_CASE("shooting scan finds the first three levels") {
        const Domain d(-1.0, 1.0);
        const auto scan = energy_scan({}, d, 0.1, 25.0, 400, PhysicalParams{});
        REQUIRE(scan.size() >= 3);
        for (int n = 1; n <= 3; ++n) {
            CHECK(scan[n - 1].E == doctest::Approx(pi * pi * n * n / 8.0).epsilon(1e-6));
        }
        CHECK(energy_scan({}, d, 5.0, 5.0, 10, PhysicalParams{}).empty());
    }

    TEST_CASE("shooting with a bulk potential shifts the levels") {
        const Domain d(-1.0, 1.0);
        const auto scan = energy_scan([](double) { return 2.0; }, d, 0.1, 5.0, 200, PhysicalParams{});
        REQUIRE_FALSE(scan.empty());
        CHECK(scan[0].E == doctest::Approx(pi * pi / 8.0 + 2.0).epsilon(1e-6));
    }

    TEST_CASE("bounded solver with broad walls leaks past the walls") {
        const Domain d(-1.0, 1.0);
        const auto cfg = EigenSolveConfig::standard(d, 0.25, 2, pi * pi / 8.0, 0.707);
        const auto r = solve_bounded_eigenproblem({}, cfg, d, PhysicalParams{});
        double mx = 0.0, leak = 0.0;
        for (std::size_t i = 0; i < r.x.size(); ++i) {
            mx = std::max(mx, r.values[i]);
            if (std::abs(r.x[i]) > 1.0) leak = std::max(leak, std::abs(r.values[i]));
        }
        CHECK(mx == doctest::Approx(1.0).epsilon(0.05));
        CHECK(leak > 1e-3);
    }
}
