#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wigbound/wigner.hpp"

using namespace wigbound;
using std::numbers::pi;

namespace {

PhaseSpaceGrid small_grid(int nx = 65, int np = 65) {
    const Domain d(-1.0, 1.0);
    return make_phase_grid(d, nx, np, default_p_max(d, PhysicalParams{}));
}

double sup_diff(const WignerField& a, const WignerField& b) {
    double e = 0.0;
    for (std::size_t k = 0; k < a.values().size(); ++k) {
        e = std::max(e, std::abs(a.values()[k] - b.values()[k]));
    }
    return e;
}

}  // namespace

TEST_SUITE("wigner") {
    TEST_CASE("ground-state value at the origin") {
        const PhysicalParams P;
        const auto F = analytic_well_wigner(1, 2.0, P, small_grid());
        CHECK(F.provenance() == Provenance::analytic_well);
        // F(0,0) = (1/pi) int |psi|^2 dy over the full window.
        CHECK(F(0.0, 0.0) == doctest::Approx(1.0 / pi).epsilon(1e-10));
        CHECK(F(1.5, 0.0) == 0.0);
        CHECK(to_string(Provenance::numeric_transform) == "numeric_transform");
    }

    TEST_CASE("numeric transform matches the closed form") {
        const PhysicalParams P;
        const auto g = small_grid();
        for (int n = 1; n <= 2; ++n) {
            const auto Fn = wigner_transform(well_eigenstate(n, 2.0, P).wavefunction(), g, P);
            const auto Fa = analytic_well_wigner(n, 2.0, P, g);
            CHECK(sup_diff(Fn, Fa) < 1e-8);
            CHECK(Fn.imag_residue() < 1e-10);
        }
    }

    TEST_CASE("marginals are normalised") {
        const auto F = analytic_well_wigner(2, 2.0, PhysicalParams{}, small_grid(65, 257));
        const auto m = marginals(F);
        CHECK(m.total == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(m.position(0.5) == doctest::Approx(std::pow(std::sin(pi * 0.5), 2)).epsilon(1e-3));
    }

    TEST_CASE("eigenstates pass the boundary checks") {
        const auto F = analytic_well_wigner(1, 2.0, PhysicalParams{}, small_grid());
        auto r = check_consistency(F);
        r.append(check_dirichlet_subsidiary(F));
        r.append(check_integral_dirichlet(F));
        for (const auto& c : r.checks) {
            INFO(c.name << " measured " << c.measured_max);
            CHECK(c.pass);
        }
        CHECK(r.all_pass());
        CHECK_THROWS(r.find("no_such_check"));
    }

    TEST_CASE("constant state violates the Neumann and integral checks") {
        const PhysicalParams P;
        const auto g = small_grid();
        const Domain d(-1.0, 1.0);
        const auto c = Wavefunction::analytic([](double) { return cplx(std::sqrt(0.5), 0.0); },
                                              [](double) { return cplx(0.0, 0.0); }, d,
                                              WavefunctionKind::confined);
        const auto F = wigner_transform(c, g, P);
        const auto sub = check_dirichlet_subsidiary(F);
        const auto& neu = sub.find("neumann_left");
        CHECK_FALSE(neu.pass);
        CHECK(std::abs(neu.measured[g.np() / 2]) == doctest::Approx(1.0 / pi).epsilon(1e-3));
        const auto integ = check_integral_dirichlet(F);
        CHECK_FALSE(integ.all_pass());
        CHECK(integ.find("integral_dirichlet_left").measured[0] == doctest::Approx(0.5).epsilon(1e-3));
    }

    TEST_CASE("one-sided limits at the walls vanish for eigenstates") {
        const auto F = analytic_well_wigner(2, 2.0, PhysicalParams{}, small_grid());
        for (double v : one_sided_limit(F, -1.0, Side::plus)) CHECK(std::abs(v) < 1e-6);
        for (double v : one_sided_limit(F, 1.0, Side::minus)) CHECK(std::abs(v) < 1e-6);
    }

    TEST_CASE("Baker round trip recovers the state") {
        const PhysicalParams P;
        const auto g = small_grid(129, 129);
        const auto s = well_eigenstate(2, 2.0, P).wavefunction();
        const auto psi = reconstruct_wavefunction(wigner_transform(s, g, P));
        CHECK(std::abs(overlap(psi, s)) == doctest::Approx(1.0).epsilon(1e-6));
    }

    TEST_CASE("mixtures are not pure") {
        const PhysicalParams P;
        const auto g = small_grid(129, 129);
        const auto mix = combine({{0.5, analytic_well_wigner(1, 2.0, P, g)},
                                  {0.5, analytic_well_wigner(2, 2.0, P, g)}});
        CHECK_THROWS_AS(reconstruct_wavefunction(mix), NotPureState);
    }

    TEST_CASE("combine is linear") {
        const PhysicalParams P;
        const auto g = small_grid();
        const auto F1 = analytic_well_wigner(1, 2.0, P, g);
        const auto F3 = combine({{2.0, F1}, {-1.0, F1}});
        CHECK(sup_diff(F1, F3) < 1e-14);
        CHECK_THROWS(combine({}));
    }
}
