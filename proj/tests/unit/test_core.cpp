#include <doctest.h>

#include <atomic>
#include <cmath>
#include <numbers>

#include "wigbound/core.hpp"
#include "wigbound/numerics.hpp"

using namespace wigbound;

TEST_SUITE("core") {
    TEST_CASE("domain and params validate their inputs") {
        CHECK_THROWS_AS(Domain(1.0, 1.0), InvalidArgument);
        CHECK_THROWS_AS(Domain(2.0, -1.0), InvalidArgument);
        CHECK_THROWS_AS(PhysicalParams(0.0, 1.0), InvalidArgument);
        CHECK_THROWS_AS(PhysicalParams(1.0, -2.0), InvalidArgument);
        const Domain d(-1.0, 3.0);
        CHECK(d.x0() == 1.0);
        CHECK(d.length() == 4.0);
        CHECK(d.contains(0.0));
        CHECK_FALSE(d.contains(-1.0));
    }

    TEST_CASE("phase grid layout") {
        const Domain d(-1.0, 1.0);
        CHECK_THROWS_AS(make_phase_grid(d, 2, 9, 1.0), InvalidArgument);
        CHECK_THROWS_AS(make_phase_grid(d, 9, 9, 0.0), InvalidArgument);
        const auto g = make_phase_grid(d, 5, 7, 3.0);
        CHECK(g.nx() == 5);
        CHECK(g.np() == 7);
        CHECK(g.x_nodes.front() == -1.0);
        CHECK(g.x_nodes.back() == 1.0);
        CHECK(g.p_max() == doctest::Approx(3.0));
        CHECK(g.dx() == doctest::Approx(0.5));
        CHECK(g.flat(2, 3) == 2 * 7 + 3);
        CHECK(g.x_index(0.26) == 3);
        CHECK(g.p_index(100.0) == 6);
        CHECK(default_p_max(d, PhysicalParams{}) == doctest::Approx(6.0 * std::numbers::pi));
    }

    TEST_CASE("smoothed delta is a normalised Gaussian") {
        CHECK_THROWS_AS(SmoothedDelta(0.0), InvalidArgument);
        const SmoothedDelta D(0.25);
        CHECK(D.epsilon_prime() == doctest::Approx(0.2));
        CHECK(D.cutoff() == doctest::Approx(1.2));
        const double e = D.epsilon_prime();
        CHECK(delta_eval(D, 0.0, 0) == doctest::Approx(1.0 / (e * std::sqrt(std::numbers::pi))));
        CHECK_THROWS_AS(delta_eval(D, 0.0, 7), InvalidArgument);
        CHECK(delta_eval(D, 2.0, 0) == 0.0);
        // Trapezoid sum of the Gaussian and its first moment of delta'.
        double mass = 0.0, moment = 0.0;
        const double h = 1e-3;
        for (int k = -2000; k <= 2000; ++k) {
            mass += h * delta_eval(D, k * h, 0);
            moment += h * (k * h) * delta_eval(D, k * h, 1);
        }
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(moment == doctest::Approx(-1.0).epsilon(1e-9));
        CHECK(theta_eval(D, 0.0) == doctest::Approx(0.5));
        CHECK(theta_eval(D, 5.0) == doctest::Approx(1.0));
    }

    TEST_CASE("delta derivatives match finite differences") {
        const SmoothedDelta D(0.1);
        const double x = 0.03, h = 1e-5;
        for (int k = 0; k < 6; ++k) {
            const double fd = (delta_derivative(D, x + h, k) - delta_derivative(D, x - h, k)) / (2 * h);
            CHECK(delta_derivative(D, x, k + 1) ==
                  doctest::Approx(fd).epsilon(1e-5).scale(std::abs(fd)));
        }
    }

    TEST_CASE("hermite recurrence") {
        CHECK(hermite(0, 0.7) == 1.0);
        CHECK(hermite(3, 0.5) == doctest::Approx(8 * 0.125 - 12 * 0.5));
        CHECK(hermite(4, 1.0) == doctest::Approx(16.0 - 48.0 + 12.0));
    }

    TEST_CASE("extrapolation to zero is exact for polynomials") {
        const std::vector<double> h{0.4, 0.2, 0.1};
        std::vector<double> f;
        for (double t : h) f.push_back(3.0 - 2.0 * t + 5.0 * t * t);
        CHECK(extrapolate_to_zero(h, f) == doctest::Approx(3.0).epsilon(1e-13));
    }

    TEST_CASE("parallel_for visits every index once") {
        set_num_threads(3);
        CHECK(num_threads() == 3);
        std::vector<std::atomic<int>> hits(1000);
        parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
        int bad = 0;
        for (auto& h : hits) bad += (h.load() != 1);
        CHECK(bad == 0);
        set_num_threads(0);
    }

    TEST_CASE("quadrature and interpolation helpers") {
        const auto& gl = gauss_legendre(8);
        double s = 0.0;
        for (std::size_t k = 0; k < gl.nodes.size(); ++k) s += gl.weights[k] * std::pow(gl.nodes[k], 14);
        CHECK(s == doctest::Approx(2.0 / 15.0).epsilon(1e-13));
        const auto w = simpson_weights(4, 0.25);
        double integral = 0.0;
        for (int k = 0; k <= 4; ++k) integral += w[k] * std::pow(0.25 * k, 3);
        CHECK(integral == doctest::Approx(0.25));
        std::vector<double> x, y;
        for (int k = 0; k <= 40; ++k) {
            x.push_back(0.05 * k);
            y.push_back(std::sin(x.back()));
        }
        const CubicSpline sp(x, y);
        CHECK(sp(1.234) == doctest::Approx(std::sin(1.234)).epsilon(1e-6));
        CHECK(sp.eval(1.234, 1) == doctest::Approx(std::cos(1.234)).epsilon(1e-4));
    }

    TEST_CASE("dopri integrates the harmonic oscillator") {
        OdeOptions o;
        o.rtol = 1e-11;
        o.atol = 1e-13;
        auto rhs = [](double, const std::array<double, 2>& y) { return std::array<double, 2>{y[1], -y[0]}; };
        const auto y = integrate_dopri<2>(rhs, std::array<double, 2>{1.0, 0.0}, 0.0, 2.0 * std::numbers::pi, o);
        CHECK(y[0] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(y[1]) < 1e-9);
    }
}
