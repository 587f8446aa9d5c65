#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "stira/errors.hpp"
#include "stira/ramps.hpp"

using namespace stira;

namespace {

void check_derivatives(const Ramp& r, double tol = 1e-6) {
    const double h = 1e-5 * r.t_f;
    for (double s : {0.05, 0.21, 0.5, 0.73, 0.95}) {
        const double t = s * r.t_f;
        const double fd = (r.g(t + h) - r.g(t - h)) / (2.0 * h);
        INFO("kind=", to_string(r.kind), " t=", t);
        CHECK(std::abs(fd - r.g_dot(t)) < tol * std::max(1.0, std::abs(fd)));
    }
}

}  // namespace

TEST_CASE("switching function: boundary conditions are exact") {
    for (const double tf : {0.5, 2.0, 10.0}) {
        const SwitchingFunction sf(tf);
        CHECK(sf.boundary_residual() < 1e-12);
        CHECK(sf.eta(0.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
        CHECK(sf.eta(tf) == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK_THROWS_AS(SwitchingFunction(0.0), ConfigError);
    CHECK_THROWS_AS(SwitchingFunction(5.0).eta(-0.1), std::domain_error);
    CHECK_THROWS_AS(SwitchingFunction(5.0).eta(5.1), std::domain_error);
}

TEST_CASE("switching function: solved coefficients match the closed quintic") {
    // solving the boundary system reproduces 10 s^3 - 15 s^4 + 6 s^5
    const SwitchingFunction sf(7.0);
    const auto& c = sf.coefficients();
    const std::vector<double> expect = {0.0, 0.0, 0.0, 10.0, -15.0, 6.0};
    for (int j = 0; j < 6; ++j) CHECK(c[j] == doctest::Approx(expect[j]).scale(1.0).epsilon(1e-12));
    CHECK(sf.eta(3.5) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(sf.eta_dot(3.5) == doctest::Approx(15.0 / (8.0 * 7.0)).epsilon(1e-13));
}

TEST_CASE("switching function: strictly increasing inside") {
    const SwitchingFunction sf(3.0);
    double prev = sf.eta(0.0);
    for (int i = 1; i <= 300; ++i) {
        const double cur = sf.eta(3.0 * i / 300.0);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("reference ramp: endpoints, derivatives, midpoint value") {
    const Ramp r = make_reference_ramp(20.0, 10.0);
    CHECK(r.g(0.0) == 0.0);
    CHECK(r.g(10.0) == doctest::Approx(20.0).epsilon(1e-14));
    CHECK(r.g(5.0) == doctest::Approx(12.374368670764581677).epsilon(1e-14));
    CHECK(r.g_dot(0.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    CHECK(r.g_dot(10.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    CHECK(r.g_ddot(0.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    CHECK(r.g_ddot(10.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    check_derivatives(r);
}

TEST_CASE("linear ramp: affine map") {
    const Ramp r = make_linear_ramp(0.0, 20.0, 4.0);
    CHECK(r.g(0.0) == 0.0);
    CHECK(r.g(4.0) == 20.0);
    CHECK(r.g(2.0) == doctest::Approx(10.0).epsilon(1e-15));
    check_derivatives(r);
    const Ramp c = make_constant_ramp(7.0, 3.0);
    CHECK(c.g(1.234) == 7.0);
    CHECK(c.g_dot(1.234) == 0.0);
}

TEST_CASE("tabulated ramp: reproduces smooth pulses and keeps endpoints") {
    const Ramp ref = make_reference_ramp(20.0, 10.0);
    std::vector<double> ts, gs;
    for (int i = 0; i <= 2048; ++i) {
        ts.push_back(10.0 * i / 2048);
        gs.push_back(ref.g(ts.back()));
    }
    const Ramp tab = make_tabulated_ramp(ts, gs);
    CHECK(tab.g(0.0) == 0.0);
    CHECK(tab.g(10.0) == doctest::Approx(20.0).epsilon(1e-12));
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> td(0.0, 10.0);
    for (int i = 0; i < 200; ++i) {
        const double t = td(rng);
        CHECK(tab.g(t) == doctest::Approx(ref.g(t)).epsilon(1e-8).scale(1.0));
    }
    check_derivatives(tab, 2e-5);
    CHECK_THROWS_AS(tab.g(10.5), std::domain_error);
    // interpolation of monotone data stays inside the data range
    const Ramp mono = make_tabulated_ramp({0.0, 1.0, 1.5, 4.0}, {0.0, 0.1, 4.0, 5.0});
    for (double t = 0.0; t <= 4.0; t += 0.01) {
        CHECK(mono.g(t) >= -1e-12);
        CHECK(mono.g(t) <= 5.0 + 1e-12);
    }
}

TEST_CASE("tabulated ramp: input validation") {
    CHECK_THROWS_AS(make_tabulated_ramp({0.0}, {1.0}), ConfigError);
    CHECK_THROWS_AS(make_tabulated_ramp({0.0, 0.0}, {1.0, 2.0}), ConfigError);
}

TEST_CASE("negative-g flag") {
    const Ramp r = make_linear_ramp(-1.0, 5.0, 2.0);
    CHECK(r.negative_g());
    const Ramp p = make_reference_ramp(20.0, 10.0);
    CHECK(!p.negative_g());
}
