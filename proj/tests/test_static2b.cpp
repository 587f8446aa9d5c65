#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "stira/errors.hpp"
#include "stira/quadrature.hpp"
#include "stira/ramps.hpp"
#include "stira/static2b.hpp"
#include "stira/tdse.hpp"

using namespace stira;
using static2b::even_energy;
using static2b::implicit_residual;
using static2b::RelativeEigenstate;

namespace {

// 50-digit references computed before the build
struct ERef {
    double g, e;
};
const std::vector<ERef> kEnergyRefs = {
    {1.0, 0.89274404530895262279},   {5.0, 1.296122873915301554},
    {20.0, 1.4446855793507673779},   {40.0, 1.4720513433677465411},
    {1.47935, 1.0000023550514621835}, {-1.0, -0.34241894678128867731},
    {-2.5, -3.0865078522270095971},  {1000.0, 1.4988720126346626898},
    {10000.0, 1.4998871659913679767},
};

}  // namespace

TEST_CASE("even_energy: exact free limit and references") {
    CHECK(even_energy(0.0, 0) == 0.5);
    CHECK(even_energy(0.0, 3) == 6.5);
    for (const auto& ref : kEnergyRefs) {
        INFO("g=", ref.g);
        CHECK(even_energy(ref.g) == doctest::Approx(ref.e).epsilon(1e-12));
    }
    CHECK(std::abs(even_energy(1e4) - 1.5) < 5e-3);
    CHECK(even_energy(1.47935) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("even_energy: residual of the implicit condition") {
    for (const double g : {1.0, 5.0, 20.0, 40.0}) {
        const double e = even_energy(g);
        CHECK(std::abs(implicit_residual(e, g)) < 1e-10);
    }
    for (int branch : {1, 2, 3}) {
        const double e = even_energy(20.0, branch);
        CHECK(e > 2.0 * branch + 0.5);
        CHECK(e < 2.0 * branch + 1.5);
        CHECK(std::abs(implicit_residual(e, 20.0)) < 1e-10);
    }
}

TEST_CASE("even_energy: strong-coupling degeneracy with the odd ladder") {
    for (int branch : {0, 1, 2})
        CHECK(even_energy(1e6, branch) == doctest::Approx(2.0 * branch + 1.5).epsilon(2e-6));
}

TEST_CASE("even_energy: rejects unsupported input") {
    CHECK_THROWS_AS(even_energy(-1.0, 1), SolverError);
    CHECK_THROWS_AS(even_energy(std::numeric_limits<double>::infinity()), SolverError);
    CHECK_THROWS_AS(even_energy(1.0, -2), SolverError);
}

TEST_CASE("eigenstate: free case is the Gaussian") {
    const auto phi = RelativeEigenstate::solve(0.0);
    CHECK(phi.energy() == 0.5);
    for (const double x : {0.0, 0.5, 1.7, 3.0})
        CHECK(phi(x) == doctest::Approx(std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x)).epsilon(1e-12));
}

TEST_CASE("eigenstate: norm, parity, cusp") {
    for (const double g : {1.0, 5.0, 20.0, -1.0}) {
        const auto phi = RelativeEigenstate::solve(g);
        const double nrm =
            2.0 * adaptive_simpson([&](double x) { return phi(x) * phi(x); }, 0.0, 15.0, 1e-12);
        INFO("g=", g);
        CHECK(nrm == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(phi(1.3) == phi(-1.3));  // even by construction
        // one-sided derivative jump from the contact interaction
        const double h = 1e-4;
        const double deriv = (phi(h) - phi(0.0)) / h;
        CHECK(deriv == doctest::Approx(g * phi.central_value()).epsilon(1e-4).scale(1.0));
        CHECK(phi.central_value() > 0.0);
    }
}

TEST_CASE("eigenstate: strong-coupling limit profile") {
    const auto tg = RelativeEigenstate::strong_coupling_limit();
    const double c = std::pow(M_PI / 4.0, -0.25);
    for (const double x : {0.0, 0.4, 1.0, 2.2})
        CHECK(tg(x) == doctest::Approx(c * std::abs(x) * std::exp(-0.5 * x * x)).epsilon(1e-14));
    // pointwise convergence of the density at large finite g
    const auto phi = RelativeEigenstate::solve(2000.0);
    for (const double x : {0.5, 1.0, 1.8})
        CHECK(phi(x) * phi(x) == doctest::Approx(tg(x) * tg(x)).epsilon(2e-3));
}

TEST_CASE("eigenstate: sampled values match the grid-diagonalization oracle") {
    const auto phi = RelativeEigenstate::solve(20.0);
    tdse::GridConfig gc;
    gc.points = 2001;
    const auto ground = tdse::grid_ground(20.0, gc);
    // L2 distance over the sampled grid
    double dist2 = 0.0, norm2 = 0.0;
    for (size_t i = 0; i < ground.state.x.size(); ++i) {
        const double diff = phi(ground.state.x[i]) - ground.state.psi(i).real();
        dist2 += diff * diff * ground.state.dx;
        norm2 += phi(ground.state.x[i]) * phi(ground.state.x[i]) * ground.state.dx;
    }
    CHECK(std::sqrt(dist2 / norm2) < 1e-3);
}

TEST_CASE("ground_energy_curve: samples, residuals, monotonicity") {
    std::vector<double> gs = {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0, 100.0, 1e4};
    const auto curve = static2b::ground_energy_curve(gs);
    REQUIRE(curve.samples.size() == gs.size());
    CHECK(curve.samples.front().second == 0.5);
    CHECK(curve.samples.back().second == doctest::Approx(1.5).epsilon(5e-3));
    for (size_t i = 0; i + 1 < curve.samples.size(); ++i)
        CHECK(curve.samples[i].second < curve.samples[i + 1].second);
    // the absolute residual scales with g^2 near the strong-coupling edge,
    // so the tight bound applies to the moderate couplings
    for (const auto& [g, e] : curve.samples)
        if (g != 0.0 && g <= 50.0) CHECK(std::abs(implicit_residual(e, g)) < 1e-10);
    CHECK(curve.samples[4].second == doctest::Approx(1.296122873915301554).epsilon(1e-12));
}

TEST_CASE("adiabatic_energy: endpoint values and the center-of-mass flag") {
    const Ramp ramp = make_reference_ramp(20.0, 10.0);
    CHECK(static2b::adiabatic_energy(ramp, 0.0) == 0.5);
    CHECK(static2b::adiabatic_energy(ramp, 10.0) == doctest::Approx(even_energy(20.0)).epsilon(1e-12));
    CHECK(static2b::adiabatic_energy(ramp, 0.0, true) == 1.0);
    CHECK(static2b::adiabatic_energy(ramp, 5.0) ==
          doctest::Approx(even_energy(ramp.g(5.0))).epsilon(1e-12));
}
