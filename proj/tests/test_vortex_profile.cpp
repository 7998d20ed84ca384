#include <cmath>

#include "doctest.h"
#include "gpvw/errors.hpp"
#include "gpvw/vortex_profile.hpp"
#include "oracles.hpp"

using namespace gpvw;

namespace {

const VortexProfile& reference_profile() {
    static const VortexProfile p = solve_profile(1, 30.0, 6000, 1e-10);
    return p;
}

}  // namespace

TEST_SUITE("profile") {

TEST_CASE("profile is monotone, bounded and has the algebraic tail") {
    const VortexProfile& p = reference_profile();
    CHECK(p.rho.front() == 0.0);
    CHECK(p.residual < 1e-10);
    for (int i = 1; i < p.nodes; ++i) {
        CHECK(p.rho[i] > p.rho[i - 1]);
        CHECK(p.rho[i] < 1.0);
    }
    for (int i = 1; i + 1 < p.nodes; ++i) CHECK(p.drho[i] > 0.0);
    for (int i = 0; i < p.nodes; ++i) {
        if (p.r[i] < 8.0 || p.r[i] > 27.0) continue;
        CHECK(std::abs((1.0 - p.rho[i]) * 2.0 * p.r[i] * p.r[i] - 1.0) < 0.1);
    }
    const ProfileSample at10 = eval_profile(p, 10.0);
    CHECK(std::abs((1.0 - at10.rho) / 0.005 - 1.0) < 0.1);
}

TEST_CASE("slope at the core matches shooting") {
    const double kappa = oracle::shooting_kappa();
    CHECK(kappa == doctest::Approx(0.5832).epsilon(1e-3));
    const VortexProfile& p = reference_profile();
    CHECK(std::abs(p.kappa - kappa) < 1e-4);
    CHECK(std::abs(estimate_kappa(p) - kappa) < 1e-4);
}

TEST_CASE("degree -1 has the same modulus") {
    const VortexProfile plus = solve_profile(1, 20.0, 801, 1e-10);
    const VortexProfile minus = solve_profile(-1, 20.0, 801, 1e-10);
    CHECK(minus.degree == -1);
    for (std::size_t i = 0; i < plus.rho.size(); ++i) CHECK(minus.rho[i] == plus.rho[i]);
}

TEST_CASE("second-order convergence under grid refinement") {
    // Nodes 301, 601, 1201 on r_max = 30 share the node r = 3.
    const double r = 3.0;
    double values[3];
    const int nodes[3] = {301, 601, 1201};
    for (int k = 0; k < 3; ++k) {
        const VortexProfile p = solve_profile(1, 30.0, nodes[k], 1e-12);
        const int idx = static_cast<int>(std::lround(r / p.spacing()));
        REQUIRE(std::abs(p.r[idx] - r) < 1e-12);
        values[k] = p.rho[idx];
    }
    const double ratio = (values[0] - values[1]) / (values[1] - values[2]);
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
}

TEST_CASE("interpolation and tail") {
    const VortexProfile& p = reference_profile();
    const ProfileSample origin = eval_profile(p, 0.0);
    CHECK(origin.rho == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(origin.drho == doctest::Approx(p.kappa).epsilon(1e-6));
    const double far = 2.0 * p.r_max;
    CHECK(eval_profile(p, far).rho == doctest::Approx(1.0 - 1.0 / (8.0 * p.r_max * p.r_max)).epsilon(1e-14));
    CHECK(std::abs(eval_profile(p, p.r_max * (1 - 1e-9)).rho - eval_profile(p, p.r_max * (1 + 1e-9)).rho) < 1e-4);

    // Between nodes the interpolant agrees with a grid twice as fine, whose extra node sits there.
    const VortexProfile fine = solve_profile(1, 30.0, 2 * 6000 - 1, 1e-10);
    for (int i : {41, 403, 2001}) {
        const double r_mid = fine.r[i];
        CHECK(std::abs(eval_profile(p, r_mid).rho - fine.rho[i]) < 1e-6);
    }
}

TEST_CASE("slope estimate on synthetic data") {
    VortexProfile p;
    p.r_max = 1.0;
    p.nodes = 11;
    for (int i = 0; i < p.nodes; ++i) p.r.push_back(i * 0.1);
    p.rho.assign(p.nodes, 0.0);
    CHECK(estimate_kappa(p) == 0.0);
    for (int i = 0; i < p.nodes; ++i) p.rho[i] = 0.5 * p.r[i];
    CHECK(estimate_kappa(p) == doctest::Approx(0.5).epsilon(1e-12));
    // rho / r = k + a r^2 + b r^4 is reproduced exactly.
    for (int i = 0; i < p.nodes; ++i) p.rho[i] = p.r[i] * (0.6 - 0.1 * p.r[i] * p.r[i] + 0.02 * std::pow(p.r[i], 4));
    CHECK(estimate_kappa(p) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("profile residual vanishes on the solution and not on a perturbation") {
    const VortexProfile p = solve_profile(1, 20.0, 401, 1e-11);
    double worst = 0.0;
    for (double v : profile_residual(p.r, p.rho)) worst = std::max(worst, std::abs(v));
    CHECK(worst < 1e-10);
    std::vector<double> bumped = p.rho;
    bumped[100] += 1e-3;
    worst = 0.0;
    for (double v : profile_residual(p.r, bumped)) worst = std::max(worst, std::abs(v));
    CHECK(worst > 1e-3);
}

TEST_CASE("invalid inputs are rejected") {
    CHECK_THROWS_AS(solve_profile(2, 30.0, 6000, 1e-10), InputError);
    CHECK_THROWS_AS(solve_profile(1, -1.0, 6000, 1e-10), InputError);
    CHECK_THROWS_AS(solve_profile(1, 30.0, 2, 1e-10), InputError);
}

}
