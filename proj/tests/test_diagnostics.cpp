#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gpvw/ansatz.hpp"
#include "gpvw/errors.hpp"
#include "gpvw/field_ops.hpp"
#include "gpvw/vortex_diagnostics.hpp"
#include "oracles.hpp"

using namespace gpvw;
using std::numbers::pi;

namespace {

const VortexProfile& profile() {
    static const VortexProfile p = solve_profile(1, 30.0, 6000, 1e-10);
    return p;
}

VortexSet single(Point y, int degree) {
    VortexSet vs;
    vs.entries.push_back({y, degree, true});
    return vs;
}

VortexSet pair(double d) {
    VortexSet vs;
    vs.entries = {{{-d, 0.0}, -1, true}, {{d, 0.0}, 1, true}};
    return vs;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("rescaling planted zeros") {
    const double d = 7.0;
    const VortexSet r = rescale(pair(d), 2 * pi * d);
    REQUIRE(r.size() == 2);
    CHECK(r.frame == Frame::rescaled);
    CHECK(r.scale == doctest::Approx(2 * pi * d).epsilon(1e-15));
    CHECK(r.entries[0].degree == 1);  // +1 first
    CHECK(r.entries[0].position.x == doctest::Approx(1 / (2 * pi)).epsilon(1e-15));
    CHECK(r.entries[1].position.x == doctest::Approx(-1 / (2 * pi)).epsilon(1e-15));
    CHECK(r.entries[0].position.y == 0.0);
    CHECK_THROWS_AS(rescale(pair(d), 0.0), InputError);

    TravellingWave tw;
    tw.p = 2 * pi * d;
    tw.zeros = pair(d);
    const VortexSet rv = rescaled_vortices(tw);
    CHECK(rv.entries[0].position.x == doctest::Approx(1 / (2 * pi)).epsilon(1e-15));
    tw.zeros.entries.pop_back();
    CHECK_THROWS_AS(rescaled_vortices(tw), TopologyError);
}

TEST_CASE("Jacobian defect of a planted point mass vanishes") {
    const GridSpec g = make_grid(5.0, 101);
    ScalarField j{g, std::vector<double>(g.size(), 0.0)};
    const int i0 = (g.nx - 1) / 2 + 10, j0 = (g.ny - 1) / 2;
    j.values[g.index(i0, j0)] = pi / g.cell_area();
    const VortexSet vs = single({g.x(i0), g.y(j0)}, 1);
    const std::vector<double> defect = jacobian_concentration_defect(j, vs, 2.0, {0.5, 1.0, 2.0});
    REQUIRE(defect.size() == 1);
    CHECK(defect[0] < 1e-3);
    // The opposite degree sees twice the mass.
    const VortexSet neg = single({g.x(i0), g.y(j0)}, -1);
    CHECK(jacobian_concentration_defect(j, neg, 2.0, {2.0})[0] == doctest::Approx(4 * pi).epsilon(1e-12));
}

TEST_CASE("Jacobian defect of a single vortex against the radial oracle") {
    // For rho e^{i theta} the centred tent (s - r)_+ pairs with Ju = rho rho' / r to
    // pi int_0^s rho^2 dr, so the defect is pi int_0^s (1 - rho^2) dr.
    const GridSpec g = make_grid(10.0, 401);
    const Field2D u = oracle::planted_vortex(g, profile(), {0.0, 0.0}, 1);
    const VortexSet vs = single({0.0, 0.0}, 1);
    for (double s : {2.0, 4.0, 6.0}) {
        const double exact = pi * oracle::integrate_line(
                                      [](double r) {
                                          const double rho = eval_profile(profile(), r).rho;
                                          return 1.0 - rho * rho;
                                      },
                                      0.0, s, 40, 8);
        const double measured = jacobian_concentration_defect(u, vs, s, {s})[0];
        CHECK(measured == doctest::Approx(exact).epsilon(2e-3));
    }
    CHECK_THROWS_AS(jacobian_concentration_defect(u, vs, 12.0, {2.0}), InputError);
    CHECK_THROWS_AS(jacobian_concentration_defect(u, vs, 1.0, {2.0}), InputError);
    CHECK_THROWS_AS(jacobian_concentration_defect(u, pair(1.0), 2.0, {1.0}), InputError);
}

TEST_CASE("clearing out") {
    const Field2D one(make_grid(10.0, 65));
    CHECK(clearing_out_audit(one, VortexSet{}, 5.0) == 1.0);
    const Field2D u = two_vortex(make_grid(40.0, 321), {8.0, &profile()});
    const double m = clearing_out_audit(u, pair(8.0), 5.0);
    CHECK(m >= 0.85);
    CHECK(m < 1.0);
    CHECK(clearing_out_audit(u, VortexSet{}, 5.0) < 0.05);
}

TEST_CASE("energy partition") {
    const Field2D one(make_grid(10.0, 65));
    const EnergyPartition z = vortex_energy_partition(one, pair(3.0), 1.0);
    CHECK(z.total == 0.0);
    CHECK(z.exterior_energy == 0.0);
    CHECK(z.exterior_potential == 0.0);
    for (double e : z.disk_energies) CHECK(e == 0.0);

    const Field2D u = two_vortex(make_grid(40.0, 321), {8.0, &profile()});
    const EnergyPartition part = vortex_energy_partition(u, pair(8.0), 4.0);
    CHECK(part.total == doctest::Approx(energy(u).total).epsilon(1e-12));
    CHECK(part.disk_energies[0] + part.disk_energies[1] + part.exterior_energy ==
          doctest::Approx(part.total).epsilon(1e-12));
    CHECK(part.disk_energies[0] == doctest::Approx(part.disk_energies[1]).epsilon(1e-12));
    CHECK(part.disk_energies[0] > pi * std::log(4.0));
    CHECK_THROWS_AS(vortex_energy_partition(u, pair(8.0), 9.0), InputError);

    double dens_sum = 0.0;
    for (double v : energy_density(u).values) dens_sum += v;
    CHECK(dens_sum == doctest::Approx(energy(u).total).epsilon(1e-12));
}

TEST_CASE("modulus decay near a vortex") {
    const GridSpec g = make_grid(40.0, 401);
    const Field2D u = oracle::planted_vortex(g, profile(), {0.0, 0.0}, 1);
    const auto rows = modulus_decay_near_vortex(u, single({0.0, 0.0}, 1), 5.0, 25.0);
    REQUIRE(rows.size() == 16);
    for (const auto& row : rows) {
        CHECK(2.0 * row.modulus >= 0.8);
        CHECK(2.0 * row.modulus <= 1.2);
    }
    const Field2D one(g);
    for (const auto& row : modulus_decay_near_vortex(one, pair(10.0), 4.0, 5.0)) {
        CHECK(row.modulus == 0.0);
        CHECK(row.gradient == 0.0);
    }
    // Annuli never get thinner than one grid spacing.
    CHECK(modulus_decay_near_vortex(one, pair(10.0), 4.0, 4.5, 16).size() == 2);
    CHECK_THROWS_AS(modulus_decay_near_vortex(one, pair(10.0), 5.0, 4.0), RangeError);

    TravellingWave tw;
    tw.field = u;
    tw.zeros = pair(5.0);
    tw.d = 5.0;
    CHECK_THROWS_AS(modulus_decay_near_vortex(tw), RangeError);
}

TEST_CASE("Kirchhoff action") {
    const KirchhoffAction crit = kirchhoff_action({1 / (2 * pi), 0.0}, {-1 / (2 * pi), 0.0});
    for (double gk : crit.gradient) CHECK(std::abs(gk) < 1e-10);

    const KirchhoffAction a = kirchhoff_action({0.3, 0.1}, {-0.2, 0.4});
    const KirchhoffAction b = kirchhoff_action({0.3 + 1.7, 0.1 - 2.2}, {-0.2 + 1.7, 0.4 - 2.2});
    CHECK(b.value == doctest::Approx(a.value).epsilon(1e-13));

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int k = 0; k < 5; ++k) {
        std::array<double, 4> y{dist(rng), dist(rng), dist(rng), dist(rng)};
        const KirchhoffAction at = kirchhoff_action({y[0], y[1]}, {y[2], y[3]});
        for (int m = 0; m < 4; ++m) {
            // Fourth-order central differences (close pairs have large higher derivatives).
            const double h = 1e-4;
            auto at_offset = [&](double t) {
                auto z = y;
                z[m] += t;
                return kirchhoff_action({z[0], z[1]}, {z[2], z[3]}).value;
            };
            const double fd = (at_offset(-2 * h) - 8 * at_offset(-h) + 8 * at_offset(h) - at_offset(2 * h)) / (12 * h);
            CHECK(std::abs(fd - at.gradient[m]) <= 1e-8 * std::max(1.0, std::abs(at.gradient[m])));
        }
    }
    CHECK_THROWS_AS(kirchhoff_action({0.1, 0.2}, {0.1, 0.2}), InputError);
}

TEST_CASE("speed and modulus bounds") {
    const SpeedBoundAudit trivial = speed_bound_audit(0.0, 0.0, 0.0, 1.0);
    CHECK(trivial.speed_ok);
    CHECK(trivial.linf_ok);
    CHECK(trivial.linf_slack == doctest::Approx(1e-3));

    const double E = 20.0, p = 40.0;
    const SpeedBoundAudit violating = speed_bound_audit(3 * E / p, E, p, 1.0);
    CHECK_FALSE(violating.speed_ok);
    CHECK(violating.speed_slack == doctest::Approx(-E / p));
    CHECK(violating.linf_ok);

    const SpeedBoundAudit ok = speed_bound_audit(0.15, E, p, 1.005);
    CHECK(ok.speed_ok);
    CHECK(ok.linf_ok);
    CHECK_FALSE(speed_bound_audit(0.15, E, p, 1.01).linf_ok);
}

}
