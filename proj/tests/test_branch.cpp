#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "gpvw/ansatz.hpp"
#include "gpvw/branch.hpp"
#include "gpvw/errors.hpp"

using namespace gpvw;
using std::numbers::pi;

namespace {

BranchTable synthetic(const std::vector<double>& cs, const std::function<double(double)>& E,
                      const std::function<double(double)>& P,
                      const std::function<double(double)>& K = [](double) { return 0.0; }) {
    BranchTable t;
    for (double c : cs) {
        BranchPoint b;
        b.c = c;
        b.energy = E(c);
        b.p = P(c);
        b.kinetic = K(c);
        b.potential = b.energy - b.kinetic;
        b.d = 1.0 / c;
        t.points.push_back(b);
    }
    return t;
}

std::vector<double> speeds(double a, double b, int n) { return branch_speeds(a, b, n); }

}  // namespace

TEST_SUITE("branch") {

TEST_CASE("branch speeds") {
    const std::vector<double> c = branch_speeds(0.1, 0.2, 6);
    REQUIRE(c.size() == 6);
    CHECK(c.front() == 0.1);
    CHECK(c.back() == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(c[2] == doctest::Approx(0.14).epsilon(1e-14));
    CHECK(branch_speeds(0.1, 0.2, 1) == std::vector<double>{0.2});
}

TEST_CASE("Hamilton residuals") {
    const BranchTable exact = synthetic(speeds(0.1, 0.2, 6), [](double c) { return c * c; }, [](double c) { return 2 * c; });
    for (double r : hamilton_residuals(exact)) CHECK(r < 1e-12);

    const std::vector<double> cs = speeds(0.1, 0.2, 6);
    const BranchTable bad = synthetic(cs, [](double c) { return c * c * c; }, [](double c) { return 2 * c; });
    const std::vector<double> r = hamilton_residuals(bad);
    REQUIRE(r.size() == 4);
    for (std::size_t k = 0; k < r.size(); ++k) {
        const double c = cs[k + 1];
        // Central differences of c^3 carry an h^2 term: dE/dc = 3c^2 + h^2.
        const double h = cs[1] - cs[0];
        const double dE = 3 * c * c + h * h;
        CHECK(r[k] == doctest::Approx(std::abs(dE - 2 * c) / dE).epsilon(1e-10));
        CHECK(r[k] == doctest::Approx(std::abs(3 * c * c - 2 * c) / (3 * c * c)).epsilon(0.05));
    }
}

TEST_CASE("momentum derivative check") {
    const std::vector<double> cs = speeds(0.1, 0.2, 21);
    const BranchTable t = synthetic(cs, [](double c) { return -c; }, [](double c) { return 2 * pi / c; });
    const std::vector<double> r = dPdc_check(t);
    REQUIRE(r.size() == cs.size() - 2);
    const double h = cs[1] - cs[0];
    for (std::size_t k = 0; k < r.size(); ++k) {
        // The central difference of 2 pi / c is 2 pi / (c^2 - h^2).
        const double c = cs[k + 1];
        CHECK(r[k] == doctest::Approx(c * c / (c * c - h * h)).epsilon(1e-10));
        CHECK(r[k] == doctest::Approx(1.0).epsilon(3e-3));
    }
}

TEST_CASE("energy against log momentum") {
    const BranchTable t = synthetic(speeds(0.1, 0.2, 6), [](double c) { return 2 * pi * std::log(2 * pi / c) + 3; },
                                    [](double c) { return 2 * pi / c; });
    const SlopeFit fit = emin_slope_vs_logp(t);
    CHECK(std::abs(fit.slope - 2 * pi) < 1e-10);
    CHECK(std::abs(fit.intercept - 3.0) < 1e-9);
    CHECK(fit.rms_residual < 1e-10);
    CHECK(fit.concave);  // ln is concave
    for (double s : fit.second_differences) CHECK(s < 0.0);

    const BranchTable convex = synthetic(speeds(0.1, 0.2, 6), [](double c) { return std::pow(2 * pi / c, 2); },
                                         [](double c) { return 2 * pi / c; });
    CHECK_FALSE(emin_slope_vs_logp(convex).concave);

    const BranchTable narrow = synthetic(speeds(0.18, 0.2, 6), [](double c) { return c; }, [](double c) { return 1 / c; });
    CHECK_THROWS_AS(emin_slope_vs_logp(narrow), InputError);
    const BranchTable few = synthetic(speeds(0.1, 0.2, 3), [](double c) { return c; }, [](double c) { return 1 / c; });
    CHECK_THROWS_AS(emin_slope_vs_logp(few), InputError);
}

TEST_CASE("action along a planted branch peaks at c_star") {
    const std::vector<double> cs = speeds(0.1, 0.2, 11);
    const BranchTable t = synthetic(cs, [](double c) { return 2 * pi * std::log(1 / c); }, [](double c) { return 2 * pi / c; });
    for (std::size_t k = 1; k + 1 < cs.size(); ++k) {
        const ActionProfile a = action_along_branch(t, cs[k]);
        CHECK(a.nearest == k);
        CHECK(a.argmax == k);
        CHECK(a.values[k] == doctest::Approx(2 * pi * std::log(1 / cs[k]) - 2 * pi).epsilon(1e-12));
    }
    CHECK_THROWS_AS(action_along_branch(t, 0.1), InputError);
    CHECK_THROWS_AS(action_along_branch(t, 0.3), InputError);
}

TEST_CASE("kinetic monotonicity") {
    const BranchTable t = synthetic(speeds(0.1, 0.2, 21), [](double c) { return 0 * c; }, [](double c) { return 1 / c; },
                                    [](double c) { return 2 * pi * std::log(1 / c); });
    const KineticCheck k = kinetic_monotonicity(t);
    CHECK(k.strictly_decreasing);
    for (double r : k.ratios) CHECK(r == doctest::Approx(1.0).epsilon(1e-3));
    const BranchTable up = synthetic(speeds(0.1, 0.2, 6), [](double c) { return c; }, [](double c) { return 1 / c; },
                                     [](double c) { return c; });
    CHECK_FALSE(kinetic_monotonicity(up).strictly_decreasing);
}

TEST_CASE("monotonicity in c") {
    CHECK(monotone_in_c(synthetic(speeds(0.1, 0.2, 6), [](double c) { return -c; }, [](double c) { return 1 / c; })));
    CHECK_FALSE(monotone_in_c(synthetic(speeds(0.1, 0.2, 6), [](double c) { return c; }, [](double c) { return 1 / c; })));
}

TEST_CASE("CSV round trip") {
    BranchTable t = synthetic(speeds(0.1, 0.2, 6), [](double c) { return std::log(1 / c) * 6.283; },
                              [](double c) { return 2 * pi / c; }, [](double c) { return std::sqrt(c); });
    t.points[2].pohozaev_rel = 1.2345678901234567e-3;
    t.points[3].residual = 3.3e-7;
    std::stringstream out;
    write_branch_csv(out, t);
    const std::string text = out.str();
    CHECK(text.rfind("c,p,energy,kinetic,potential,d,pohozaev_rel,residual\n", 0) == 0);
    std::stringstream in(text);
    const BranchTable back = read_branch_csv(in);
    REQUIRE(back.size() == t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        CHECK(back.points[k].c == t.points[k].c);
        CHECK(back.points[k].p == t.points[k].p);
        CHECK(back.points[k].energy == t.points[k].energy);
        CHECK(back.points[k].kinetic == t.points[k].kinetic);
        CHECK(back.points[k].potential == t.points[k].potential);
        CHECK(back.points[k].d == t.points[k].d);
        CHECK(back.points[k].pohozaev_rel == t.points[k].pohozaev_rel);
        CHECK(back.points[k].residual == t.points[k].residual);
    }
    std::stringstream again;
    write_branch_csv(again, back);
    CHECK(again.str() == text);

    std::stringstream bad_header("c,p,energy\n0.1,1,2\n");
    CHECK_THROWS_AS(read_branch_csv(bad_header), FormatError);
    std::stringstream bad_row("c,p,energy,kinetic,potential,d,pohozaev_rel,residual\n0.1,1,2,x,4,5,6,7\n");
    CHECK_THROWS_AS(read_branch_csv(bad_row), FormatError);
    std::stringstream short_row("c,p,energy,kinetic,potential,d,pohozaev_rel,residual\n0.1,1,2\n");
    CHECK_THROWS_AS(read_branch_csv(short_row), FormatError);
}

TEST_CASE("a one-point branch equals the fixed-speed solve") {
    const VortexProfile prof = solve_profile(1, 30.0, 6000, 1e-10);
    const GridSpec g = make_grid(30.0, 257);
    BranchOptions opt;
    opt.profile = &prof;
    const BranchTable t = continue_branch(0.0, 0.2, 1, g, {}, opt);
    const TravellingWave tw = solve_fixed_c(two_vortex(g, {5.0, &prof}), 0.2);
    REQUIRE(t.size() == 1);
    CHECK(t.grid == g);
    const BranchPoint b = branch_point(tw);
    CHECK(t.points[0].c == b.c);
    CHECK(t.points[0].p == b.p);
    CHECK(t.points[0].energy == b.energy);
    CHECK(t.points[0].d == b.d);

    CHECK_THROWS_AS(continue_branch(0.2, 0.1, 6, g, {}, opt), InputError);
    CHECK_THROWS_AS(continue_branch(0.01, 0.2, 6, g, {}, opt), InputError);
    CHECK_THROWS_AS(continue_branch(0.1, 0.6, 6, g, {}, opt), InputError);
}

}
