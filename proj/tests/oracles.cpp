#include "oracles.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "gpvw/vortex_profile.hpp"

namespace oracle {

namespace {

enum class Fate { overshoot, turns_down, undecided };

/// Integrates the profile ODE as a first-order system in (rho, rho').
Fate shoot(double k, double r_end, double step) {
    auto rhs = [](double r, const std::array<double, 2>& y) {
        const double rho = y[0], d = y[1];
        return std::array<double, 2>{d, -d / r + rho / (r * r) - rho * (1.0 - rho * rho)};
    };
    double r = 1e-3;
    std::array<double, 2> y{k * r - k * r * r * r / 8.0, k - 3.0 * k * r * r / 8.0};
    while (r < r_end) {
        const auto k1 = rhs(r, y);
        const auto k2 = rhs(r + step / 2, {y[0] + step / 2 * k1[0], y[1] + step / 2 * k1[1]});
        const auto k3 = rhs(r + step / 2, {y[0] + step / 2 * k2[0], y[1] + step / 2 * k2[1]});
        const auto k4 = rhs(r + step, {y[0] + step * k3[0], y[1] + step * k3[1]});
        for (int m = 0; m < 2; ++m) y[m] += step / 6 * (k1[m] + 2 * k2[m] + 2 * k3[m] + k4[m]);
        r += step;
        if (y[0] > 1.0) return Fate::overshoot;
        if (y[1] < 0.0) return Fate::turns_down;
    }
    return Fate::undecided;
}

}  // namespace

double shooting_kappa(double r_end, double step) {
    double lo = 0.3, hi = 1.0;
    for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        const Fate f = shoot(mid, r_end, step);
        if (f == Fate::overshoot) hi = mid;
        else if (f == Fate::turns_down) lo = mid;
        else break;
    }
    return 0.5 * (lo + hi);
}

Rule gauss_legendre(int n) {
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

double integrate_line(const std::function<double(double)>& f, double a, double b, int panels, int order) {
    const Rule rule = gauss_legendre(order);
    const double w = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * w;
        for (int k = 0; k < order; ++k) sum += rule.weights[k] * f(mid + 0.5 * w * rule.nodes[k]);
    }
    return sum * 0.5 * w;
}

double integrate_square(const std::function<double(double, double)>& f, double a, double b, int panels, int order) {
    return integrate_line([&](double y) { return integrate_line([&](double x) { return f(x, y); }, a, b, panels, order); },
                          a, b, panels, order);
}

gpvw::Field2D planted_vortex(const gpvw::GridSpec& grid, const gpvw::VortexProfile& profile, gpvw::Point centre,
                             int degree) {
    gpvw::Field2D u(grid);
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i) - centre.x, y = grid.y(j) - centre.y;
            const double r = std::hypot(x, y);
            const double rho = gpvw::eval_profile(profile, r).rho;
            u(i, j) = r > 0.0 ? rho * gpvw::cplx(x, degree * y) / r : gpvw::cplx(0.0, 0.0);
        }
    return u;
}

}  // namespace oracle
