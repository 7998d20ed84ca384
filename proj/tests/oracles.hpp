#pragma once

#include <functional>
#include <vector>

#include "gpvw/field.hpp"
#include "gpvw/vortex_profile.hpp"

// Reference computations used by the tests. They share no code with the
// library: quadrature is Gauss-Legendre, the vortex slope comes from shooting.
namespace oracle {

/// Slope rho'(0) of the degree-one vortex profile on the half line, by RK4
/// shooting from the series rho = k r - k r^3 / 8 and bisection on k: too large
/// a slope overshoots 1, too small a slope turns back down.
double shooting_kappa(double r_end = 14.0, double step = 2e-3);

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
Rule gauss_legendre(int n);

/// Composite tensor Gauss-Legendre quadrature of f over [a, b]^2 with `panels`
/// panels per direction and `order` points per panel.
double integrate_square(const std::function<double(double, double)>& f, double a, double b, int panels, int order);

/// Composite Gauss-Legendre quadrature of f over [a, b].
double integrate_line(const std::function<double(double)>& f, double a, double b, int panels, int order);

/// Degree-`degree` vortex rho(|x - c|) e^{i deg theta} sampled on a grid with a unit ghost ring.
gpvw::Field2D planted_vortex(const gpvw::GridSpec& grid, const gpvw::VortexProfile& profile, gpvw::Point centre,
                             int degree);

}  // namespace oracle
